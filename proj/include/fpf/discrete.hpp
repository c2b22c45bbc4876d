#pragma once

#include <cstddef>
#include <istream>
#include <vector>

namespace fpf::discrete {

/// Finite map V -> P(V). images[i] is the image of vertices[i], given as
/// vertex labels.
struct FiniteMultiMap {
    std::vector<long> vertices;
    std::vector<std::vector<long>> images;

    std::size_t size() const { return vertices.size(); }
    /// Largest image size.
    std::size_t max_image() const;
};

/// Reads `v: a b c` lines. Blank lines and `#` comments are skipped; a vertex
/// seen only as a target gets an empty image. Throws ConfigError with the line
/// number on malformed input.
FiniteMultiMap parse_multimap(std::istream& in);

/// Symmetrised conflict graph on positions 0..size()-1 (sorted, no
/// duplicates). Throws LoopError on v in image(v), ConfigError on a target
/// outside V.
std::vector<std::vector<std::size_t>> conflict_graph(const FiniteMultiMap& g);

/// Smallest-last greedy on the conflict graph; colors[i] belongs to
/// vertices[i]. Uses at most 2k+1 colors for images of size <= k.
std::vector<int> discrete_color_multi(const FiniteMultiMap& g);

/// 3-coloring of a fixed-point-free self-map of {0..n-1}: v and f[v] always
/// differ. Two colors when every cycle is even. Throws LoopError on f[v] == v.
std::vector<int> discrete_color_single(const std::vector<std::size_t>& f);

/// Exact chromatic number of the conflict graph of n -> {n+1, ..., 2n} on
/// {1..N}. Throws ConfigError unless 2 <= N <= max_n.
int doubling_min_colors(int n, int max_n = 20);

/// Exact chromatic number by branch and bound with a greedy clique lower
/// bound. Intended for small graphs.
int chromatic_number(const std::vector<std::vector<std::size_t>>& adj);

/// The n -> {n+1, ..., 2n} map restricted to {1..N}.
FiniteMultiMap doubling_map(int n);

int color_count(const std::vector<int>& colors);

}  // namespace fpf::discrete
