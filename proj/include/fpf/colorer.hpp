#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fpf/errors.hpp"
#include "fpf/multimap.hpp"

namespace fpf::color {

using geom::Box;
using geom::CellId;
using geom::DomainComplex;
using mm::MultiMapSpec;

struct ColorClass {
    std::vector<CellId> cells;  // ascending
    double margin = 0.0;        // separation between the cells and their image enclosure
    std::string provenance;     // construction step that produced the class
};

/// Finite cover of a cell set by color classes. Classes may overlap.
struct Coloring {
    std::vector<ColorClass> classes;

    std::size_t size() const { return classes.size(); }
    /// Union of all class cells, ascending.
    std::vector<CellId> covered() const;
};

/// Upper bound K(m, n) on the number of bright colors, following the
/// per-step ledger of the main recursion:
///   K(m, 1) = m + 3
///   K(m, n) = K1                              collision stratum L
///           + n * K1^2                        the n singleton-complement sets E_i
///           + sum_{k=2}^{n-1} C(n,k) * n * K1^2   k-sized index sets, stratified
///           + K1^2                            leftover stratum, single split
/// with K1 = K(m, n-1). Throws Error on non-positive input or overflow.
std::uint64_t bound(int m, int n);

/// Raised when the current cells are too coarse for a step (a cell meets its
/// own image, or no axis separates the top points). The listed cells should be
/// bisected and the coloring retried.
class NeedsRefinement : public ColoringFailed {
public:
    using ColoringFailed::ColoringFailed;
};

/// One closed piece of the image of a cell: the hull of the listed branches.
struct ImagePiece {
    Box box;
    std::vector<int> branches;
};

/// A derived map on a region: per cell, the image pieces the map selects.
using SubMap = std::map<CellId, std::vector<ImagePiece>>;

/// Default accepted margin for a displacement certificate delta.
double default_margin(double delta, double min_margin = 1e-6);

/// The constructive pipeline on a fixed cell complex. Every method returns a
/// coloring of `region` for the derived map whose classes all keep a gap of at
/// least margin() to their own image, or throws.
class Colorer {
public:
    Colorer(const MultiMapSpec& m, const DomainComplex& x, double margin);

    double margin() const { return margin_; }
    std::vector<CellId> all_cells() const;
    /// Every branch as its own piece.
    SubMap full_map(const std::vector<CellId>& region) const;
    SubMap branch_map(const std::vector<CellId>& region, int branch) const;

    /// Whole-domain coloring of f.
    Coloring color_multimap() const;
    /// Recursive step: collision stratum first, then the index-set strata.
    Coloring color_map(const std::vector<CellId>& region, const SubMap& map, const std::string& tag) const;
    /// Base case; every cell must carry exactly one piece.
    Coloring color_single_valued(const std::vector<CellId>& region, const SubMap& map, const std::string& tag) const;
    /// Top group on `axis` against the rest, colored separately and combined.
    Coloring split_argmax(const std::vector<CellId>& region, const SubMap& map, int axis, const std::string& tag) const;
    /// Passes m = 1..n-1 over the strata of constant top multiplicity n - m.
    Coloring stratified(const std::vector<CellId>& region, const SubMap& map, int axis, const std::string& tag) const;

    /// Size of the top cluster on `axis`: pieces whose coordinate intervals
    /// chain-overlap the maximal one. Also reports the gap below the cluster.
    struct TopCluster {
        std::vector<std::size_t> members;  // indices into the cell's pieces
        double gap = 0.0;
    };
    static TopCluster top_cluster(const std::vector<ImagePiece>& pieces, int axis);

private:
    const Box& bounds(CellId id) const;
    bool singleton_axis(const std::vector<ImagePiece>& pieces, int axis) const;
    SubMap merge_overlapping(const std::vector<CellId>& region, const SubMap& map) const;

    const MultiMapSpec& m_;
    const DomainComplex& x_;
    double margin_;
};

/// Product coloring: all nonempty pairwise intersections. Both colorings
/// must cover the same cells.
Coloring product_coloring(const Coloring& g, const Coloring& h, const std::string& provenance = "");

/// Wrappers on a fixed complex (no refinement). Margins default to
/// default_margin(cert.delta).
Coloring color_single_valued(const MultiMapSpec& m, const DomainComplex& x, const mm::FpfCertificate& cert);
Coloring color_multimap(const MultiMapSpec& m, const DomainComplex& x, const mm::FpfCertificate& cert);
Coloring split_argmax_coloring(const MultiMapSpec& m, const DomainComplex& x, const std::vector<CellId>& region,
                               int axis, double margin);
Coloring stratified_coloring(const MultiMapSpec& m, const DomainComplex& x, const std::vector<CellId>& region,
                             int axis, double margin);

struct ColoredDomain {
    DomainComplex complex;
    Coloring coloring;
    double margin = 0.0;
    int refinement_rounds = 0;
};

/// color_multimap on the certificate's complex, bisecting the cells named by
/// NeedsRefinement and retrying up to max_rounds times.
ColoredDomain color_with_refinement(const MultiMapSpec& m, const mm::FpfCertificate& cert, int max_rounds);

struct GreedyResult {
    DomainComplex complex;
    Coloring coloring;
    int rounds = 0;
};

/// Baseline: conflict graph on cells (an edge when one cell's image
/// enclosure comes within `margin` of the other), greedy in descending degree
/// order. Self-conflicting cells are bisected, up to `budget` rounds.
GreedyResult greedy_conflict_coloring(const MultiMapSpec& m, const DomainComplex& x, double margin, int budget = 12);

struct InflateResult {
    ColorClass color;
    double epsilon = 0.0;  // accepted enlargement; 0 when unchanged
    bool enlarged = false;
    std::string report;
};

/// Adds all cells within epsilon of the class, backing off geometrically
/// (epsilon, epsilon/2, ...) until the enlarged class still keeps `margin`.
InflateResult inflate_color(const ColorClass& f, double epsilon, const MultiMapSpec& m, const DomainComplex& x,
                            double margin, int backoff_steps = 8);

}  // namespace fpf::color
