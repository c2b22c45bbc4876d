#include "fpf/discrete.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>

#include "fpf/errors.hpp"

namespace fpf::discrete {

std::size_t FiniteMultiMap::max_image() const {
    std::size_t k = 0;
    for (const auto& im : images) k = std::max(k, im.size());
    return k;
}

int color_count(const std::vector<int>& colors) {
    int n = 0;
    for (int c : colors) n = std::max(n, c + 1);
    return n;
}

FiniteMultiMap parse_multimap(std::istream& in) {
    FiniteMultiMap g;
    std::unordered_map<long, std::size_t> pos;
    std::vector<bool> declared;
    auto slot = [&](long v) {
        auto [it, fresh] = pos.try_emplace(v, g.vertices.size());
        if (fresh) {
            g.vertices.push_back(v);
            g.images.emplace_back();
            declared.push_back(false);
        }
        return it->second;
    };
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto colon = line.find(':');
        auto fail = [&](const std::string& what) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + what);
        };
        if (colon == std::string::npos) fail("expected `v: a b c`");
        std::istringstream head(line.substr(0, colon));
        long v = 0;
        std::string extra;
        if (!(head >> v) || (head >> extra)) fail("bad vertex label");
        const std::size_t i = slot(v);
        if (declared[i]) fail("vertex " + std::to_string(v) + " listed twice");
        declared[i] = true;
        std::istringstream rest(line.substr(colon + 1));
        std::string tok;
        std::vector<long> image;
        while (rest >> tok) {
            std::size_t used = 0;
            long t = 0;
            try {
                t = std::stol(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) fail("bad target `" + tok + "`");
            image.push_back(t);
        }
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        g.images[i] = image;
        for (long t : image) slot(t);
    }
    return g;
}

std::vector<std::vector<std::size_t>> conflict_graph(const FiniteMultiMap& g) {
    if (g.images.size() != g.vertices.size()) throw ConfigError("images and vertices differ in length");
    std::unordered_map<long, std::size_t> pos;
    pos.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!pos.emplace(g.vertices[i], i).second)
            throw ConfigError("duplicate vertex " + std::to_string(g.vertices[i]));
    std::vector<std::vector<std::size_t>> adj(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (long t : g.images[i]) {
            auto it = pos.find(t);
            if (it == pos.end()) throw ConfigError("target " + std::to_string(t) + " is not a vertex");
            if (it->second == i) throw LoopError("vertex " + std::to_string(t) + " lies in its own image", t);
            adj[i].push_back(it->second);
            adj[it->second].push_back(i);
        }
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return adj;
}

std::vector<int> discrete_color_multi(const FiniteMultiMap& g) {
    const auto adj = conflict_graph(g);
    const std::size_t n = adj.size();
    // Smallest-last order with a bucket queue.
    std::vector<std::size_t> degree(n);
    std::size_t max_deg = 0;
    for (std::size_t v = 0; v < n; ++v) max_deg = std::max(max_deg, degree[v] = adj[v].size());
    std::vector<std::vector<std::size_t>> bucket(max_deg + 1);
    for (std::size_t v = 0; v < n; ++v) bucket[degree[v]].push_back(v);
    std::vector<bool> removed(n, false);
    std::vector<std::size_t> order;
    order.reserve(n);
    std::size_t d = 0;
    while (order.size() < n) {
        d = d > 0 ? d - 1 : 0;
        while (bucket[d].empty()) ++d;
        const std::size_t v = bucket[d].back();
        bucket[d].pop_back();
        if (removed[v] || degree[v] != d) continue;  // stale entry
        removed[v] = true;
        order.push_back(v);
        for (std::size_t u : adj[v]) {
            if (removed[u]) continue;
            bucket[--degree[u]].push_back(u);
        }
    }
    std::vector<int> color(n, -1);
    std::vector<int> mark;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t v = *it;
        mark.assign(adj[v].size() + 1, 0);
        for (std::size_t u : adj[v])
            if (color[u] >= 0 && static_cast<std::size_t>(color[u]) < mark.size()) mark[static_cast<std::size_t>(color[u])] = 1;
        int c = 0;
        while (mark[static_cast<std::size_t>(c)]) ++c;
        color[v] = c;
    }
    return color;
}

std::vector<int> discrete_color_single(const std::vector<std::size_t>& f) {
    const std::size_t n = f.size();
    for (std::size_t v = 0; v < n; ++v) {
        if (f[v] >= n) throw ConfigError("f(" + std::to_string(v) + ") is out of range");
        if (f[v] == v) throw LoopError("fixed point at vertex " + std::to_string(v), static_cast<long>(v));
    }
    std::vector<int> color(n, -1);
    // 0 unvisited, 1 on the current walk, 2 finished.
    std::vector<char> state(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (state[s]) continue;
        std::vector<std::size_t> walk;
        std::size_t v = s;
        while (!state[v]) {
            state[v] = 1;
            walk.push_back(v);
            v = f[v];
        }
        if (state[v] == 1) {
            // New cycle starting at v.
            const auto start = std::find(walk.begin(), walk.end(), v) - walk.begin();
            const std::size_t len = walk.size() - static_cast<std::size_t>(start);
            for (std::size_t k = 0; k < len; ++k) color[walk[static_cast<std::size_t>(start) + k]] = static_cast<int>(k % 2);
            if (len % 2 == 1) color[walk.back()] = 2;
            walk.resize(static_cast<std::size_t>(start));
        }
        // Remaining walk vertices hang off colored vertices; color back to front.
        for (auto it = walk.rbegin(); it != walk.rend(); ++it) color[*it] = color[f[*it]] == 0 ? 1 : 0;
        for (std::size_t u : walk) state[u] = 2;
        v = s;
        while (state[v] == 1) {
            state[v] = 2;
            v = f[v];
        }
    }
    return color;
}

namespace {

bool extend(const std::vector<std::vector<std::size_t>>& adj, const std::vector<std::size_t>& order, std::size_t at,
            int k, std::vector<int>& color) {
    if (at == order.size()) return true;
    const std::size_t v = order[at];
    int used = 0;
    for (std::size_t i = 0; i < at; ++i) used = std::max(used, color[order[i]] + 1);
    // Symmetry breaking: never open more than one new color at a time.
    const int limit = std::min(k, used + 1);
    for (int c = 0; c < limit; ++c) {
        bool free = true;
        for (std::size_t u : adj[v])
            if (color[u] == c) {
                free = false;
                break;
            }
        if (!free) continue;
        color[v] = c;
        if (extend(adj, order, at + 1, k, color)) return true;
        color[v] = -1;
    }
    return false;
}

}  // namespace

int chromatic_number(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    if (n == 0) return 0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return adj[a].size() > adj[b].size(); });

    // Greedy clique in degree order for the lower bound.
    std::vector<std::size_t> clique;
    for (std::size_t v : order) {
        bool ok = true;
        for (std::size_t u : clique)
            if (!std::binary_search(adj[v].begin(), adj[v].end(), u)) {
                ok = false;
                break;
            }
        if (ok) clique.push_back(v);
    }
    // Clique first so the bound is met immediately when it is tight.
    std::vector<std::size_t> ordered = clique;
    for (std::size_t v : order)
        if (std::find(clique.begin(), clique.end(), v) == clique.end()) ordered.push_back(v);

    for (int k = static_cast<int>(std::max<std::size_t>(clique.size(), 1));; ++k) {
        std::vector<int> color(n, -1);
        if (extend(adj, ordered, 0, k, color)) return k;
    }
}

FiniteMultiMap doubling_map(int n) {
    FiniteMultiMap g;
    for (long v = 1; v <= n; ++v) {
        g.vertices.push_back(v);
        std::vector<long> image;
        for (long t = v + 1; t <= std::min<long>(2 * v, n); ++t) image.push_back(t);
        g.images.push_back(std::move(image));
    }
    return g;
}

int doubling_min_colors(int n, int max_n) {
    if (n < 2) throw ConfigError("doubling map needs N >= 2");
    if (n > max_n) throw ConfigError("N = " + std::to_string(n) + " exceeds the exact-search cap " + std::to_string(max_n));
    return chromatic_number(conflict_graph(doubling_map(n)));
}

}  // namespace fpf::discrete
