#include "fpf/colorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

namespace fpf::color {

namespace {

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "/" + b; }

// Smallest free color, visiting vertices in the given order.
std::vector<int> greedy_in_order(const std::vector<std::set<std::size_t>>& adj, const std::vector<std::size_t>& order) {
    std::vector<int> color(adj.size(), -1);
    for (std::size_t v : order) {
        std::vector<char> used(adj[v].size() + 1, 0);
        for (std::size_t u : adj[v])
            if (color[u] >= 0 && static_cast<std::size_t>(color[u]) < used.size()) used[static_cast<std::size_t>(color[u])] = 1;
        int c = 0;
        while (used[static_cast<std::size_t>(c)]) ++c;
        color[v] = c;
    }
    return color;
}

// Welsh-Powell: descending degree, ties by index.
std::vector<int> greedy_colors(const std::vector<std::set<std::size_t>>& adj) {
    std::vector<std::size_t> order(adj.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return adj[a].size() > adj[b].size(); });
    return greedy_in_order(adj, order);
}

int count_colors(const std::vector<int>& colors) {
    int n = 0;
    for (int c : colors) n = std::max(n, c + 1);
    return n;
}

bool splittable(const Box& b) {
    for (const auto& iv : b)
        if (iv.lo < iv.hi) return true;
    return false;
}

}  // namespace

std::vector<CellId> Coloring::covered() const {
    std::set<CellId> all;
    for (const auto& c : classes) all.insert(c.cells.begin(), c.cells.end());
    return {all.begin(), all.end()};
}

// ---------------------------------------------------------------------------

std::uint64_t bound(int m, int n) {
    if (m < 1 || n < 1) throw Error("bound needs m >= 1 and n >= 1");
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    auto mul = [](std::uint64_t a, std::uint64_t b) {
        if (a != 0 && b > kMax / a) throw Error("bound overflows 64 bits");
        return a * b;
    };
    auto add = [](std::uint64_t a, std::uint64_t b) {
        if (b > kMax - a) throw Error("bound overflows 64 bits");
        return a + b;
    };
    std::uint64_t k = static_cast<std::uint64_t>(m) + 3;
    for (int level = 2; level <= n; ++level) {
        const std::uint64_t nn = static_cast<std::uint64_t>(level);
        const std::uint64_t sq = mul(k, k);
        std::uint64_t total = add(k, mul(nn, sq));
        std::uint64_t binom = nn;  // C(level, 1)
        for (int s = 2; s <= level - 1; ++s) {
            binom = binom * (nn - static_cast<std::uint64_t>(s) + 1) / static_cast<std::uint64_t>(s);
            total = add(total, mul(binom, mul(nn, sq)));
        }
        k = add(total, sq);
    }
    return k;
}

double default_margin(double delta, double min_margin) { return std::max(min_margin, delta / 4.0); }

// ---------------------------------------------------------------------------

Colorer::Colorer(const MultiMapSpec& m, const DomainComplex& x, double margin) : m_(m), x_(x), margin_(margin) {
    if (!(margin_ > 0.0)) throw ConfigError("coloring margin must be positive");
    if (x.dimension() != m.dimension()) throw GeometryError("domain and map dimensions differ");
}

const Box& Colorer::bounds(CellId id) const { return x_.cell(id).bounds; }

std::vector<CellId> Colorer::all_cells() const {
    std::vector<CellId> ids;
    ids.reserve(x_.size());
    for (const auto& c : x_.cells()) ids.push_back(c.id);
    return ids;
}

SubMap Colorer::full_map(const std::vector<CellId>& region) const {
    SubMap map;
    for (CellId id : region) {
        const auto enc = mm::enclose(m_, x_.cell(id));
        auto& pieces = map[id];
        for (int j = 0; j < m_.branch_count(); ++j) pieces.push_back({enc.boxes[static_cast<std::size_t>(j)], {j}});
    }
    return map;
}

SubMap Colorer::branch_map(const std::vector<CellId>& region, int branch) const {
    SubMap map;
    for (CellId id : region) map[id].push_back({mm::enclose_branch(m_, branch, bounds(id)), {branch}});
    return map;
}

Colorer::TopCluster Colorer::top_cluster(const std::vector<ImagePiece>& pieces, int axis) {
    TopCluster tc;
    if (pieces.empty()) return tc;
    const auto a = static_cast<std::size_t>(axis);
    std::vector<std::size_t> order(pieces.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t p, std::size_t q) { return pieces[p].box[a].hi > pieces[q].box[a].hi; });
    double lo = pieces[order[0]].box[a].lo;
    tc.members.push_back(order[0]);
    tc.gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto& iv = pieces[order[k]].box[a];
        if (iv.hi >= lo) {
            tc.members.push_back(order[k]);
            lo = std::min(lo, iv.lo);
        } else {
            tc.gap = lo - iv.hi;
            break;
        }
    }
    std::sort(tc.members.begin(), tc.members.end());
    return tc;
}

bool Colorer::singleton_axis(const std::vector<ImagePiece>& pieces, int axis) const {
    const auto a = static_cast<std::size_t>(axis);
    Interval h = pieces.front().box[a];
    for (const auto& p : pieces) h = hull(h, p.box[a]);
    if (h.width() <= m_.tolerances().dedup) return true;
    const int first = pieces.front().branches.front();
    for (const auto& p : pieces)
        for (int b : p.branches)
            if (!m_.identical_components(first, b, axis)) return false;
    return true;
}

SubMap Colorer::merge_overlapping(const std::vector<CellId>& region, const SubMap& map) const {
    SubMap out;
    const double tau = m_.tolerances().dedup;
    for (CellId id : region) {
        const auto& pieces = map.at(id);
        std::vector<std::size_t> parent(pieces.size());
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&](std::size_t v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (std::size_t a = 0; a < pieces.size(); ++a)
            for (std::size_t b = a + 1; b < pieces.size(); ++b)
                if (geom::box_distance(pieces[a].box, pieces[b].box) <= tau) parent[find(b)] = find(a);
        std::map<std::size_t, ImagePiece> groups;
        for (std::size_t a = 0; a < pieces.size(); ++a) {
            auto [it, fresh] = groups.try_emplace(find(a), pieces[a]);
            if (!fresh) {
                it->second.box = geom::box_hull(it->second.box, pieces[a].box);
                it->second.branches.insert(it->second.branches.end(), pieces[a].branches.begin(), pieces[a].branches.end());
            }
        }
        auto& merged = out[id];
        for (auto& [root, piece] : groups) {
            std::sort(piece.branches.begin(), piece.branches.end());
            merged.push_back(std::move(piece));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Coloring Colorer::color_single_valued(const std::vector<CellId>& region_in, const SubMap& map,
                                      const std::string& tag) const {
    if (region_in.empty()) return {};
    std::vector<CellId> region = region_in;
    std::sort(region.begin(), region.end());
    const std::size_t n = region.size();
    const std::size_t k = static_cast<std::size_t>(m_.dimension());
    std::unordered_map<CellId, std::size_t> pos;
    std::vector<const Box*> cell(n);
    std::vector<const Box*> piece(n);
    std::vector<CellId> bad;
    for (std::size_t i = 0; i < n; ++i) {
        pos[region[i]] = i;
        const auto& ps = map.at(region[i]);
        if (ps.size() != 1) throw StrataViolation("single-valued step needs exactly one image piece per cell");
        cell[i] = &bounds(region[i]);
        piece[i] = &ps.front().box;
        if (geom::box_distance(*cell[i], *piece[i]) < margin_) bad.push_back(region[i]);
    }
    if (!bad.empty()) throw NeedsRefinement("cells come within the margin of their own image", bad);

    // Symmetrised conflict graph: i -- j when piece(i) comes within the margin of cell j.
    std::vector<std::set<std::size_t>> adj(n);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (CellId id : x_.cells_within(*piece[i], margin_)) {
            auto it = pos.find(id);
            if (it == pos.end()) continue;
            const std::size_t j = it->second;
            if (geom::box_distance(*piece[i], *cell[j]) >= margin_) continue;
            if (adj[i].insert(j).second) {
                adj[j].insert(i);
                edges.emplace_back(std::min(i, j), std::max(i, j));
            }
        }
    }

    // Candidate A: displacement sectors (signed axes) cut into slabs along the
    // sector axis, slabs colored greedily.
    std::vector<std::size_t> sector(n);
    std::vector<double> sector_gap(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < k; ++a) {
            const double up = (*piece[i])[a].lo - (*cell[i])[a].hi;
            const double down = (*cell[i])[a].lo - (*piece[i])[a].hi;
            if (up > best) best = up, sector[i] = 2 * a;
            if (down > best) best = down, sector[i] = 2 * a + 1;
        }
        sector_gap[i] = best;
    }
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) members[sector[i]].push_back(i);
    std::vector<long> slab(n, 0);
    for (auto& [s, cells] : members) {
        const std::size_t a = s / 2;
        double length = std::numeric_limits<double>::infinity();
        double origin = std::numeric_limits<double>::infinity();
        for (std::size_t i : cells) {
            length = std::min(length, sector_gap[i]);
            origin = std::min(origin, (*cell[i])[a].lo);
        }
        std::set<std::size_t> in_sector(cells.begin(), cells.end());
        bool ok = false;
        for (int attempt = 0; attempt < 40 && length > 0.0 && !ok; ++attempt) {
            for (std::size_t i : cells) slab[i] = static_cast<long>(std::floor(((*cell[i])[a].mid() - origin) / length));
            ok = true;
            for (const auto& [u, v] : edges) {
                if (in_sector.count(u) && in_sector.count(v) && slab[u] == slab[v]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) length *= 0.85;
        }
        if (!ok) {
            long next = 0;
            for (std::size_t i : cells) slab[i] = next++;
        }
    }
    std::map<std::pair<std::size_t, long>, std::size_t> block_id;
    std::vector<std::size_t> block_of(n);
    for (std::size_t i = 0; i < n; ++i) block_id.emplace(std::make_pair(sector[i], slab[i]), 0);
    std::size_t next_block = 0;
    for (auto& [key, id] : block_id) id = next_block++;
    for (std::size_t i = 0; i < n; ++i) block_of[i] = block_id.at({sector[i], slab[i]});
    std::vector<std::set<std::size_t>> block_adj(block_id.size());
    for (const auto& [u, v] : edges) {
        block_adj[block_of[u]].insert(block_of[v]);
        block_adj[block_of[v]].insert(block_of[u]);
    }
    // Blocks are numbered in slab order, where greedy is optimal on chains of
    // slabs; keep whichever of that and Welsh-Powell is smaller.
    std::vector<std::size_t> slab_order(block_adj.size());
    std::iota(slab_order.begin(), slab_order.end(), std::size_t{0});
    auto block_color = greedy_in_order(block_adj, slab_order);
    if (auto wp = greedy_colors(block_adj); count_colors(wp) < count_colors(block_color)) block_color = std::move(wp);
    std::vector<int> colors_a(n);
    for (std::size_t i = 0; i < n; ++i) colors_a[i] = block_color[block_of[i]];

    // Candidate B: plain greedy on cells.
    const auto colors_b = greedy_colors(adj);

    const bool use_blocks = count_colors(colors_a) <= count_colors(colors_b);
    const auto& colors = use_blocks ? colors_a : colors_b;
    const int count = count_colors(colors);

    Coloring out;
    out.classes.resize(static_cast<std::size_t>(count));
    std::vector<std::vector<Box>> cell_boxes(static_cast<std::size_t>(count));
    std::vector<std::vector<Box>> image_boxes(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(colors[i]);
        out.classes[c].cells.push_back(region[i]);
        cell_boxes[c].push_back(*cell[i]);
        image_boxes[c].push_back(*piece[i]);
    }
    for (std::size_t c = 0; c < out.classes.size(); ++c) {
        out.classes[c].margin = geom::boxset_separation(cell_boxes[c], image_boxes[c]);
        out.classes[c].provenance = join(tag, std::string(use_blocks ? "base:slab#" : "base:greedy#") + std::to_string(c));
    }
    return out;
}

Coloring Colorer::split_argmax(const std::vector<CellId>& region, const SubMap& map, int axis,
                               const std::string& tag) const {
    if (region.empty()) return {};
    if (axis < 0 || axis >= m_.dimension()) throw ConfigError("axis out of range");
    SubMap g;
    SubMap h;
    const auto a = static_cast<std::size_t>(axis);
    const double tau = m_.tolerances().dedup;
    for (CellId id : region) {
        const auto& pieces = map.at(id);
        if (pieces.size() < 2) throw StrataViolation("argmax split needs at least two image points");
        const auto tc = top_cluster(pieces, axis);
        if (tc.members.size() >= pieces.size())
            throw StrataViolation("top group on axis " + std::to_string(axis) + " holds every point of cell " +
                                  std::to_string(id));
        auto& gp = g[id];
        auto& hp = h[id];
        std::size_t next = 0;
        for (std::size_t p = 0; p < pieces.size(); ++p) {
            if (next < tc.members.size() && tc.members[next] == p) {
                gp.push_back(pieces[p]);
                ++next;
            } else {
                hp.push_back(pieces[p]);
            }
        }
        // Tripwire: at a sampled point the top group must dominate the rest.
        std::mt19937_64 rng(static_cast<std::uint64_t>(id) * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(axis));
        const auto x = mm::sample_point(bounds(id), rng);
        double top_min = std::numeric_limits<double>::infinity();
        double rest_max = -std::numeric_limits<double>::infinity();
        for (const auto& p : gp)
            for (int b : p.branches) top_min = std::min(top_min, mm::evaluate_branch(m_, b, x)[a]);
        for (const auto& p : hp)
            for (int b : p.branches) rest_max = std::max(rest_max, mm::evaluate_branch(m_, b, x)[a]);
        if (rest_max > top_min + tau)
            throw StrataViolation("sampled point in cell " + std::to_string(id) + " contradicts the argmax split");
    }
    const Coloring cg = color_map(region, g, join(tag, "g"));
    const Coloring ch = color_map(region, h, join(tag, "h"));
    return product_coloring(cg, ch, tag);
}

Coloring Colorer::stratified(const std::vector<CellId>& region, const SubMap& map, int axis,
                             const std::string& tag) const {
    if (region.empty()) return {};
    const std::size_t n = map.at(region.front()).size();
    std::map<std::size_t, std::vector<CellId>> by_multiplicity;
    for (CellId id : region) {
        const auto& pieces = map.at(id);
        if (pieces.size() != n) throw StrataViolation("stratified step needs |f(x)| constant on its region");
        const std::size_t top = top_cluster(pieces, axis).members.size();
        if (top >= n) throw StrataViolation("cell " + std::to_string(id) + " has every point in the top group");
        by_multiplicity[top].push_back(id);
    }
    Coloring out;
    for (std::size_t step = 1; step < n; ++step) {
        const std::size_t mult = n - step;
        auto it = by_multiplicity.find(mult);
        if (it == by_multiplicity.end()) continue;
        auto part = split_argmax(it->second, map, axis,
                                 join(tag, "A" + std::to_string(step) + "(M=" + std::to_string(mult) + ")"));
        for (auto& c : part.classes) out.classes.push_back(std::move(c));
    }
    return out;
}

Coloring Colorer::color_map(const std::vector<CellId>& region_in, const SubMap& map_in, const std::string& tag) const {
    if (region_in.empty()) return {};
    std::vector<CellId> region = region_in;
    std::sort(region.begin(), region.end());
    const SubMap map = merge_overlapping(region, map_in);
    std::size_t n = 0;
    for (CellId id : region) n = std::max(n, map.at(id).size());
    if (n == 1) return color_single_valued(region, map, tag);

    std::vector<CellId> collided;
    std::vector<CellId> full;
    for (CellId id : region) (map.at(id).size() < n ? collided : full).push_back(id);

    Coloring out;
    if (!collided.empty()) {
        out = color_map(collided, map, join(tag, "L(n=" + std::to_string(n) + ")"));
    }
    if (full.empty()) return out;

    // Index-set strata: group by the set of axes on which f(x) is not a
    // single coordinate value; each group is colored along one usable axis.
    const int k = m_.dimension();
    std::map<std::pair<int, unsigned>, std::vector<CellId>> groups;
    std::map<CellId, std::vector<double>> gaps;  // per axis; -inf when unusable
    std::vector<CellId> bad;
    for (CellId id : full) {
        const auto& pieces = map.at(id);
        unsigned mask = 0;
        auto& g = gaps[id];
        g.assign(static_cast<std::size_t>(k), -std::numeric_limits<double>::infinity());
        bool usable = false;
        for (int a = 0; a < k; ++a) {
            if (singleton_axis(pieces, a)) continue;
            mask |= 1u << a;
            const auto tc = top_cluster(pieces, a);
            if (tc.members.size() < pieces.size()) {
                g[static_cast<std::size_t>(a)] = tc.gap;
                usable = true;
            }
        }
        if (!usable) {
            bad.push_back(id);
            continue;
        }
        groups[{std::popcount(mask), mask}].push_back(id);
    }
    if (!bad.empty()) throw NeedsRefinement("no axis separates a top group of image points", bad);

    for (const auto& [key, cells] : groups) {
        const unsigned mask = key.second;
        std::string name = "E{";
        for (int a = 0, first = 1; a < k; ++a) {
            if (!(mask & (1u << a))) continue;
            name += (first ? "" : ",") + std::to_string(a);
            first = 0;
        }
        name += "}";
        int chosen = -1;
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < k; ++a) {
            if (!(mask & (1u << a))) continue;
            double worst = std::numeric_limits<double>::infinity();
            for (CellId id : cells) worst = std::min(worst, gaps[id][static_cast<std::size_t>(a)]);
            if (worst > -std::numeric_limits<double>::infinity() && worst > best) {
                best = worst;
                chosen = a;
            }
        }
        std::map<int, std::vector<CellId>> by_axis;
        if (chosen >= 0) {
            by_axis[chosen] = cells;
        } else {
            for (CellId id : cells) {
                const auto& g = gaps[id];
                by_axis[static_cast<int>(std::max_element(g.begin(), g.end()) - g.begin())].push_back(id);
            }
        }
        for (const auto& [axis, sub] : by_axis) {
            auto part = stratified(sub, map, axis, join(tag, name + "/axis" + std::to_string(axis)));
            for (auto& c : part.classes) out.classes.push_back(std::move(c));
        }
    }
    return out;
}

Coloring Colorer::color_multimap() const {
    const auto all = all_cells();
    return color_map(all, full_map(all), "");
}

// ---------------------------------------------------------------------------

Coloring product_coloring(const Coloring& g, const Coloring& h, const std::string& provenance) {
    if (g.covered() != h.covered()) throw Error("product_coloring: colorings cover different cell sets");
    Coloring out;
    for (const auto& a : g.classes) {
        for (const auto& b : h.classes) {
            ColorClass c;
            std::set_intersection(a.cells.begin(), a.cells.end(), b.cells.begin(), b.cells.end(),
                                  std::back_inserter(c.cells));
            if (c.cells.empty()) continue;
            c.margin = std::min(a.margin, b.margin);
            c.provenance = join(provenance, "[" + a.provenance + " ^ " + b.provenance + "]");
            out.classes.push_back(std::move(c));
        }
    }
    return out;
}

Coloring color_single_valued(const MultiMapSpec& m, const DomainComplex& x, const mm::FpfCertificate& cert) {
    if (m.branch_count() != 1) throw ConfigError("color_single_valued needs a single-valued map");
    Colorer c(m, x, default_margin(cert.delta, m.tolerances().min_margin));
    const auto all = c.all_cells();
    return c.color_single_valued(all, c.branch_map(all, 0), "");
}

Coloring color_multimap(const MultiMapSpec& m, const DomainComplex& x, const mm::FpfCertificate& cert) {
    return Colorer(m, x, default_margin(cert.delta, m.tolerances().min_margin)).color_multimap();
}

Coloring split_argmax_coloring(const MultiMapSpec& m, const DomainComplex& x, const std::vector<CellId>& region,
                               int axis, double margin) {
    Colorer c(m, x, margin);
    return c.split_argmax(region, c.full_map(region), axis, "");
}

Coloring stratified_coloring(const MultiMapSpec& m, const DomainComplex& x, const std::vector<CellId>& region,
                             int axis, double margin) {
    Colorer c(m, x, margin);
    return c.stratified(region, c.full_map(region), axis, "");
}

ColoredDomain color_with_refinement(const MultiMapSpec& m, const mm::FpfCertificate& cert, int max_rounds) {
    ColoredDomain out;
    out.complex = cert.complex;
    out.margin = default_margin(cert.delta, m.tolerances().min_margin);
    for (int round = 0;; ++round) {
        try {
            out.coloring = Colorer(m, out.complex, out.margin).color_multimap();
            out.refinement_rounds = round;
            return out;
        } catch (const NeedsRefinement& e) {
            if (round >= max_rounds)
                throw ColoringFailed(std::string("refinement budget exhausted: ") + e.what(), e.cells());
            int refined = 0;
            for (CellId id : e.cells()) {
                if (!splittable(out.complex.cell(id).bounds)) continue;
                out.complex.refine(id);
                ++refined;
            }
            if (refined == 0) throw ColoringFailed(std::string("cannot refine further: ") + e.what(), e.cells());
        }
    }
}

GreedyResult greedy_conflict_coloring(const MultiMapSpec& m, const DomainComplex& x, double margin, int budget) {
    if (!(margin > 0.0)) throw ConfigError("coloring margin must be positive");
    GreedyResult out;
    out.complex = x;
    for (int round = 0;; ++round) {
        const auto& cells = out.complex.cells();
        const std::size_t n = cells.size();
        std::unordered_map<CellId, std::size_t> pos;
        std::vector<mm::BranchEnclosure> enc(n);
        std::vector<CellId> bad;
        for (std::size_t i = 0; i < n; ++i) {
            pos[cells[i].id] = i;
            enc[i] = mm::enclose(m, cells[i]);
            for (const auto& b : enc[i].boxes) {
                if (geom::box_distance(b, cells[i].bounds) < margin) {
                    bad.push_back(cells[i].id);
                    break;
                }
            }
        }
        if (!bad.empty()) {
            if (round >= budget) throw ColoringFailed("self-conflicting cells remain after refinement", bad);
            int refined = 0;
            for (CellId id : bad) {
                if (!splittable(out.complex.cell(id).bounds)) continue;
                out.complex.refine(id);
                ++refined;
            }
            if (refined == 0) throw ColoringFailed("self-conflicting cells cannot be refined", bad);
            continue;
        }
        std::vector<std::set<std::size_t>> adj(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& b : enc[i].boxes) {
                for (CellId id : out.complex.cells_within(b, margin)) {
                    const std::size_t j = pos.at(id);
                    if (geom::box_distance(b, cells[j].bounds) >= margin) continue;
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        const auto colors = greedy_colors(adj);
        out.coloring.classes.assign(static_cast<std::size_t>(count_colors(colors)), {});
        std::vector<std::vector<Box>> cb(out.coloring.classes.size());
        std::vector<std::vector<Box>> ib(out.coloring.classes.size());
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(colors[i]);
            out.coloring.classes[c].cells.push_back(cells[i].id);
            cb[c].push_back(cells[i].bounds);
            for (const auto& b : enc[i].boxes) ib[c].push_back(b);
        }
        for (std::size_t c = 0; c < out.coloring.classes.size(); ++c) {
            auto& cls = out.coloring.classes[c];
            std::sort(cls.cells.begin(), cls.cells.end());
            cls.margin = geom::boxset_separation(cb[c], ib[c]);
            cls.provenance = "greedy#" + std::to_string(c);
        }
        out.rounds = round;
        return out;
    }
}

InflateResult inflate_color(const ColorClass& f, double epsilon, const MultiMapSpec& m, const DomainComplex& x,
                            double margin, int backoff_steps) {
    InflateResult out;
    out.color = f;
    if (!(epsilon > 0.0)) {
        out.report = "epsilon is zero; class unchanged";
        return out;
    }
    double eps = epsilon;
    for (int step = 0; step <= backoff_steps; ++step, eps *= 0.5) {
        std::set<CellId> grown(f.cells.begin(), f.cells.end());
        for (CellId id : f.cells)
            for (CellId near : x.cells_within(x.cell(id).bounds, eps)) grown.insert(near);
        std::vector<geom::Box> cells;
        std::vector<geom::Box> images;
        for (CellId id : grown) {
            const auto& c = x.cell(id);
            cells.push_back(c.bounds);
            for (auto& b : mm::enclose(m, c).boxes) images.push_back(std::move(b));
        }
        const double sep = geom::boxset_separation(cells, images);
        if (sep >= margin && sep > 0.0) {
            out.color.cells.assign(grown.begin(), grown.end());
            out.color.margin = sep;
            out.epsilon = eps;
            out.enlarged = grown.size() > f.cells.size();
            out.report = "accepted epsilon " + std::to_string(eps) + " with margin " + std::to_string(sep);
            return out;
        }
        out.report += "epsilon " + std::to_string(eps) + " rejected (margin " + std::to_string(sep) + "); ";
    }
    out.report += "back-off exhausted; class unchanged";
    return out;
}

}  // namespace fpf::color
