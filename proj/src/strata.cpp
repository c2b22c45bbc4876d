#include "fpf/strata.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "fpf/errors.hpp"

namespace fpf::strata {

const char* to_string(Collision c) {
    switch (c) {
        case Collision::AllDistinct: return "all_distinct";
        case Collision::Collides: return "collides";
        case Collision::Ambiguous: return "ambiguous";
    }
    return "?";
}

const char* to_string(Singleton s) {
    switch (s) {
        case Singleton::Singleton: return "singleton";
        case Singleton::NonSingleton: return "non_singleton";
        case Singleton::Ambiguous: return "ambiguous";
    }
    return "?";
}

namespace {

// Coordinate `axis` of branches a and b agrees at every point of the cell.
bool equal_on_axis(const MultiMapSpec& m, const mm::BranchEnclosure& enc, int a, int b, int axis) {
    if (m.identical_components(a, b, axis)) return true;
    const Interval h = hull(enc.boxes[static_cast<std::size_t>(a)][static_cast<std::size_t>(axis)],
                            enc.boxes[static_cast<std::size_t>(b)][static_cast<std::size_t>(axis)]);
    return h.width() <= m.tolerances().dedup;
}

bool coincide(const MultiMapSpec& m, const mm::BranchEnclosure& enc, int a, int b) {
    if (m.identical_components(a, b)) return true;
    const auto h = geom::box_hull(enc.boxes[static_cast<std::size_t>(a)], enc.boxes[static_cast<std::size_t>(b)]);
    double diam2 = 0.0;
    for (const auto& iv : h) diam2 += iv.width() * iv.width();
    const double tau = m.tolerances().dedup;
    return diam2 <= tau * tau;
}

bool distinct(const MultiMapSpec& m, const mm::BranchEnclosure& enc, int a, int b) {
    return geom::box_distance(enc.boxes[static_cast<std::size_t>(a)], enc.boxes[static_cast<std::size_t>(b)]) >
           m.tolerances().dedup;
}

}  // namespace

MultiplicityLabel argmax_multiplicity(const MultiMapSpec& m, const geom::Cell& c, int axis) {
    return argmax_multiplicity(m, mm::enclose(m, c), axis);
}

MultiplicityLabel argmax_multiplicity(const MultiMapSpec& m, const mm::BranchEnclosure& enc, int axis) {
    MultiplicityLabel out;
    const int n = m.branch_count();
    if (n == 1) {
        out.certified = true;
        out.multiplicity = 1;
        out.top_branches = {0};
        out.gap = std::numeric_limits<double>::infinity();
        return out;
    }
    auto iv = [&](int j) { return enc.boxes[static_cast<std::size_t>(j)][static_cast<std::size_t>(axis)]; };
    int top = 0;
    for (int j = 1; j < n; ++j)
        if (iv(j).hi > iv(top).hi) top = j;

    std::vector<int> group;
    std::vector<int> rest;
    for (int j = 0; j < n; ++j) (equal_on_axis(m, enc, j, top, axis) ? group : rest).push_back(j);

    double group_lo = std::numeric_limits<double>::infinity();
    for (int j : group) group_lo = std::min(group_lo, iv(j).lo);
    double rest_hi = -std::numeric_limits<double>::infinity();
    for (int j : rest) rest_hi = std::max(rest_hi, iv(j).hi);
    out.top_branches = group;
    out.gap = rest.empty() ? std::numeric_limits<double>::infinity() : group_lo - rest_hi;
    if (!(out.gap > 0.0)) return out;

    // Count distinct points in the top group; each pair must be certified
    // either coincident or separated.
    std::vector<int> representative;
    for (int j : group) {
        bool merged = false;
        for (int r : representative) {
            if (coincide(m, enc, j, r)) {
                merged = true;
                break;
            }
            if (!distinct(m, enc, j, r)) return out;
        }
        if (!merged) representative.push_back(j);
    }
    out.certified = true;
    out.multiplicity = static_cast<int>(representative.size());
    return out;
}

Collision collision_status(const MultiMapSpec& m, const mm::BranchEnclosure& enc) {
    const int n = m.branch_count();
    bool ambiguous = false;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (coincide(m, enc, a, b)) return Collision::Collides;
            if (!distinct(m, enc, a, b)) ambiguous = true;
        }
    }
    return ambiguous ? Collision::Ambiguous : Collision::AllDistinct;
}

Singleton singleton_status(const MultiMapSpec& m, const mm::BranchEnclosure& enc, int axis) {
    const int n = m.branch_count();
    bool all_equal = true;
    for (int a = 1; a < n && all_equal; ++a) all_equal = equal_on_axis(m, enc, 0, a, axis);
    if (all_equal) return Singleton::Singleton;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double s = separation(enc.boxes[static_cast<std::size_t>(a)][static_cast<std::size_t>(axis)],
                                        enc.boxes[static_cast<std::size_t>(b)][static_cast<std::size_t>(axis)]);
            if (s > m.tolerances().dedup) return Singleton::NonSingleton;
        }
    }
    return Singleton::Ambiguous;
}

StrataPartition classify(const MultiMapSpec& m, const geom::DomainComplex& x, int axis, int max_depth) {
    if (axis < 0 || axis >= m.dimension()) throw ConfigError("axis out of range");
    if (max_depth < 0) throw ConfigError("max_depth must be >= 0");
    StrataPartition part;
    part.axis = axis;
    part.complex = x;
    std::map<CellId, int> depth;
    std::map<CellId, CellLabels> done;
    std::vector<CellId> work;
    for (const auto& c : part.complex.cells()) {
        depth[c.id] = 0;
        work.push_back(c.id);
    }

    while (!work.empty()) {
        std::vector<CellId> next;
        for (CellId id : work) {
            const auto& cell = part.complex.cell(id);
            const auto enc = mm::enclose(m, cell);
            CellLabels lab;
            lab.cell = id;
            lab.multiplicity = argmax_multiplicity(m, enc, axis);
            lab.collision = m.branch_count() == 1 ? Collision::AllDistinct : collision_status(m, enc);
            for (int i = 0; i < m.dimension(); ++i) lab.singleton.push_back(singleton_status(m, enc, i));
            const bool ambiguous = !lab.multiplicity.certified || lab.collision == Collision::Ambiguous ||
                                   lab.singleton[static_cast<std::size_t>(axis)] == Singleton::Ambiguous;
            bool splittable = false;
            for (const auto& iv : cell.bounds) splittable = splittable || iv.lo < iv.hi;
            if (ambiguous && depth[id] < max_depth && splittable) {
                const int d = depth[id] + 1;
                auto [a, b] = part.complex.refine(id);
                depth[a] = d;
                depth[b] = d;
                next.push_back(a);
                next.push_back(b);
            } else {
                done[id] = std::move(lab);
            }
        }
        work = std::move(next);
    }

    for (const auto& c : part.complex.cells()) {
        auto& lab = done.at(c.id);
        if (!lab.multiplicity.certified || lab.collision == Collision::Ambiguous ||
            lab.singleton[static_cast<std::size_t>(axis)] == Singleton::Ambiguous)
            part.ambiguous.push_back(c.id);
        part.labels.push_back(std::move(lab));
    }
    return part;
}

}  // namespace fpf::strata
