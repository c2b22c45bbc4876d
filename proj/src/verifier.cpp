#include "fpf/verifier.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "fpf/parallel.hpp"

namespace fpf::verify {

bool verify_disjoint_from_closure(const std::vector<Box>& cells, const std::vector<Box>& images, double margin) {
    return geom::boxset_separation(cells, images) >= margin;
}

namespace {

ClassStatus check_class(const mm::MultiMapSpec& m, const geom::DomainComplex& x, const color::ColorClass& cls,
                        std::size_t index, double min_margin, std::uint64_t seed, int samples) {
    ClassStatus st;
    st.index = index;
    if (cls.cells.empty()) {
        st.reason = "empty class";
        return st;
    }
    std::vector<Box> cells;
    std::vector<Box> images;
    for (CellId id : cls.cells) {
        const auto& c = x.cell(id);
        cells.push_back(c.bounds);
        for (auto& b : mm::enclose(m, c).boxes) images.push_back(std::move(b));
    }
    st.margin = geom::boxset_separation(cells, images);
    st.ok = st.margin >= min_margin && st.margin > 0.0;
    if (!st.ok) st.reason = "interval margin " + std::to_string(st.margin) + " below " + std::to_string(min_margin);

    // Tripwire: a true image point closer than the interval margin means an
    // enclosure bug.
    const double floor = std::max(0.0, st.margin - 1e-9 * std::max(1.0, st.margin));
    std::mt19937_64 rng(seed + index);
    std::uniform_int_distribution<std::size_t> pick(0, cls.cells.size() - 1);
    for (int s = 0; s < samples; ++s) {
        const auto p = mm::sample_point(cells[pick(rng)], rng);
        const auto image = mm::evaluate(m, p);
        for (const auto& y : image.points()) {
            double best = std::numeric_limits<double>::infinity();
            CellId near = cls.cells.front();
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const double d = geom::point_box_distance(y, cells[i]);
                if (d < best) best = d, near = cls.cells[i];
            }
            if (best < floor || best <= 0.0) st.point_violations.push_back({p, y, near, best});
        }
    }
    if (!st.point_violations.empty()) {
        st.ok = false;
        st.reason = "sampled image point within the interval margin of the class";
    }
    return st;
}

}  // namespace

VerificationReport verify_coloring(const mm::MultiMapSpec& m, const geom::DomainComplex& x, const Coloring& c,
                                   double min_margin, std::uint64_t seed, int samples) {
    for (const auto& cls : c.classes)
        for (CellId id : cls.cells)
            if (!x.contains(id)) throw GeometryError("coloring references unknown cell " + std::to_string(id));

    VerificationReport rep;
    rep.classes.resize(c.classes.size());
    parallel_for(c.classes.size(), [&](std::size_t i) {
        rep.classes[i] = check_class(m, x, c.classes[i], i, min_margin, seed, samples);
    });

    std::set<CellId> seen;
    for (const auto& cls : c.classes) seen.insert(cls.cells.begin(), cls.cells.end());
    for (const auto& cell : x.cells())
        if (!seen.count(cell.id)) rep.uncovered.push_back(cell.id);

    rep.min_margin = std::numeric_limits<double>::infinity();
    bool ok = !c.classes.empty() && rep.uncovered.empty();
    for (const auto& st : rep.classes) {
        ok = ok && st.ok;
        rep.min_margin = std::min(rep.min_margin, st.margin);
    }
    if (c.classes.empty()) rep.min_margin = 0.0;
    rep.bright = ok;
    return rep;
}

}  // namespace fpf::verify
