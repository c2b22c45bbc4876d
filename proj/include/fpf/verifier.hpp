#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpf/colorer.hpp"

namespace fpf::verify {

using color::Coloring;
using geom::Box;
using geom::CellId;

struct PointViolation {
    geom::Point x;        // sampled point in the class
    geom::Point y;        // element of f(x') landing near the class
    CellId cell = 0;      // cell of the class within reach of y
    double distance = 0.0;
};

struct ClassStatus {
    std::size_t index = 0;
    double margin = 0.0;  // recomputed interval margin
    bool ok = false;
    std::string reason;   // empty when ok
    std::vector<PointViolation> point_violations;
};

struct VerificationReport {
    std::vector<ClassStatus> classes;
    std::vector<CellId> uncovered;
    bool bright = false;
    double min_margin = 0.0;  // smallest class margin
};

/// True iff boxset_separation(cells, images) >= margin.
bool verify_disjoint_from_closure(const std::vector<Box>& cells, const std::vector<Box>& images, double margin);

/// Rechecks a coloring from scratch: image enclosures per class, interval
/// margin against min_margin, a 100-point sampling tripwire per class, and
/// the cover. Throws GeometryError on a cell id not in X.
VerificationReport verify_coloring(const mm::MultiMapSpec& m, const geom::DomainComplex& x, const Coloring& c,
                                   double min_margin = 1e-6, std::uint64_t seed = 0, int samples = 100);

}  // namespace fpf::verify
