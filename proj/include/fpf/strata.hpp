#pragma once

#include <vector>

#include "fpf/multimap.hpp"

namespace fpf::strata {

using geom::CellId;
using mm::MultiMapSpec;

/// Certified(M) or Ambiguous for the number of points of f(x) attaining
/// max pi_i(f(x)), valid for every x in the cell.
struct MultiplicityLabel {
    bool certified = false;
    int multiplicity = 0;           // M when certified
    std::vector<int> top_branches;  // branches realising the maximum
    double gap = 0.0;               // top group lower end minus rest upper end
};

enum class Collision { AllDistinct, Collides, Ambiguous };
enum class Singleton { Singleton, NonSingleton, Ambiguous };

const char* to_string(Collision c);
const char* to_string(Singleton s);

MultiplicityLabel argmax_multiplicity(const MultiMapSpec& m, const geom::Cell& c, int axis);
MultiplicityLabel argmax_multiplicity(const MultiMapSpec& m, const mm::BranchEnclosure& enc, int axis);
Collision collision_status(const MultiMapSpec& m, const mm::BranchEnclosure& enc);
Singleton singleton_status(const MultiMapSpec& m, const mm::BranchEnclosure& enc, int axis);

struct CellLabels {
    CellId cell = 0;
    MultiplicityLabel multiplicity;
    Collision collision = Collision::Ambiguous;
    std::vector<Singleton> singleton;  // one per axis
};

struct StrataPartition {
    int axis = 0;
    geom::DomainComplex complex;     // refined domain the labels refer to
    std::vector<CellLabels> labels;  // ascending cell id
    std::vector<CellId> ambiguous;   // cells with any label on `axis` still ambiguous
};

/// Labels every cell; bisects cells whose multiplicity, collision or
/// singleton label on `axis` is ambiguous, up to max_depth levels.
StrataPartition classify(const MultiMapSpec& m, const geom::DomainComplex& x, int axis, int max_depth);

}  // namespace fpf::strata
