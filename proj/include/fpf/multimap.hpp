#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "fpf/expr.hpp"
#include "fpf/geometry.hpp"

namespace fpf::mm {

using geom::Box;
using geom::CellId;
using geom::DomainComplex;
using geom::FiniteSet;
using geom::Point;

struct Tolerances {
    double dedup = 1e-9;       // points closer than this are one point
    double margin_goal = 0.0;  // certification keeps refining cells whose gap is below this
    double min_margin = 1e-6;  // smallest accepted bright-color margin
    int max_depth = 12;        // bisection budget per initial cell
};

/// A map f: X -> exp_n(R^k) given as n branches, each a k-vector of
/// expressions. f(x) is the set of branch values, so colliding branches give
/// |f(x)| < n.
class MultiMapSpec {
public:
    MultiMapSpec(int dimension, std::vector<std::vector<expr::Expr>> branches, Tolerances tol = {});
    /// Parses every component; throws LexError / ParseError / DomainError.
    static MultiMapSpec parse(int dimension, const std::vector<std::vector<std::string>>& branches,
                              Tolerances tol = {});

    int dimension() const { return dimension_; }
    int branch_count() const { return static_cast<int>(branches_.size()); }
    const std::vector<expr::Expr>& branch(int j) const { return branches_[static_cast<std::size_t>(j)]; }
    const Tolerances& tolerances() const { return tol_; }

    /// True when branches a and b have structurally identical components on
    /// the given axis (all axes when axis < 0), so they agree everywhere.
    bool identical_components(int a, int b, int axis = -1) const;

private:
    int dimension_;
    std::vector<std::vector<expr::Expr>> branches_;
    Tolerances tol_;
};

Point evaluate_branch(const MultiMapSpec& m, int branch, const Point& p);

/// f(p) as a canonical finite set. DomainError messages name the branch.
FiniteSet evaluate(const MultiMapSpec& m, const Point& p);

struct BranchEnclosure {
    CellId cell = 0;
    std::vector<Box> boxes;  // one per branch
};

/// Sound per-branch image boxes over a cell (centered form per component).
BranchEnclosure enclose(const MultiMapSpec& m, const geom::Cell& c);
Box enclose_branch(const MultiMapSpec& m, int branch, const Box& cell);

/// Enclosure of branch(x) - x over the cell.
Box displacement_box(const MultiMapSpec& m, int branch, const Box& cell);
/// Euclidean distance from the origin to a box, rounded down.
double distance_to_origin(const Box& b);

struct CellGap {
    CellId cell = 0;
    std::vector<double> branch_gaps;  // distance of each displacement box to the origin
    double gap() const;
};

struct FpfCertificate {
    double delta = 0.0;  // <= every cell/branch displacement gap
    int depth_used = 0;
    DomainComplex complex;  // refined domain on which the gaps hold
    std::vector<CellGap> witnesses;
};

struct FixedPointWitness {
    Point x;
    int branch = 0;
    double residual = 0.0;  // |branch(x) - x|
};

struct CounterexampleReport {
    std::vector<FixedPointWitness> witnesses;  // nonempty, sorted by x
};

struct Inconclusive {
    std::vector<CellId> suspects;
    DomainComplex complex;
    int depth_used = 0;
};

using FpfOutcome = std::variant<FpfCertificate, CounterexampleReport, Inconclusive>;

/// Proves x not in f(x) on X by displacement enclosures, bisecting unresolved
/// cells up to max_depth, or exhibits a fixed point found by point search.
FpfOutcome certify_fixed_point_free(const MultiMapSpec& m, const DomainComplex& x, int max_depth);

struct ContinuityReport {
    double max_ratio = 0.0;  // max Hausdorff(f(p), f(q)) / |p - q|
    int pairs = 0;
};

/// Empirical Lipschitz gauge in the Hausdorff metric from random pairs inside
/// shared cells. Advisory only.
ContinuityReport continuity_report(const MultiMapSpec& m, const DomainComplex& x, int samples, std::uint64_t seed = 0);

/// Uniform random point of a box (degenerate axes stay fixed).
template <class Rng>
Point sample_point(const Box& b, Rng& rng) {
    Point p(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double t = u(rng);
        p[i] = std::min(b[i].hi, b[i].lo + t * (b[i].hi - b[i].lo));
    }
    return p;
}

}  // namespace fpf::mm
