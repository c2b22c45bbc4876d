#include "fpf/multimap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "fpf/errors.hpp"
#include "fpf/parallel.hpp"

namespace fpf::mm {

MultiMapSpec::MultiMapSpec(int dimension, std::vector<std::vector<expr::Expr>> branches, Tolerances tol)
    : dimension_(dimension), branches_(std::move(branches)), tol_(tol) {
    if (dimension_ < 1) throw ConfigError("map dimension must be >= 1");
    if (branches_.empty()) throw ConfigError("a map needs at least one branch");
    for (std::size_t j = 0; j < branches_.size(); ++j) {
        if (static_cast<int>(branches_[j].size()) != dimension_) {
            throw ConfigError("branch " + std::to_string(j) + " has " + std::to_string(branches_[j].size()) +
                              " components, expected " + std::to_string(dimension_));
        }
        for (const auto& e : branches_[j]) e.bind(dimension_);
    }
    if (!(tol_.dedup >= 0.0) || !(tol_.min_margin > 0.0) || tol_.max_depth < 0 || !(tol_.margin_goal >= 0.0))
        throw ConfigError("invalid tolerances");
}

MultiMapSpec MultiMapSpec::parse(int dimension, const std::vector<std::vector<std::string>>& branches, Tolerances tol) {
    std::vector<std::vector<expr::Expr>> parsed;
    parsed.reserve(branches.size());
    for (const auto& b : branches) {
        std::vector<expr::Expr> comps;
        comps.reserve(b.size());
        for (const auto& s : b) comps.push_back(expr::parse(s));
        parsed.push_back(std::move(comps));
    }
    return MultiMapSpec(dimension, std::move(parsed), tol);
}

bool MultiMapSpec::identical_components(int a, int b, int axis) const {
    if (a == b) return true;
    for (int i = 0; i < dimension_; ++i) {
        if (axis >= 0 && i != axis) continue;
        if (!expr::structurally_equal(branch(a)[static_cast<std::size_t>(i)], branch(b)[static_cast<std::size_t>(i)]))
            return false;
    }
    return true;
}

Point evaluate_branch(const MultiMapSpec& m, int branch, const Point& p) {
    Point y(static_cast<std::size_t>(m.dimension()));
    try {
        for (int i = 0; i < m.dimension(); ++i) y[static_cast<std::size_t>(i)] = expr::eval_point(m.branch(branch)[static_cast<std::size_t>(i)], p);
    } catch (const DomainError& e) {
        throw DomainError("branch " + std::to_string(branch) + ": " + e.what());
    }
    return y;
}

FiniteSet evaluate(const MultiMapSpec& m, const Point& p) {
    if (static_cast<int>(p.size()) != m.dimension()) throw GeometryError("point dimension mismatch");
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(m.branch_count()));
    for (int j = 0; j < m.branch_count(); ++j) pts.push_back(evaluate_branch(m, j, p));
    return FiniteSet(std::move(pts), m.tolerances().dedup);
}

Box enclose_branch(const MultiMapSpec& m, int branch, const Box& cell) {
    Box out(static_cast<std::size_t>(m.dimension()));
    try {
        for (int i = 0; i < m.dimension(); ++i)
            out[static_cast<std::size_t>(i)] = expr::eval_centered(m.branch(branch)[static_cast<std::size_t>(i)], cell);
    } catch (const DomainError& e) {
        throw DomainError("branch " + std::to_string(branch) + ": " + e.what());
    }
    return out;
}

BranchEnclosure enclose(const MultiMapSpec& m, const geom::Cell& c) {
    BranchEnclosure e;
    e.cell = c.id;
    e.boxes.reserve(static_cast<std::size_t>(m.branch_count()));
    try {
        for (int j = 0; j < m.branch_count(); ++j) e.boxes.push_back(enclose_branch(m, j, c.bounds));
    } catch (const DomainError& err) {
        throw DomainError("cell " + std::to_string(c.id) + ", " + err.what());
    }
    return e;
}

Box displacement_box(const MultiMapSpec& m, int branch, const Box& cell) {
    Box out(static_cast<std::size_t>(m.dimension()));
    try {
        for (int i = 0; i < m.dimension(); ++i) {
            out[static_cast<std::size_t>(i)] =
                expr::eval_centered_displacement(m.branch(branch)[static_cast<std::size_t>(i)], i, cell);
        }
    } catch (const DomainError& e) {
        throw DomainError("branch " + std::to_string(branch) + ": " + e.what());
    }
    return out;
}

double distance_to_origin(const Box& b) { return geom::point_box_distance(Point(b.size(), 0.0), b); }

double CellGap::gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (double b : branch_gaps) g = std::min(g, b);
    return g;
}

// ---------------------------------------------------------------------------

namespace {

double residual(const MultiMapSpec& m, int branch, const Point& x) {
    try {
        return geom::euclidean(evaluate_branch(m, branch, x), x);
    } catch (const DomainError&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Solves a x = b in place by Gaussian elimination; false when singular.
bool solve(std::vector<std::vector<double>> a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        if (std::fabs(a[piv][c]) < 1e-300) return false;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        for (std::size_t k = c + 1; k < n; ++k) b[c] -= a[c][k] * b[k];
        b[c] /= a[c][c];
    }
    return true;
}

// Newton iteration on branch(x) - x = 0 started at x0.
Point newton(const MultiMapSpec& m, int branch, Point x, double reach) {
    const std::size_t k = x.size();
    const Point start = x;
    for (int it = 0; it < 50; ++it) {
        Point y;
        try {
            y = evaluate_branch(m, branch, x);
        } catch (const DomainError&) {
            break;
        }
        std::vector<double> rhs(k);
        for (std::size_t i = 0; i < k; ++i) rhs[i] = x[i] - y[i];
        if (geom::euclidean(x, y) == 0.0) break;
        Box pt(k);
        for (std::size_t i = 0; i < k; ++i) pt[i] = Interval{x[i]};
        std::vector<std::vector<double>> jac(k, std::vector<double>(k));
        try {
            for (std::size_t i = 0; i < k; ++i) {
                const auto enc = expr::eval_with_gradient(m.branch(branch)[i], pt);
                if (!enc.has_gradient) return x;
                for (std::size_t c = 0; c < k; ++c) jac[i][c] = enc.gradient[c].mid() - (i == c ? 1.0 : 0.0);
            }
        } catch (const DomainError&) {
            break;
        }
        if (!solve(jac, rhs)) break;
        Point next(k);
        for (std::size_t i = 0; i < k; ++i) next[i] = x[i] + rhs[i];
        if (geom::euclidean(next, start) > reach) break;
        bool finite = true;
        for (double v : next) finite = finite && std::isfinite(v);
        if (!finite) break;
        x = std::move(next);
    }
    return x;
}

std::vector<Point> probe_points(const Box& b) {
    std::vector<Point> pts{geom::box_center(b)};
    const std::size_t k = b.size();
    if (k <= 3) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            Point p(k);
            for (std::size_t i = 0; i < k; ++i) p[i] = (mask >> i) & 1 ? b[i].hi : b[i].lo;
            pts.push_back(std::move(p));
        }
    }
    return pts;
}

struct CellOutcome {
    CellGap gap;
    std::vector<FixedPointWitness> witnesses;
};

CellOutcome examine(const MultiMapSpec& m, const DomainComplex& complex, const geom::Cell& c) {
    CellOutcome out;
    out.gap.cell = c.id;
    for (int j = 0; j < m.branch_count(); ++j) {
        out.gap.branch_gaps.push_back(distance_to_origin(displacement_box(m, j, c.bounds)));
    }
    if (out.gap.gap() > 0.0) return out;

    const double tau = m.tolerances().dedup;
    double diam = 0.0;
    for (const auto& iv : c.bounds) diam += iv.width() * iv.width();
    diam = std::sqrt(diam);
    for (int j = 0; j < m.branch_count(); ++j) {
        if (out.gap.branch_gaps[static_cast<std::size_t>(j)] > 0.0) continue;
        auto candidates = probe_points(c.bounds);
        candidates.push_back(newton(m, j, geom::box_center(c.bounds), 2.0 * diam + 1e-12));
        for (const auto& p : candidates) {
            const double r = residual(m, j, p);
            if (r > tau) continue;
            Box pbox(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) pbox[i] = Interval{p[i]};
            if (complex.cells_within(pbox, 0.0).empty()) continue;
            out.witnesses.push_back({p, j, r});
        }
    }
    return out;
}

}  // namespace

FpfOutcome certify_fixed_point_free(const MultiMapSpec& m, const DomainComplex& x, int max_depth) {
    if (max_depth < 0) throw ConfigError("max_depth must be >= 0");
    if (x.dimension() != m.dimension()) throw GeometryError("domain and map dimensions differ");
    DomainComplex complex = x;
    std::map<CellId, int> depth;
    for (const auto& c : complex.cells()) depth[c.id] = 0;
    std::map<CellId, CellGap> settled;
    std::vector<CellId> work;
    for (const auto& c : complex.cells()) work.push_back(c.id);
    std::vector<CellId> stuck;
    int depth_used = 0;
    const double goal = m.tolerances().margin_goal;

    for (;;) {
        std::vector<CellOutcome> results(work.size());
        parallel_for(work.size(), [&](std::size_t i) { results[i] = examine(m, complex, complex.cell(work[i])); });

        std::vector<FixedPointWitness> found;
        std::vector<CellId> refine;
        for (auto& r : results) {
            for (auto& w : r.witnesses) found.push_back(std::move(w));
            const double g = r.gap.gap();
            const int d = depth[r.gap.cell];
            if (g > 0.0 && (g >= goal || d >= max_depth)) {
                settled[r.gap.cell] = std::move(r.gap);
            } else if (d < max_depth) {
                refine.push_back(r.gap.cell);
            } else {
                stuck.push_back(r.gap.cell);
            }
        }
        if (!found.empty()) {
            std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
                return a.x != b.x ? a.x < b.x : a.branch < b.branch;
            });
            CounterexampleReport rep;
            for (auto& w : found) {
                bool dup = false;
                for (const auto& kept : rep.witnesses)
                    dup = dup || (kept.branch == w.branch && geom::euclidean(kept.x, w.x) <= 10.0 * m.tolerances().dedup);
                if (!dup) rep.witnesses.push_back(std::move(w));
            }
            return rep;
        }
        if (refine.empty()) {
            if (!stuck.empty()) {
                std::sort(stuck.begin(), stuck.end());
                return Inconclusive{std::move(stuck), std::move(complex), depth_used};
            }
            break;
        }
        work.clear();
        for (CellId id : refine) {
            const int d = depth[id] + 1;
            Box b = complex.cell(id).bounds;
            bool degenerate = true;
            for (const auto& iv : b) degenerate = degenerate && !(iv.lo < iv.hi);
            if (degenerate) {
                // A point cell cannot be split further.
                stuck.push_back(id);
                continue;
            }
            auto [a, c] = complex.refine(id);
            depth[a] = d;
            depth[c] = d;
            depth_used = std::max(depth_used, d);
            work.push_back(a);
            work.push_back(c);
        }
    }

    FpfCertificate cert;
    cert.delta = std::numeric_limits<double>::infinity();
    cert.depth_used = depth_used;
    for (const auto& c : complex.cells()) {
        auto it = settled.find(c.id);
        cert.delta = std::min(cert.delta, it->second.gap());
        cert.witnesses.push_back(std::move(it->second));
    }
    cert.complex = std::move(complex);
    return cert;
}

ContinuityReport continuity_report(const MultiMapSpec& m, const DomainComplex& x, int samples, std::uint64_t seed) {
    if (samples < 2) throw ConfigError("continuity_report needs at least 2 samples");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    ContinuityReport rep;
    for (int s = 0; s < samples; ++s) {
        const auto& c = x.cells()[pick(rng)];
        const Point p = sample_point(c.bounds, rng);
        const Point q = sample_point(c.bounds, rng);
        const double d = geom::euclidean(p, q);
        if (d == 0.0) continue;
        const double h = geom::hausdorff_distance(evaluate(m, p), evaluate(m, q));
        rep.max_ratio = std::max(rep.max_ratio, h / d);
        ++rep.pairs;
    }
    return rep;
}

}  // namespace fpf::mm
