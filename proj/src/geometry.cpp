#include "fpf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpf/errors.hpp"

namespace fpf::geom {

namespace {

// b - a rounded towards -inf, via the exact error term of the subtraction.
double sub_down(double b, double a) {
    const double y = -a;
    const double s = b + y;
    const double yv = s - b;
    const double bv = s - yv;
    const double err = (b - bv) + (y - yv);
    return err < 0.0 ? round_down(s) : s;
}

double gap(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return std::max(0.0, sub_down(b.lo, a.hi));
    if (b.hi < a.lo) return std::max(0.0, sub_down(a.lo, b.hi));
    return 0.0;
}

void check_dims(const Box& a, const Box& b) {
    if (a.size() != b.size()) throw GeometryError("dimension mismatch between boxes");
}

double combine_gaps(const std::vector<double>& gaps) {
    int nonzero = 0;
    double single = 0.0;
    double sum = 0.0;
    for (double g : gaps) {
        if (g > 0.0) {
            ++nonzero;
            single = g;
            sum += g * g;
        }
    }
    if (nonzero == 0) return 0.0;
    if (nonzero == 1) return single;
    return round_down(round_down(std::sqrt(sum)));
}

}  // namespace

double box_distance(const Box& a, const Box& b) {
    check_dims(a, b);
    std::vector<double> gaps(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) gaps[i] = gap(a[i], b[i]);
    return combine_gaps(gaps);
}

double point_box_distance(const Point& p, const Box& b) {
    if (p.size() != b.size()) throw GeometryError("dimension mismatch between point and box");
    std::vector<double> gaps(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) gaps[i] = gap(Interval{p[i]}, b[i]);
    return combine_gaps(gaps);
}

bool box_contains(const Box& b, const Point& p) {
    if (p.size() != b.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!b[i].contains(p[i])) return false;
    return true;
}

Box box_hull(const Box& a, const Box& b) {
    check_dims(a, b);
    Box r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = hull(a[i], b[i]);
    return r;
}

Point box_center(const Box& b) {
    Point p(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) p[i] = b[i].mid();
    return p;
}

int widest_axis(const Box& b) {
    int best = 0;
    for (std::size_t i = 1; i < b.size(); ++i)
        if (b[i].width() > b[best].width()) best = static_cast<int>(i);
    return best;
}

// ---------------------------------------------------------------------------

BoxIndex::BoxIndex(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
    by_lo_.reserve(boxes_.size());
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
        by_lo_.emplace_back(boxes_[i][0].lo, i);
        max_width0_ = std::max(max_width0_, boxes_[i][0].width());
    }
    std::sort(by_lo_.begin(), by_lo_.end());
}

std::vector<std::size_t> BoxIndex::within(const Box& query, double d) const {
    std::vector<std::size_t> out;
    if (boxes_.empty()) return out;
    const double slack = d + max_width0_;
    const double from = query[0].lo - slack - 1e-12 * (1.0 + std::fabs(query[0].lo) + slack);
    const double to = query[0].hi + d + 1e-12 * (1.0 + std::fabs(query[0].hi) + d);
    auto it = std::lower_bound(by_lo_.begin(), by_lo_.end(), std::make_pair(from, std::size_t{0}));
    for (; it != by_lo_.end() && it->first <= to; ++it) {
        if (box_distance(query, boxes_[it->second]) <= d) out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

DomainComplex::DomainComplex(int dimension, std::vector<Box> cells) : dimension_(dimension) {
    if (dimension < 1) throw GeometryError("dimension must be >= 1");
    if (cells.empty()) throw GeometryError("a domain needs at least one cell");
    cells_.reserve(cells.size());
    for (auto& b : cells) {
        if (static_cast<int>(b.size()) != dimension) throw GeometryError("cell dimension mismatch");
        for (const auto& iv : b)
            if (!(iv.lo <= iv.hi) || !iv.finite()) throw GeometryError("cell bounds must satisfy lo <= hi");
        cells_.push_back(Cell{next_id_++, std::move(b)});
    }
    reindex();
}

DomainComplex::DomainComplex(const DomainComplex& other)
    : dimension_(other.dimension_), cells_(other.cells_), position_(other.position_), next_id_(other.next_id_) {}

DomainComplex& DomainComplex::operator=(const DomainComplex& other) {
    if (this != &other) {
        dimension_ = other.dimension_;
        cells_ = other.cells_;
        position_ = other.position_;
        next_id_ = other.next_id_;
        std::lock_guard lock(index_mutex_);
        index_.reset();
    }
    return *this;
}

DomainComplex::DomainComplex(DomainComplex&& other) noexcept
    : dimension_(other.dimension_),
      cells_(std::move(other.cells_)),
      position_(std::move(other.position_)),
      next_id_(other.next_id_) {}

DomainComplex& DomainComplex::operator=(DomainComplex&& other) noexcept {
    dimension_ = other.dimension_;
    cells_ = std::move(other.cells_);
    position_ = std::move(other.position_);
    next_id_ = other.next_id_;
    index_.reset();
    return *this;
}

void DomainComplex::reindex() {
    position_.assign(static_cast<std::size_t>(next_id_), -1);
    for (std::size_t i = 0; i < cells_.size(); ++i) position_[static_cast<std::size_t>(cells_[i].id)] = static_cast<long>(i);
    std::lock_guard lock(index_mutex_);
    index_.reset();
}

bool DomainComplex::contains(CellId id) const {
    return id >= 0 && id < static_cast<CellId>(position_.size()) && position_[static_cast<std::size_t>(id)] >= 0;
}

const Cell& DomainComplex::cell(CellId id) const {
    if (!contains(id)) throw GeometryError("unknown cell id " + std::to_string(id));
    return cells_[static_cast<std::size_t>(position_[static_cast<std::size_t>(id)])];
}

std::pair<Box, Box> bisect(const Box& b, int axis) {
    if (axis < 0 || axis >= static_cast<int>(b.size())) throw GeometryError("axis out of range");
    const Interval& iv = b[axis];
    if (!(iv.lo < iv.hi)) throw GeometryError("cannot bisect a degenerate axis");
    const double mid = iv.mid();
    if (!(iv.lo < mid && mid < iv.hi)) throw GeometryError("cell too small to bisect");
    Box left = b;
    Box right = b;
    left[axis].hi = mid;
    right[axis].lo = mid;
    return {std::move(left), std::move(right)};
}

std::pair<CellId, CellId> DomainComplex::refine(CellId id, std::optional<int> axis) {
    const Cell parent = cell(id);
    auto [left, right] = bisect(parent.bounds, axis.value_or(widest_axis(parent.bounds)));
    const long pos = position_[static_cast<std::size_t>(id)];
    cells_.erase(cells_.begin() + pos);
    const CellId a = next_id_++;
    const CellId b = next_id_++;
    cells_.push_back(Cell{a, std::move(left)});
    cells_.push_back(Cell{b, std::move(right)});
    reindex();
    return {a, b};
}

const BoxIndex& DomainComplex::spatial() const {
    std::lock_guard lock(index_mutex_);
    if (!index_) {
        std::vector<Box> boxes;
        boxes.reserve(cells_.size());
        for (const auto& c : cells_) boxes.push_back(c.bounds);
        index_.emplace(std::move(boxes));
    }
    return *index_;
}

std::vector<CellId> DomainComplex::cells_within(const Box& query, double d) const {
    std::vector<CellId> out;
    for (std::size_t pos : spatial().within(query, d)) out.push_back(cells_[pos].id);
    return out;
}

DomainComplex build_complex(const DomainSpec& spec) {
    if (spec.boxes.empty()) throw GeometryError("empty domain specification");
    if (!(spec.h > 0.0) || !std::isfinite(spec.h)) throw GeometryError("grid resolution h must be positive");
    if (spec.dimension < 1) throw GeometryError("dimension must be >= 1");
    const std::size_t k = static_cast<std::size_t>(spec.dimension);
    for (const auto& b : spec.boxes) {
        if (b.size() != k) throw GeometryError("domain box dimension mismatch");
        for (const auto& iv : b)
            if (!iv.finite() || !(iv.lo <= iv.hi)) throw GeometryError("domain box bounds must satisfy lo <= hi");
    }
    for (std::size_t i = 0; i < spec.boxes.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.boxes.size(); ++j) {
            bool interior_overlap = true;
            for (std::size_t a = 0; a < k; ++a) {
                const double lo = std::max(spec.boxes[i][a].lo, spec.boxes[j][a].lo);
                const double hi = std::min(spec.boxes[i][a].hi, spec.boxes[j][a].hi);
                if (!(lo < hi)) interior_overlap = false;
            }
            if (interior_overlap) throw GeometryError("domain boxes overlap");
        }
    }

    std::vector<Box> cells;
    for (const auto& b : spec.boxes) {
        std::vector<long> parts(k);
        long total = 1;
        for (std::size_t a = 0; a < k; ++a) {
            const double w = b[a].width();
            parts[a] = w > 0.0 ? std::max(1L, static_cast<long>(std::ceil(w / spec.h - 1e-9))) : 1L;
            total *= parts[a];
            if (total > 50'000'000) throw GeometryError("grid too fine");
        }
        std::vector<long> idx(k, 0);
        for (long c = 0; c < total; ++c) {
            Box cell(k);
            for (std::size_t a = 0; a < k; ++a) {
                const double lo = b[a].lo, hi = b[a].hi;
                const double n = static_cast<double>(parts[a]);
                const double l = idx[a] == 0 ? lo : lo + (hi - lo) * (static_cast<double>(idx[a]) / n);
                const double u = idx[a] + 1 == parts[a] ? hi : lo + (hi - lo) * (static_cast<double>(idx[a] + 1) / n);
                cell[a] = Interval{l, u};
            }
            cells.push_back(std::move(cell));
            for (std::size_t a = k; a-- > 0;) {
                if (++idx[a] < parts[a]) break;
                idx[a] = 0;
            }
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Box& x, const Box& y) {
        for (std::size_t a = 0; a < x.size(); ++a)
            if (x[a].lo != y[a].lo) return x[a].lo < y[a].lo;
        for (std::size_t a = 0; a < x.size(); ++a)
            if (x[a].hi != y[a].hi) return x[a].hi < y[a].hi;
        return false;
    });
    return DomainComplex(spec.dimension, std::move(cells));
}

// ---------------------------------------------------------------------------

double euclidean(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw GeometryError("dimension mismatch between points");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

FiniteSet::FiniteSet(std::vector<Point> points, double dedup_tolerance) {
    std::sort(points.begin(), points.end());
    for (auto& p : points) {
        bool duplicate = false;
        for (const auto& q : points_) {
            if (euclidean(p, q) <= dedup_tolerance) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) points_.push_back(std::move(p));
    }
}

double hausdorff_distance(const FiniteSet& a, const FiniteSet& b) {
    if (a.size() == 0 || b.size() == 0) throw GeometryError("Hausdorff distance of an empty set");
    if (a.dimension() != b.dimension()) throw GeometryError("dimension mismatch between sets");
    auto directed = [](const FiniteSet& x, const FiniteSet& y) {
        double worst = 0.0;
        for (const auto& p : x.points()) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y.points()) best = std::min(best, euclidean(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

double boxset_separation(const std::vector<Box>& s, const std::vector<Box>& t) {
    if (s.empty() || t.empty()) throw GeometryError("separation of an empty box list");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : s) {
        for (const auto& b : t) {
            best = std::min(best, box_distance(a, b));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

}  // namespace fpf::geom
