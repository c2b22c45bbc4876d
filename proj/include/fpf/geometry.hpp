#pragma once

#include <cstddef>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "fpf/interval.hpp"

namespace fpf::geom {

using Point = std::vector<double>;
/// Axis-aligned closed box, one interval per axis. Degenerate axes allowed.
using Box = std::vector<Interval>;
using CellId = long;

/// Euclidean distance between two boxes, rounded down; 0 when they meet.
double box_distance(const Box& a, const Box& b);
/// Euclidean distance from a point to a box, rounded down.
double point_box_distance(const Point& p, const Box& b);
bool box_contains(const Box& b, const Point& p);
Box box_hull(const Box& a, const Box& b);
Point box_center(const Box& b);
/// Axis of largest width; lowest index on ties.
int widest_axis(const Box& b);

/// Static proximity index over a list of boxes. Candidates are pruned with a
/// sweep along axis 0 and then filtered by exact box distance.
class BoxIndex {
public:
    BoxIndex() = default;
    explicit BoxIndex(std::vector<Box> boxes);

    /// Positions of all boxes at distance <= d from the query, ascending.
    std::vector<std::size_t> within(const Box& query, double d) const;
    std::size_t size() const { return boxes_.size(); }
    const Box& box(std::size_t i) const { return boxes_[i]; }

private:
    std::vector<Box> boxes_;
    std::vector<std::pair<double, std::size_t>> by_lo_;  // (lo on axis 0, position)
    double max_width0_ = 0.0;
};

struct Cell {
    CellId id = 0;
    Box bounds;
};

/// Input description of a compact domain: a union of boxes gridded at side <= h.
struct DomainSpec {
    int dimension = 1;
    std::vector<Box> boxes;
    double h = 1.0;
};

/// Finite union of closed cells with pairwise disjoint interiors.
class DomainComplex {
public:
    DomainComplex() = default;
    /// Cells are numbered 0.. in the given order.
    DomainComplex(int dimension, std::vector<Box> cells);
    DomainComplex(const DomainComplex& other);
    DomainComplex& operator=(const DomainComplex& other);
    DomainComplex(DomainComplex&&) noexcept;
    DomainComplex& operator=(DomainComplex&&) noexcept;

    int dimension() const { return dimension_; }
    std::size_t size() const { return cells_.size(); }
    /// Live cells in ascending id order.
    const std::vector<Cell>& cells() const { return cells_; }
    bool contains(CellId id) const;
    const Cell& cell(CellId id) const;
    CellId next_id() const { return next_id_; }

    /// Bisect a cell (widest axis by default). The parent is retired; the
    /// children receive fresh ids. Throws GeometryError on a degenerate axis.
    std::pair<CellId, CellId> refine(CellId id, std::optional<int> axis = std::nullopt);

    /// Ids of cells at distance <= d from the query box, ascending.
    std::vector<CellId> cells_within(const Box& query, double d) const;

private:
    void reindex();
    const BoxIndex& spatial() const;

    int dimension_ = 1;
    std::vector<Cell> cells_;
    std::vector<long> position_;  // id -> index into cells_, -1 if retired
    CellId next_id_ = 0;
    mutable std::mutex index_mutex_;
    mutable std::optional<BoxIndex> index_;
};

/// Split every box into grid cells of side <= h; ids follow the lexicographic
/// order of cell lower corners. Throws GeometryError on bad input.
DomainComplex build_complex(const DomainSpec& spec);

/// Bisection at the midpoint. Throws GeometryError on a degenerate axis.
std::pair<Box, Box> bisect(const Box& b, int axis);

/// Canonical element of exp_n(R^k): deduplicated, lexicographically sorted.
class FiniteSet {
public:
    FiniteSet() = default;
    FiniteSet(std::vector<Point> points, double dedup_tolerance);

    const std::vector<Point>& points() const& { return points_; }
    std::vector<Point> points() && { return std::move(points_); }
    std::size_t size() const { return points_.size(); }
    int dimension() const { return points_.empty() ? 0 : static_cast<int>(points_.front().size()); }

    friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

private:
    std::vector<Point> points_;
};

double euclidean(const Point& a, const Point& b);

/// Hausdorff distance under the Euclidean metric. Throws on dimension
/// mismatch or empty input.
double hausdorff_distance(const FiniteSet& a, const FiniteSet& b);

/// Minimum exact distance between boxes of S and boxes of T; a lower bound on
/// the distance between any sets they enclose.
double boxset_separation(const std::vector<Box>& s, const std::vector<Box>& t);

}  // namespace fpf::geom
