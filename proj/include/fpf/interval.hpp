#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>

namespace fpf {

/// Closed interval [lo, hi] of doubles. Arithmetic rounds every computed
/// endpoint outward by one ulp, so results enclose the exact real range.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT: implicit point interval
    constexpr Interval(double l, double h) : lo(l), hi(h) {}

    double width() const { return hi - lo; }
    double mid() const { return lo + 0.5 * (hi - lo); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool is_point() const { return lo == hi; }
    bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
    /// Distance from 0 to the nearest point of the interval.
    double mignitude() const {
        if (lo > 0.0) return lo;
        if (hi < 0.0) return -hi;
        return 0.0;
    }
    double magnitude() const { return std::max(std::fabs(lo), std::fabs(hi)); }

    friend bool operator==(const Interval&, const Interval&) = default;
};

inline double round_down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
inline double round_up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

/// Widen an exactly computed [lo, hi] outward by one ulp on each side.
inline Interval outward(double lo, double hi) { return {round_down(lo), round_up(hi)}; }

inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    const double lo = std::max(a.lo, b.lo);
    const double hi = std::min(a.hi, b.hi);
    if (lo > hi) return std::nullopt;
    return Interval{lo, hi};
}

/// Gap between two intervals; 0 when they meet.
inline double separation(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return b.lo - a.hi;
    if (b.hi < a.lo) return a.lo - b.hi;
    return 0.0;
}

Interval operator-(const Interval& a);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
/// Throws DomainError when the divisor contains zero.
Interval operator/(const Interval& a, const Interval& b);

Interval sqr(const Interval& a);
Interval abs(const Interval& a);
/// Throws DomainError when any part of the argument is negative.
Interval sqrt(const Interval& a);
/// Throws DomainError on overflow.
Interval exp(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);

std::ostream& operator<<(std::ostream& os, const Interval& iv);

}  // namespace fpf
