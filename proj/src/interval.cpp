#include "fpf/interval.hpp"

#include <numbers>
#include <ostream>

#include "fpf/errors.hpp"

namespace fpf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Interval check_finite(Interval r, const char* op) {
    if (!r.finite()) throw DomainError(std::string("non-finite result in ") + op);
    return r;
}

// Libm transcendental functions are not correctly rounded; two ulps of slack
// on each side covers their documented error.
Interval widen2(double lo, double hi) { return {round_down(round_down(lo)), round_up(round_up(hi))}; }

// True when some point c + 2*pi*j (j integer) may lie inside [lo, hi]. Errs
// towards true near the boundary, which only loosens the enclosure.
bool may_contain_phase(double lo, double hi, double c) {
    const double j = std::ceil((lo - c) / kTwoPi - 1e-9);
    const double point = c + j * kTwoPi;
    return point <= hi + 1e-9 * (1.0 + std::fabs(hi));
}

}  // namespace

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator+(const Interval& a, const Interval& b) {
    return check_finite(outward(a.lo + b.lo, a.hi + b.hi), "+");
}

Interval operator-(const Interval& a, const Interval& b) {
    return check_finite(outward(a.lo - b.hi, a.hi - b.lo), "-");
}

Interval operator*(const Interval& a, const Interval& b) {
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return check_finite(outward(*std::min_element(p, p + 4), *std::max_element(p, p + 4)), "*");
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains(0.0)) throw DomainError("division by an interval containing zero");
    const double q[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    return check_finite(outward(*std::min_element(q, q + 4), *std::max_element(q, q + 4)), "/");
}

Interval sqr(const Interval& a) {
    const double l2 = a.lo * a.lo;
    const double h2 = a.hi * a.hi;
    if (a.lo >= 0.0) return check_finite(outward(l2, h2), "sqr");
    if (a.hi <= 0.0) return check_finite(outward(h2, l2), "sqr");
    return check_finite(Interval{0.0, round_up(std::max(l2, h2))}, "sqr");
}

Interval abs(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return -a;
    return {0.0, std::max(-a.lo, a.hi)};
}

Interval sqrt(const Interval& a) {
    if (a.lo < 0.0) throw DomainError("sqrt of an interval reaching below zero");
    return {std::max(0.0, round_down(std::sqrt(a.lo))), round_up(std::sqrt(a.hi))};
}

Interval exp(const Interval& a) {
    Interval r = widen2(std::exp(a.lo), std::exp(a.hi));
    r.lo = std::max(r.lo, 0.0);
    return check_finite(r, "exp");
}

Interval sin(const Interval& a) {
    if (!a.finite()) throw DomainError("sin of a non-finite interval");
    if (a.width() >= kTwoPi) return {-1.0, 1.0};
    const double s0 = std::sin(a.lo);
    const double s1 = std::sin(a.hi);
    Interval r = widen2(std::min(s0, s1), std::max(s0, s1));
    if (may_contain_phase(a.lo, a.hi, 0.5 * std::numbers::pi)) r.hi = 1.0;
    if (may_contain_phase(a.lo, a.hi, -0.5 * std::numbers::pi)) r.lo = -1.0;
    return {std::max(r.lo, -1.0), std::min(r.hi, 1.0)};
}

Interval cos(const Interval& a) {
    if (!a.finite()) throw DomainError("cos of a non-finite interval");
    if (a.width() >= kTwoPi) return {-1.0, 1.0};
    const double c0 = std::cos(a.lo);
    const double c1 = std::cos(a.hi);
    Interval r = widen2(std::min(c0, c1), std::max(c0, c1));
    if (may_contain_phase(a.lo, a.hi, 0.0)) r.hi = 1.0;
    if (may_contain_phase(a.lo, a.hi, std::numbers::pi)) r.lo = -1.0;
    return {std::max(r.lo, -1.0), std::min(r.hi, 1.0)};
}

Interval min(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }

Interval max(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

std::ostream& operator<<(std::ostream& os, const Interval& iv) {
    return os << '[' << iv.lo << ", " << iv.hi << ']';
}

}  // namespace fpf
