#pragma once

#include <random>
#include <string>

#include "fpf/expr.hpp"
#include "fpf/geometry.hpp"

namespace testsupport {

// Random expression that is total on every box: sqrt and division only see
// strictly positive or abs-guarded arguments, exp only bounded ones.
inline std::string random_expr_source(std::mt19937_64& rng, int k, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 12);
    std::uniform_real_distribution<double> c(-3.0, 3.0);
    auto leaf = [&]() -> std::string {
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", std::abs(c(rng)));
            return buf;
        }
        return "x" + std::to_string(std::uniform_int_distribution<int>(0, k - 1)(rng));
    };
    auto sub = [&] { return random_expr_source(rng, k, depth - 1); };
    switch (pick(rng)) {
        case 0:
        case 1: return leaf();
        case 2: return "(" + sub() + " + " + sub() + ")";
        case 3: return "(" + sub() + " - " + sub() + ")";
        case 4: return "(" + sub() + " * " + sub() + ")";
        case 5: return "(" + sub() + " / (0.5 + abs(" + sub() + ")))";
        case 6: return "-" + sub();
        case 7: return "sin(" + sub() + ")";
        case 8: return "cos(" + sub() + ")";
        case 9: return "exp(sin(" + sub() + "))";
        case 10: return "sqrt(abs(" + sub() + "))";
        case 11: return "min(" + sub() + ", " + sub() + ")";
        default: return "max(" + sub() + ", " + sub() + ")";
    }
}

inline fpf::geom::Box random_box(std::mt19937_64& rng, int k, double span = 3.0) {
    std::uniform_real_distribution<double> u(-span, span);
    std::uniform_real_distribution<double> w(0.0, 1.5);
    fpf::geom::Box b;
    for (int i = 0; i < k; ++i) {
        const double lo = u(rng);
        b.push_back({lo, lo + w(rng)});
    }
    return b;
}

inline fpf::geom::Point random_point(std::mt19937_64& rng, const fpf::geom::Box& b) {
    fpf::geom::Point p;
    for (const auto& iv : b) p.push_back(std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng));
    // Hit the corners now and then.
    if (std::uniform_int_distribution<int>(0, 9)(rng) == 0)
        for (std::size_t i = 0; i < b.size(); ++i) p[i] = (rng() & 1) ? b[i].lo : b[i].hi;
    return p;
}

}  // namespace testsupport
