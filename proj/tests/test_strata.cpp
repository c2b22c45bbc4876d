#include <random>

#include "doctest.h"
#include "fpf/strata.hpp"

using namespace fpf;
using namespace fpf::strata;

namespace {

mm::MultiMapSpec spec(int k, std::vector<std::vector<std::string>> b) { return mm::MultiMapSpec::parse(k, b); }

// Points of f(x) whose coordinate `axis` is within tau of the maximum.
int exact_multiplicity(const mm::MultiMapSpec& m, const geom::Point& x, int axis) {
    const auto s = mm::evaluate(m, x);
    double top = -1e300;
    for (const auto& p : s.points()) top = std::max(top, p[axis]);
    int n = 0;
    for (const auto& p : s.points()) n += p[axis] >= top - 1e-9;
    return n;
}

}  // namespace

TEST_CASE("argmax_multiplicity examples") {
    const auto m = spec(1, {{"x0+1"}, {"x0+2"}});
    auto lab = argmax_multiplicity(m, geom::Cell{0, {{0, 1}}}, 0);
    CHECK_FALSE(lab.certified);
    lab = argmax_multiplicity(m, geom::Cell{0, {{0, 0.5}}}, 0);
    CHECK(lab.certified);
    CHECK(lab.multiplicity == 1);
    CHECK(lab.top_branches == std::vector<int>{1});

    const auto m2 = spec(2, {{"x0+1", "0"}, {"x0+1", "1"}, {"x0-1", "0"}});
    lab = argmax_multiplicity(m2, geom::Cell{0, {{0, 1}, {0, 1}}}, 0);
    CHECK(lab.certified);
    CHECK(lab.multiplicity == 2);

    lab = argmax_multiplicity(spec(1, {{"x0+1"}}), geom::Cell{0, {{0, 1}}}, 0);
    CHECK(lab.certified);
    CHECK(lab.multiplicity == 1);
}

TEST_CASE("classify two shifts") {
    const auto m = spec(1, {{"x0+1"}, {"x0+2"}});
    const auto p = classify(m, geom::build_complex({1, {{{0, 4}}}, 1.0}), 0, 3);
    CHECK(p.ambiguous.empty());
    for (const auto& l : p.labels) {
        CHECK(l.multiplicity.certified);
        CHECK(l.multiplicity.multiplicity == 1);
        CHECK(l.collision == Collision::AllDistinct);
        CHECK(l.singleton[0] == Singleton::NonSingleton);
    }
}

TEST_CASE("classify keeps the collision boundary ambiguous") {
    const auto m = spec(1, {{"x0+1"}, {"3-x0"}});
    for (int depth : {2, 6, 10}) {
        const auto p = classify(m, geom::build_complex({1, {{{0, 2}}}, 0.5}), 0, depth);
        REQUIRE_FALSE(p.ambiguous.empty());
        for (auto id : p.ambiguous) {
            const auto& b = p.complex.cell(id).bounds[0];
            CHECK(b.lo <= 1.0 + 1e-6);
            CHECK(b.hi >= 1.0 - 1e-6);
        }
    }
}

TEST_CASE("classify identical first components") {
    const auto m = spec(2, {{"x0+1", "x1"}, {"x0+1", "x1+2"}});
    const auto p = classify(m, geom::build_complex({2, {{{0, 1}, {0, 1}}}, 0.5}), 0, 4);
    CHECK(p.ambiguous.empty());
    for (const auto& l : p.labels) {
        CHECK(l.multiplicity.multiplicity == 2);
        CHECK(l.singleton[0] == Singleton::Singleton);
        CHECK(l.singleton[1] == Singleton::NonSingleton);
        CHECK(l.collision == Collision::AllDistinct);
    }
}

TEST_CASE("certified labels are sound") {
    std::mt19937_64 rng(41);
    const auto m = spec(2, {{"x0 + 1", "sin(x1)"}, {"2 - x0", "x1"}, {"x0*x0/4 + 1", "x1 + 1"}});
    for (int axis = 0; axis < 2; ++axis) {
        const auto p = classify(m, geom::build_complex({2, {{{0, 2}, {0, 2}}}, 0.5}), axis, 6);
        for (const auto& l : p.labels) {
            const auto& b = p.complex.cell(l.cell).bounds;
            for (int s = 0; s < 50; ++s) {
                geom::Point x{std::uniform_real_distribution<double>(b[0].lo, b[0].hi)(rng),
                              std::uniform_real_distribution<double>(b[1].lo, b[1].hi)(rng)};
                if (l.multiplicity.certified) CHECK(exact_multiplicity(m, x, axis) == l.multiplicity.multiplicity);
                if (l.collision == Collision::AllDistinct) CHECK(mm::evaluate(m, x).size() == 3);
                if (l.singleton[axis] == Singleton::Singleton) {
                    const auto s = mm::evaluate(m, x);
                    for (const auto& q : s.points()) CHECK(q[axis] == doctest::Approx(s.points()[0][axis]));
                }
            }
        }
    }
}
