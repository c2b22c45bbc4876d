#include <cmath>
#include <random>

#include "doctest.h"
#include "fpf/colorer.hpp"
#include "fpf/errors.hpp"
#include "fpf/verifier.hpp"

using namespace fpf;
using namespace fpf::color;

namespace {

mm::MultiMapSpec spec(int k, std::vector<std::vector<std::string>> b) { return mm::MultiMapSpec::parse(k, b); }

mm::FpfCertificate certify(const mm::MultiMapSpec& m, const geom::DomainComplex& x, int depth = 12) {
    auto out = mm::certify_fixed_point_free(m, x, depth);
    REQUIRE(std::holds_alternative<mm::FpfCertificate>(out));
    return std::get<mm::FpfCertificate>(out);
}

// Recurrence evaluated independently with doubles (exact below 2^53).
double bound_oracle(int m, int n) {
    double k = m + 3;
    for (int level = 2; level <= n; ++level) {
        double total = k + level * k * k;
        for (int s = 2; s <= level - 1; ++s) {
            double c = 1;
            for (int i = 0; i < s; ++i) c = c * (level - i) / (i + 1);
            total += c * level * k * k;
        }
        k = total + k * k;
    }
    return k;
}

bool has_tag(const Coloring& c, const std::string& tag) {
    for (const auto& cls : c.classes)
        if (cls.provenance.find(tag) != std::string::npos) return true;
    return false;
}

void require_bright(const mm::MultiMapSpec& m, const geom::DomainComplex& x, const Coloring& c, double margin) {
    const auto rep = verify::verify_coloring(m, x, c, margin);
    CHECK(rep.uncovered.empty());
    for (const auto& st : rep.classes) CHECK_MESSAGE(st.ok, st.reason);
    REQUIRE(rep.bright);
}

}  // namespace

TEST_CASE("bound") {
    for (int m = 1; m <= 10; ++m) CHECK(bound(m, 1) == static_cast<std::uint64_t>(m + 3));
    CHECK(bound(5, 1) == 8);
    CHECK(bound(1, 2) == 52);
    CHECK(bound(2, 2) == 80);
    CHECK(bound(1, 3) == 35204);
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 3; ++n) {
            CHECK(static_cast<double>(bound(m, n)) == bound_oracle(m, n));
            CHECK(bound(m, n + 1) > bound(m, n));
            CHECK(bound(m + 1, n) > bound(m, n));
        }
    CHECK_THROWS_AS(bound(0, 1), Error);
    CHECK_THROWS_AS(bound(1, 0), Error);
    CHECK_THROWS_AS(bound(1, 8), Error);  // overflows 64 bits
}

TEST_CASE("single-valued shift") {
    const auto m = spec(1, {{"x0+1"}});
    const auto x = geom::build_complex({1, {{{0, 12}}}, 0.1});
    const auto cert = certify(m, x);
    const auto c = color_single_valued(m, cert.complex, cert);
    CHECK(c.size() <= 4);
    for (const auto& cls : c.classes) CHECK(cls.margin >= 0.2);
    require_bright(m, cert.complex, c, 0.2);
}

TEST_CASE("single-valued map leaving the domain") {
    const auto m = spec(1, {{"x0+5"}});
    const auto x = geom::build_complex({1, {{{0, 1}}}, 0.1});
    const auto cert = certify(m, x);
    const auto c = color_single_valued(m, cert.complex, cert);
    REQUIRE(c.size() == 1);
    CHECK(c.classes[0].margin == doctest::Approx(4.0));
    CHECK(c.classes[0].cells.size() == x.size());
}

TEST_CASE("rotation on an annulus") {
    std::vector<geom::Box> cells;
    const double h = 0.1;
    for (int i = -20; i < 20; ++i)
        for (int j = -20; j < 20; ++j) {
            const geom::Box b{{i * h, (i + 1) * h}, {j * h, (j + 1) * h}};
            double near = 0, far = 0;
            for (int a = 0; a < 2; ++a) {
                const double lo = b[a].lo, hi = b[a].hi;
                const double n = lo > 0 ? lo : (hi < 0 ? -hi : 0.0);
                const double f = std::max(std::abs(lo), std::abs(hi));
                near += n * n;
                far += f * f;
            }
            if (near >= 1.0 - 1e-12 && far <= 4.0 + 1e-12) cells.push_back(b);
        }
    const geom::DomainComplex x(2, cells);
    const auto m = spec(2, {{"-x1", "x0"}});
    const auto cert = certify(m, x);
    const auto c = color_single_valued(m, cert.complex, cert);
    CHECK(c.size() <= bound(2, 1));
    require_bright(m, cert.complex, c, default_margin(cert.delta));

    const auto g = greedy_conflict_coloring(m, x, default_margin(cert.delta));
    CHECK(g.coloring.size() <= bound(2, 1));
    require_bright(m, g.complex, g.coloring, default_margin(cert.delta));
}

TEST_CASE("product_coloring") {
    Coloring g{{{{0, 1}, 0.5, "g0"}, {{2, 3}, 0.4, "g1"}, {{4, 5}, 0.3, "g2"}}};
    Coloring h{{{{0, 2, 4}, 0.2, "h0"}, {{1}, 0.6, "h1"}, {{3}, 0.6, "h2"}, {{5}, 0.6, "h3"}}};
    const auto p = product_coloring(g, h, "p");
    CHECK(p.size() <= g.size() * h.size());
    CHECK(p.covered() == g.covered());
    for (const auto& cls : p.classes) CHECK_FALSE(cls.cells.empty());
    CHECK(p.classes[0].cells == std::vector<geom::CellId>{0});
    CHECK(p.classes[0].margin == 0.2);
    CHECK(p.classes[0].provenance == "p/[g0 ^ h0]");

    const Coloring all{{{{0, 1, 2, 3, 4, 5}, 9.0, "all"}}};
    const auto same = product_coloring(g, all);
    REQUIRE(same.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(same.classes[i].cells == g.classes[i].cells);

    const auto diag = product_coloring(g, g);
    CHECK(diag.size() == g.size());

    const Coloring other{{{{0, 1, 2}, 1.0, "x"}}};
    CHECK_THROWS_AS(product_coloring(g, other), Error);
}

TEST_CASE("split_argmax on two shifts") {
    const auto m = spec(1, {{"x0+1"}, {"x0+2"}});
    const auto x = geom::build_complex({1, {{{0, 4}}}, 0.25});
    const auto cert = certify(m, x);
    std::vector<geom::CellId> all;
    for (const auto& c : cert.complex.cells()) all.push_back(c.id);
    // At the default margin (0.25, equal to the cell side) rounding makes the
    // slab boundaries conflict and each factor needs 4 colors.
    const double margin = 0.1;
    const auto c = split_argmax_coloring(m, cert.complex, all, 0, margin);
    CHECK(c.size() <= 9);
    CHECK(split_argmax_coloring(m, cert.complex, all, 0, default_margin(cert.delta)).size() <= 16);
    require_bright(m, cert.complex, c, margin);
}

TEST_CASE("split_argmax refuses a tie of every point") {
    const auto m = spec(2, {{"x0+1", "x1"}, {"x0+1", "x1+2"}});
    const auto x = geom::build_complex({2, {{{0, 1}, {0, 1}}}, 0.5});
    std::vector<geom::CellId> all;
    for (const auto& c : x.cells()) all.push_back(c.id);
    CHECK_THROWS_AS(split_argmax_coloring(m, x, all, 0, 0.1), StrataViolation);
}

TEST_CASE("stratified with two multiplicities") {
    // n = 4. On the left box three points share the top first coordinate on
    // ... no: two on the left (branch 2 drops by 1), three on the right.
    const auto m = spec(2, {{"x0+3", "x1+10"},
                            {"x0+3", "x1+20"},
                            {"x0+3 - min(1, max(0, 2-x0))", "x1+30"},
                            {"x0-5", "x1"}});
    const auto x = geom::build_complex({2, {{{0, 1}, {0, 1}}, {{3, 4}, {0, 1}}}, 0.5});
    const auto cert = certify(m, x);
    std::vector<geom::CellId> all;
    for (const auto& c : cert.complex.cells()) all.push_back(c.id);
    const double margin = default_margin(cert.delta);
    const auto c = stratified_coloring(m, cert.complex, all, 0, margin);
    CHECK(has_tag(c, "A1(M=3)"));
    CHECK(has_tag(c, "A2(M=2)"));
    require_bright(m, cert.complex, c, margin);

    // A single stratum is just the split.
    std::vector<geom::CellId> right;
    for (const auto& cell : cert.complex.cells())
        if (cell.bounds[0].lo >= 3) right.push_back(cell.id);
    const auto s = stratified_coloring(m, cert.complex, right, 0, margin);
    const auto t = split_argmax_coloring(m, cert.complex, right, 0, margin);
    REQUIRE(s.size() == t.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.classes[i].cells == t.classes[i].cells);

    CHECK(stratified_coloring(m, cert.complex, {}, 0, margin).size() == 0);
}

TEST_CASE("color_multimap") {
    SUBCASE("two shifts") {
        const auto m = spec(1, {{"x0+1"}, {"x0+2"}});
        const auto cert = certify(m, geom::build_complex({1, {{{0, 12}}}, 0.1}));
        const auto cd = color_with_refinement(m, cert, 10);
        CHECK(cd.coloring.size() <= bound(1, 2));
        require_bright(m, cd.complex, cd.coloring, 0.05);
    }
    SUBCASE("collision stratum") {
        const auto m = spec(1, {{"x0+1"}, {"3-x0"}});
        const auto cert = certify(m, geom::build_complex({1, {{{0, 1.2}}}, 0.1}));
        const auto cd = color_with_refinement(m, cert, 10);
        CHECK(has_tag(cd.coloring, "L(n=2)"));
        require_bright(m, cd.complex, cd.coloring, cd.margin);
    }
    SUBCASE("n = 1 delegates") {
        const auto m = spec(1, {{"x0+1"}});
        const auto cert = certify(m, geom::build_complex({1, {{{0, 12}}}, 0.1}));
        const auto a = color_multimap(m, cert.complex, cert);
        const auto b = color_single_valued(m, cert.complex, cert);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.classes[i].cells == b.classes[i].cells);
    }
    SUBCASE("two dimensions") {
        const auto m = spec(2, {{"x0+1", "x1"}, {"x0", "x1+1"}});
        const auto cert = certify(m, geom::build_complex({2, {{{0, 8}, {0, 8}}}, 0.25}));
        const auto cd = color_with_refinement(m, cert, 10);
        CHECK(cd.coloring.size() <= bound(2, 2));
        require_bright(m, cd.complex, cd.coloring, cd.margin);
    }
    SUBCASE("three branches") {
        const auto m = spec(1, {{"x0+1"}, {"x0+2.5"}, {"x0-1.5 + 0.2*sin(x0)"}});
        const auto cert = certify(m, geom::build_complex({1, {{{0, 6}}}, 0.1}));
        const auto cd = color_with_refinement(m, cert, 10);
        CHECK(cd.coloring.size() <= bound(1, 3));
        require_bright(m, cd.complex, cd.coloring, cd.margin);
    }
}

TEST_CASE("a fixed point blocks every coloring path") {
    const auto m = spec(1, {{"x0*x0"}});
    const auto x = geom::build_complex({1, {{{0, 2}}}, 0.1});
    CHECK(std::holds_alternative<mm::CounterexampleReport>(mm::certify_fixed_point_free(m, x, 8)));
    CHECK_THROWS_AS(greedy_conflict_coloring(m, x, 1e-3, 6), ColoringFailed);
    Colorer c(m, x, 1e-3);
    CHECK_THROWS_AS(c.color_multimap(), ColoringFailed);
}

TEST_CASE("greedy_conflict_coloring") {
    const auto m = spec(1, {{"x0+1"}});
    const auto x = geom::build_complex({1, {{{0, 12}}}, 0.5});
    const auto g = greedy_conflict_coloring(m, x, 0.25);
    CHECK(g.coloring.size() <= 4);
    CHECK(g.coloring.size() == 4);  // pinned regression value
    require_bright(m, g.complex, g.coloring, 0.25);

    const auto far = spec(1, {{"x0+100"}});
    CHECK(greedy_conflict_coloring(far, x, 0.25).coloring.size() == 1);
}

TEST_CASE("inflate_color") {
    const auto m = spec(1, {{"x0+1"}});
    const auto x = geom::build_complex({1, {{{0, 12}}}, 0.05});
    // Block [0, 0.8] of the 3-class construction: margin 0.2.
    ColorClass f;
    for (const auto& c : x.cells())
        if (c.bounds[0].hi <= 0.8 + 1e-12) f.cells.push_back(c.id);
    f.margin = 0.2;

    auto r = inflate_color(f, 0.05, m, x, 0.1);
    CHECK(r.enlarged);
    CHECK(r.color.cells.size() > f.cells.size());
    std::vector<geom::Box> cells, images;
    for (auto id : r.color.cells) {
        cells.push_back(x.cell(id).bounds);
        images.push_back(mm::enclose_branch(m, 0, x.cell(id).bounds));
    }
    CHECK(verify::verify_disjoint_from_closure(cells, images, 0.1));

    r = inflate_color(f, 0.0, m, x, 0.1);
    CHECK_FALSE(r.enlarged);
    CHECK(r.color.cells == f.cells);

    r = inflate_color(f, 0.05, m, x, 0.19);
    CHECK_FALSE(r.enlarged);
    CHECK(r.color.cells == f.cells);
    CHECK(r.report.find("back-off") != std::string::npos);
}

TEST_CASE("every produced coloring verifies") {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 20; ++t) {
        const double a = 0.8 + (rng() % 100) / 100.0;
        const double b = 2.0 + (rng() % 100) / 100.0;
        const auto m = spec(1, {{"x0 + " + std::to_string(a) + " + 0.3*sin(x0)"}, {"x0 - " + std::to_string(b)}});
        const auto cert = certify(m, geom::build_complex({1, {{{0, 8}}}, 0.2}));
        const auto cd = color_with_refinement(m, cert, 10);
        require_bright(m, cd.complex, cd.coloring, cd.margin);
        CHECK(cd.coloring.size() <= bound(1, 2));
    }
}
