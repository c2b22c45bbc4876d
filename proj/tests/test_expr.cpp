#include <cmath>
#include <random>

#include "doctest.h"
#include "fpf/errors.hpp"
#include "fpf/expr.hpp"
#include "support.hpp"

using namespace fpf;
using namespace fpf::expr;

namespace {

Interval eval1(const std::string& src, Interval b) {
    const Interval box[] = {b};
    return eval_interval(parse(src), box);
}

double point1(const std::string& src, double x) {
    const double p[] = {x};
    return eval_point(parse(src), p);
}

// Grid min/max of a 1-D expression; the enclosure must contain it.
Interval grid_range(const std::string& src, Interval b, int n = 10000) {
    const auto e = parse(src);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= n; ++i) {
        const double x[] = {b.lo + (b.hi - b.lo) * i / n};
        const double v = eval_point(e, x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

}  // namespace

TEST_CASE("tokenize") {
    auto t = tokenize("x0 + 1");
    REQUIRE(t.size() == 4);
    CHECK(t[0].kind == TokenKind::Variable);
    CHECK(t[0].variable == 0);
    CHECK(t[1].kind == TokenKind::Plus);
    CHECK(t[2].kind == TokenKind::Number);
    CHECK(t[2].number == 1.0);
    CHECK(t[3].kind == TokenKind::End);

    t = tokenize("min(x0, 2*x1)");
    const TokenKind want[] = {TokenKind::Identifier, TokenKind::LParen, TokenKind::Variable, TokenKind::Comma,
                              TokenKind::Number,     TokenKind::Star,   TokenKind::Variable, TokenKind::RParen,
                              TokenKind::End};
    REQUIRE(t.size() == std::size(want));
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i].kind == want[i]);
    CHECK(t[0].text == "min");
    CHECK(t[6].variable == 1);

    try {
        tokenize("x0 @ 1");
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.offset() == 3);
    }
}

TEST_CASE("number literals") {
    CHECK(point1("1.5e2", 0) == 150.0);
    CHECK(point1(".5", 0) == 0.5);
    CHECK(tokenize("x12")[0].variable == 12);
}

TEST_CASE("parse precedence") {
    auto e = parse("1 + 2*x0");
    CHECK(e.node().op == Op::Add);
    CHECK(e.lhs().node().op == Op::Const);
    CHECK(e.rhs().node().op == Op::Mul);

    e = parse("-x0*x0");
    CHECK(e.node().op == Op::Mul);
    CHECK(e.lhs().node().op == Op::Neg);
    CHECK(point1("-x0*x0", 3) == -9.0);

    CHECK(point1("10 - 4 - 3", 0) == 3.0);
    CHECK(point1("12 / 3 / 2", 0) == 2.0);
    CHECK(point1("2 * (x0 + 1)", 2) == 6.0);
}

TEST_CASE("parse errors") {
    try {
        parse("min(1,");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("expected expression") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("foo(1)"), ParseError);
    CHECK_THROWS_AS(parse("1 2"), ParseError);
    CHECK_THROWS_AS(parse("(1"), ParseError);
    CHECK_THROWS_AS(parse("sin 1"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("bind checks variable range") {
    CHECK_NOTHROW(parse("x0 + x1").bind(2));
    CHECK_THROWS_AS(parse("x0 + x2").bind(2), DomainError);
}

TEST_CASE("eval_point") {
    CHECK(point1("x0+1", 0) == 1.0);
    CHECK(point1("min(x0, 2)", 5) == 2.0);
    CHECK(point1("max(x0, 2)", 5) == 5.0);
    CHECK(point1("abs(x0)", -2) == 2.0);
    CHECK_THROWS_AS(point1("sqrt(x0)", -1), DomainError);
    CHECK_THROWS_AS(point1("1/x0", 0), DomainError);
    CHECK_THROWS_AS(point1("exp(x0)", 1000), DomainError);
}

TEST_CASE("eval_interval examples") {
    Interval r = eval1("x0+1", {0, 1});
    CHECK(r.contains(Interval{1, 2}));
    CHECK(r.lo > 1 - 1e-12);
    CHECK(r.hi < 2 + 1e-12);

    // Square rule: no negative lower end.
    r = eval1("x0*x0", {-1, 2});
    CHECK(r.lo == 0.0);
    CHECK(r.contains(grid_range("x0*x0", {-1, 2})));
    CHECK(r.hi < 4 + 1e-12);

    r = eval1("sin(x0)", {0, 3.2});
    CHECK(r.hi == 1.0);
    CHECK(r.contains(grid_range("sin(x0)", {0, 3.2})));
    CHECK(r.lo < 0.0);  // sin(3.2) < 0

    r = eval1("cos(x0)", {3, 3.5});
    CHECK(r.lo == -1.0);

    CHECK_THROWS_AS(eval1("1/x0", {-1, 1}), DomainError);
    CHECK_THROWS_AS(eval1("sqrt(x0)", {-1, 1}), DomainError);
}

TEST_CASE("print round trip") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const auto src = testsupport::random_expr_source(rng, 3, 4);
        const auto e = parse(src);
        const auto again = parse(print(e));
        CHECK_MESSAGE(structurally_equal(e, again), src);
    }
    CHECK(print(parse("1+2*x0")) == "(1 + (2 * x0))");
}

TEST_CASE("inclusion soundness and monotonicity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int k = 1 + trial % 3;
        const auto e = parse(testsupport::random_expr_source(rng, k, 4));
        const auto b = testsupport::random_box(rng, k);
        const auto enc = eval_interval(e, b);
        const auto centered = eval_centered(e, b);
        for (int s = 0; s < 200; ++s) {
            const auto p = testsupport::random_point(rng, b);
            const double v = eval_point(e, p);
            REQUIRE(enc.contains(v));
            REQUIRE(centered.contains(v));
        }
        // Children of a bisection never enclose more than the parent.
        const int axis = geom::widest_axis(b);
        if (b[static_cast<std::size_t>(axis)].width() > 0) {
            auto [l, r] = geom::bisect(b, axis);
            CHECK(enc.contains(hull(eval_interval(e, l), eval_interval(e, r))));
        }
    }
}

TEST_CASE("centered form tightens small boxes") {
    const auto e = parse("x0 - 0.5*x0");
    const Interval box[] = {{1.0, 1.1}};
    const auto natural = eval_interval(e, box);
    const auto centered = eval_centered(e, box);
    CHECK(centered.width() < natural.width());
    CHECK(centered.contains(Interval{0.5, 0.55}));

    const auto disp = eval_centered_displacement(parse("x0 + 1"), 0, box);
    CHECK(disp.lo > 1.0 - 1e-12);
    CHECK(disp.hi < 1.0 + 1e-12);
}
