#include <regex>

#include "doctest.h"
#include "fpf/errors.hpp"
#include "fpf/io.hpp"
#include "fpf/svg.hpp"

using namespace fpf;

namespace {

const char* kTwoShifts = R"({
  "domain": {"boxes": [[[0, 12]]], "h": 0.1},
  "map": {"dimension": 1, "n": 2, "branches": [["x0+1"], ["x0+2"]]},
  "tolerances": {"dedup": 1e-9, "min_margin": 1e-6, "max_depth": 12},
  "seed": 3
})";

std::string config_error(const std::string& text) {
    try {
        io::parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("parse_config") {
    const auto c = io::parse_config(kTwoShifts);
    CHECK(c.domain.dimension == 1);
    CHECK(c.domain.h == 0.1);
    CHECK(c.branches.size() == 2);
    CHECK(c.seed == 3);
    CHECK(c.tolerances.max_depth == 12);
    const auto again = io::parse_config(io::to_json(c).dump());
    CHECK(io::to_json(again) == io::to_json(c));
}

TEST_CASE("config diagnostics name the field") {
    CHECK(config_error("{").find("line 1") != std::string::npos);
    CHECK(config_error(R"({"domain": {"boxes": [[[0,1]]], "h": 0.1}})").find("config.map") == 0);
    CHECK(config_error(R"({"domain": {"boxes": [[[0,1]]], "h": 0},
        "map": {"dimension": 1, "branches": [["x0"]]}})").find("domain.h") == 0);
    CHECK(config_error(R"({"domain": {"boxes": [[[0,1]]], "h": 0.1},
        "map": {"dimension": 1, "branches": [["x0 +"]]}})").find("map.branches[0][0]") == 0);
    CHECK(config_error(R"({"domain": {"boxes": [[[0,1]]], "h": 0.1},
        "map": {"dimension": 1, "branches": [["x1"]]}})").find("map.branches[0][0]") == 0);
    CHECK(config_error(R"({"domain": {"boxes": [[[0,1]]], "h": 0.1},
        "map": {"dimension": 1, "n": 3, "branches": [["x0"]]}})").find("map.n") == 0);
    CHECK(config_error(R"({"domain": {"boxes": [[[0,1]]], "h": 0.1},
        "map": {"dimension": 1, "branches": [["x0"]]}, "tolerances": {"dedup": -1}})").find("tolerances.dedup") == 0);
    CHECK(config_error(R"({"domain": {"boxes": [[[2,1]]], "h": 0.1},
        "map": {"dimension": 1, "branches": [["x0"]]}})").find("domain.boxes[0][0]") == 0);
}

TEST_CASE("coloring certificate round trip") {
    const auto cfg = io::parse_config(kTwoShifts);
    const auto m = cfg.map();
    const auto cert = std::get<mm::FpfCertificate>(mm::certify_fixed_point_free(m, geom::build_complex(cfg.domain), 12));
    auto cd = color::color_with_refinement(m, cert, 10);
    const std::string text = io::dump(io::coloring_certificate(cfg, cd));
    const auto loaded = io::load_coloring_certificate(text);
    CHECK(loaded.complex.size() == cd.complex.size());
    CHECK(loaded.coloring.size() == cd.coloring.size());
    CHECK(io::check_cells_cover_domain(loaded.config.domain, loaded.complex).empty());
    CHECK(verify::verify_coloring(m, loaded.complex, loaded.coloring).bright);
    // Deterministic serialisation.
    CHECK(io::dump(io::coloring_certificate(cfg, cd)) == text);

    auto j = nlohmann::json::parse(text);
    j["cells"].erase(j["cells"].size() - 1);
    for (auto& cls : j["classes"]) {
        auto& cells = cls["cells"];
        std::vector<long> keep;
        for (auto& id : cells)
            if (id.get<long>() < static_cast<long>(j["cells"].size())) keep.push_back(id.get<long>());
        cells = keep;
    }
    const auto cut = io::load_coloring_certificate(j.dump());
    const auto problems = io::check_cells_cover_domain(cut.config.domain, cut.complex);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("volume") != std::string::npos);
}

TEST_CASE("overlapping cells are reported") {
    geom::DomainSpec d{1, {{{0, 2}}}, 1.0};
    const geom::DomainComplex x(1, {{{0, 1.5}}, {{1, 2}}});
    const auto p = io::check_cells_cover_domain(d, x);
    CHECK_FALSE(p.empty());
    CHECK(p[0].find("overlap") != std::string::npos);
}

TEST_CASE("svg") {
    const auto x = geom::build_complex({2, {{{0, 1}, {0, 1}}}, 0.5});
    color::Coloring c{{{{0, 1}, 0.1, "a"}, {{1, 2, 3}, 0.1, "b"}}};
    const auto s = svg::render(x, c);
    CHECK(s == svg::render(x, c));
    CHECK(s.rfind("<?xml", 0) == 0);
    CHECK(s.find("</svg>") != std::string::npos);
    // Background, four cells and one hatched layer for the doubly covered cell.
    const std::regex cell_rect("<rect x=\"[0-9.]+\" y=");
    CHECK(std::distance(std::sregex_iterator(s.begin(), s.end(), cell_rect), std::sregex_iterator()) == 6);
    CHECK(s.find("url(#h1)") != std::string::npos);

    const auto x3 = geom::build_complex({3, {{{0, 1}, {0, 1}, {0, 1}}}, 1.0});
    CHECK_THROWS_AS(svg::render(x3, c), ConfigError);
}
