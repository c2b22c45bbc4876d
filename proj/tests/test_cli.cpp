#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "fpfchroma_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string put(const std::string& name, const std::string& text) {
    const auto p = workdir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run(const std::string& args) {
    const std::string cmd = "FPF_CHROMA_LOG=quiet " + std::string(FPF_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config(const std::string& boxes, double h, const std::string& branches, int dim = 1) {
    return R"({"domain": {"boxes": )" + boxes + R"(, "h": )" + std::to_string(h) + R"(}, "map": {"dimension": )" +
           std::to_string(dim) + R"(, "branches": )" + branches + R"(}, "seed": 0})";
}

}  // namespace

TEST_CASE("certify exit codes") {
    const auto ok = put("shift.json", config("[[[0, 10]]]", 10.0, R"([["x0+1"]])"));
    const auto out = (workdir() / "shift_cert.json").string();
    CHECK(run("certify " + ok + " -o " + out) == 0);
    CHECK(nlohmann::json::parse(slurp(out))["delta"].get<double>() > 0.999);

    const auto sq = put("square.json", config("[[[0, 2]]]", 0.1, R"([["x0*x0"]])"));
    CHECK(run("certify " + sq + " -o " + (workdir() / "sq.json").string()) == 1);
    CHECK(slurp((workdir() / "sq.json").string()).find("counterexample") != std::string::npos);

    const auto bad = put("bad.json", config("[[[0, 2]]]", 0.1, R"([["x0 +* 1"]])"));
    CHECK(run("certify " + bad) == 2);
    CHECK(run("certify " + (workdir() / "missing.json").string()) == 2);

    const auto tight = put("tight.json", R"j({"domain": {"boxes": [[[-1, 1]]], "h": 2},
        "map": {"dimension": 1, "branches": [["x0 + 0.0000001 + 0.5*sin(x0)*sin(x0)"]]},
        "tolerances": {"max_depth": 1}})j");
    CHECK(run("certify " + tight) == 3);
}

TEST_CASE("color, verify and plot") {
    const auto cfg = put("two.json", config("[[[0, 12]]]", 0.1, R"([["x0+1"], ["x0+2"]])"));
    const auto cert = (workdir() / "two_cert.json").string();
    const auto cert2 = (workdir() / "two_cert2.json").string();
    const auto svg1 = (workdir() / "a.svg").string();
    const auto svg2 = (workdir() / "b.svg").string();
    CHECK(run("color " + cfg + " -o " + cert + " --svg " + svg1) == 0);
    CHECK(run("--threads 1 color " + cfg + " -o " + cert2 + " --svg " + svg2) == 0);
    CHECK(slurp(cert) == slurp(cert2));
    CHECK(slurp(svg1) == slurp(svg2));
    CHECK(slurp(cert).find("\"bound\": 52") != std::string::npos);

    CHECK(run("verify " + cert + " --report " + (workdir() / "rep.json").string()) == 0);
    CHECK(slurp((workdir() / "rep.json").string()).find("\"verdict\": \"bright\"") != std::string::npos);
    CHECK(run("plot " + cert + " -o " + (workdir() / "c.svg").string()) == 0);
    CHECK(slurp((workdir() / "c.svg").string()) == slurp(svg1));

    // Drop the last class: its cells become uncovered.
    auto tampered = nlohmann::json::parse(slurp(cert));
    tampered["classes"].erase(tampered["classes"].size() - 1);
    const auto cut = tampered.dump(2);
    CHECK(run("verify " + put("broken.json", cut)) == 1);

    const auto sq = put("square2.json", config("[[[0, 2]]]", 0.1, R"([["x0*x0"]])"));
    CHECK(run("color " + sq + " -o " + (workdir() / "sq_color.json").string()) == 1);
    CHECK(run("verify " + put("garbage.json", "{\"kind\": \"coloring\"}")) == 2);
}

TEST_CASE("bound and discrete") {
    CHECK(run("bound 1 2") == 0);
    CHECK(run("bound 0 2") == 2);

    const auto cycle = put("c6.txt", "0: 1\n1: 2\n2: 3\n3: 4\n4: 5\n5: 0\n");
    const auto out = (workdir() / "c6.out").string();
    CHECK(run("discrete single -i " + cycle + " -o " + out) == 0);
    const auto text = slurp(out);
    CHECK(text.find("0 0\n1 1\n") == 0);

    CHECK(run("discrete doubling -N 4 -o " + out) == 0);
    CHECK(slurp(out).find("min_colors 3") != std::string::npos);

    const auto loop = put("loop.txt", "0: 1\n1: 1\n");
    CHECK(run("discrete multi -i " + loop) == 1);
    CHECK(run("discrete doubling -N 99") == 2);
}
