// fpfchroma: certify, color, verify and plot fixed-point-free multimaps.
//
// Exit codes
//   0  success (certified / bright / valid)
//   1  counterexample found, or verification reported violations
//   2  input error (config, certificate or discrete input)
//   3  certification inconclusive
//   4  coloring failed, or the fresh coloring did not verify

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fpf/colorer.hpp"
#include "fpf/discrete.hpp"
#include "fpf/errors.hpp"
#include "fpf/io.hpp"
#include "fpf/parallel.hpp"
#include "fpf/strata.hpp"
#include "fpf/svg.hpp"
#include "fpf/verifier.hpp"

namespace {

using namespace fpf;

enum Exit { kOk = 0, kViolation = 1, kInput = 2, kInconclusive = 3, kColorFailed = 4 };

// FPF_CHROMA_LOG: quiet | info (default) | debug
int log_level() {
    static const int level = [] {
        const char* env = std::getenv("FPF_CHROMA_LOG");
        const std::string v = env ? env : "info";
        if (v == "quiet" || v == "error" || v == "0") return 0;
        if (v == "debug" || v == "2") return 2;
        return 1;
    }();
    return level;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "fpfchroma: " << msg << "\n";
}
void debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "fpfchroma: " << msg << "\n";
}
void error(const std::string& msg) { std::cerr << "fpfchroma: error: " << msg << "\n"; }

void emit(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-")
        std::cout << data;
    else
        io::write_file(path, data);
}

int cmd_certify(const std::string& config_path, const std::string& out, int strata_axis) {
    const auto cfg = io::load_config(config_path);
    const auto m = cfg.map();
    const auto x = geom::build_complex(cfg.domain);
    debug("certifying on " + std::to_string(x.size()) + " cells");
    const auto outcome = mm::certify_fixed_point_free(m, x, cfg.tolerances.max_depth);
    auto doc = io::to_json(outcome);
    if (strata_axis >= 0) {
        if (strata_axis >= m.dimension()) throw ConfigError("--strata: axis out of range");
        doc["strata"] = io::to_json(strata::classify(m, x, strata_axis, cfg.tolerances.max_depth));
    }
    emit(out, io::dump(doc));
    if (std::holds_alternative<mm::FpfCertificate>(outcome)) {
        info("certified fixed-point free, delta = " + std::to_string(std::get<mm::FpfCertificate>(outcome).delta));
        return kOk;
    }
    if (std::holds_alternative<mm::CounterexampleReport>(outcome)) {
        info("fixed point found");
        return kViolation;
    }
    info("inconclusive");
    return kInconclusive;
}

int cmd_color(const std::string& config_path, const std::string& out, const std::string& report_path,
              const std::string& svg_path) {
    const auto cfg = io::load_config(config_path);
    const auto m = cfg.map();
    const auto x = geom::build_complex(cfg.domain);
    const auto outcome = mm::certify_fixed_point_free(m, x, cfg.tolerances.max_depth);
    if (std::holds_alternative<mm::CounterexampleReport>(outcome)) {
        emit(out, io::dump(io::to_json(outcome)));
        info("fixed point found; no coloring exists");
        return kViolation;
    }
    if (std::holds_alternative<mm::Inconclusive>(outcome)) {
        emit(out, io::dump(io::to_json(outcome)));
        info("certification inconclusive");
        return kInconclusive;
    }
    const auto& cert = std::get<mm::FpfCertificate>(outcome);
    debug("delta = " + std::to_string(cert.delta));
    color::ColoredDomain cd;
    try {
        cd = color::color_with_refinement(m, cert, cfg.max_rounds);
    } catch (const ColoringFailed& e) {
        error(e.what());
        return kColorFailed;
    } catch (const StrataViolation& e) {
        error(e.what());
        return kColorFailed;
    }
    const auto rep = verify::verify_coloring(m, cd.complex, cd.coloring, cfg.tolerances.min_margin, cfg.seed);
    emit(out, io::dump(io::coloring_certificate(cfg, cd)));
    if (!report_path.empty()) emit(report_path, io::dump(io::to_json(rep)));
    if (!svg_path.empty()) emit(svg_path, svg::render(cd.complex, cd.coloring));
    std::ostringstream ledger;
    ledger << cd.coloring.size() << " classes, bound(" << m.dimension() << "," << m.branch_count() << ") = ";
    try {
        ledger << color::bound(m.dimension(), m.branch_count());
    } catch (const Error&) {
        ledger << "overflow";
    }
    ledger << ", min margin " << rep.min_margin;
    info(ledger.str());
    if (!rep.bright) {
        error("fresh coloring failed verification");
        return kColorFailed;
    }
    return kOk;
}

int cmd_verify(const std::string& cert_path, const std::string& report_path) {
    const auto loaded = io::load_coloring_certificate(io::read_file(cert_path));
    const auto m = loaded.config.map();
    const auto problems = io::check_cells_cover_domain(loaded.config.domain, loaded.complex);
    for (const auto& p : problems) error(p);
    const auto rep = verify::verify_coloring(m, loaded.complex, loaded.coloring, loaded.config.tolerances.min_margin,
                                             loaded.config.seed);
    auto doc = io::to_json(rep);
    doc["domain_problems"] = problems;
    if (!problems.empty()) doc["verdict"] = "violation";
    emit(report_path, io::dump(doc));
    const bool ok = rep.bright && problems.empty();
    info(ok ? "bright" : "violations found");
    return ok ? kOk : kViolation;
}

int cmd_plot(const std::string& cert_path, const std::string& svg_path) {
    const auto loaded = io::load_coloring_certificate(io::read_file(cert_path));
    emit(svg_path, svg::render(loaded.complex, loaded.coloring));
    return kOk;
}

int cmd_discrete(const std::string& mode, const std::string& input, int n, const std::string& out) {
    std::ostringstream report;
    if (mode == "doubling") {
        const int colors = discrete::doubling_min_colors(n);
        report << "N " << n << "\nmin_colors " << colors << "\n";
        emit(out, report.str());
        return kOk;
    }
    if (input.empty()) throw ConfigError("--input is required for mode " + mode);
    std::ifstream in(input);
    if (!in) throw ConfigError(input + ": cannot open");
    const auto g = discrete::parse_multimap(in);
    std::vector<int> colors;
    std::size_t limit = 0;
    if (mode == "single") {
        std::map<long, std::size_t> pos;
        for (std::size_t i = 0; i < g.size(); ++i) pos[g.vertices[i]] = i;
        std::vector<std::size_t> f(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.images[i].size() != 1)
                throw ConfigError("vertex " + std::to_string(g.vertices[i]) + " needs exactly one target");
            f[i] = pos.at(g.images[i].front());
        }
        colors = discrete::discrete_color_single(f);
        limit = 3;
    } else if (mode == "multi") {
        colors = discrete::discrete_color_multi(g);
        limit = 2 * g.max_image() + 1;
    } else {
        throw ConfigError("unknown mode " + mode);
    }
    for (std::size_t i = 0; i < g.size(); ++i) report << g.vertices[i] << " " << colors[i] << "\n";
    emit(out, report.str());
    info(std::to_string(discrete::color_count(colors)) + " colors, bound " + std::to_string(limit));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certify fixed-point-free multivalued maps and build bright colorings"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker thread cap (0 = hardware)");

    std::string config, out, report, svg_path, cert, mode, input;
    int strata_axis = -1;
    int m = 0, n = 0, doubling_n = 0;

    auto* certify = app.add_subcommand("certify", "Prove x not in f(x) on the domain, or find a fixed point");
    certify->add_option("config", config, "JSON config")->required();
    certify->add_option("-o,--out", out, "Certificate output (default stdout)");
    certify->add_option("--strata", strata_axis, "Also dump strata labels for this axis");

    auto* colorc = app.add_subcommand("color", "Certify, color and verify");
    colorc->add_option("config", config, "JSON config")->required();
    colorc->add_option("-o,--out", out, "Coloring certificate output (default stdout)");
    colorc->add_option("--report", report, "Verification report output");
    colorc->add_option("--svg", svg_path, "SVG plot output (k <= 2)");

    auto* verifyc = app.add_subcommand("verify", "Re-check a coloring certificate");
    verifyc->add_option("certificate", cert, "Coloring certificate")->required();
    verifyc->add_option("--report", report, "Report output (default stdout)");

    auto* boundc = app.add_subcommand("bound", "Print the color-count bound K(m, n)");
    boundc->add_option("m", m)->required();
    boundc->add_option("n", n)->required();

    auto* discretec = app.add_subcommand("discrete", "Color finite maps");
    discretec->add_option("mode", mode, "single | multi | doubling")->required();
    discretec->add_option("-i,--input", input, "`v: a b c` lines");
    discretec->add_option("-N", doubling_n, "N for doubling mode");
    discretec->add_option("-o,--out", out, "Output (default stdout)");

    auto* plotc = app.add_subcommand("plot", "Render a coloring certificate as SVG");
    plotc->add_option("certificate", cert)->required();
    plotc->add_option("-o,--out", svg_path, "SVG output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }
    set_max_threads(threads);

    try {
        if (*certify) return cmd_certify(config, out, strata_axis);
        if (*colorc) return cmd_color(config, out, report, svg_path);
        if (*verifyc) return cmd_verify(cert, report);
        if (*plotc) return cmd_plot(cert, svg_path);
        if (*discretec) return cmd_discrete(mode, input, doubling_n, out);
        if (*boundc) {
            std::cout << color::bound(m, n) << "\n";
            return kOk;
        }
    } catch (const LoopError& e) {
        error(e.what());
        return kViolation;
    } catch (const ConfigError& e) {
        error(e.what());
        return kInput;
    } catch (const LexError& e) {
        error(e.what());
        return kInput;
    } catch (const ParseError& e) {
        error(e.what());
        return kInput;
    } catch (const GeometryError& e) {
        error(e.what());
        return kInput;
    } catch (const Error& e) {
        error(e.what());
        return kInput;
    }
    return kInput;
}
