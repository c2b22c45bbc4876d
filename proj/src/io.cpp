#include "fpf/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fpf/errors.hpp"

namespace fpf::io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) bad(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) bad(path + "." + key, "missing");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(path, "must be finite");
    return v;
}

long integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<long>();
}

geom::Box parse_box(const json& j, int dim, const std::string& path) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim))
        bad(path, "expected " + std::to_string(dim) + " [lo, hi] pairs");
    geom::Box b;
    for (std::size_t a = 0; a < j.size(); ++a) {
        const std::string p = path + "[" + std::to_string(a) + "]";
        if (!j[a].is_array() || j[a].size() != 2) bad(p, "expected [lo, hi]");
        const double lo = number(j[a][0], p + "[0]");
        const double hi = number(j[a][1], p + "[1]");
        if (lo > hi) bad(p, "lo exceeds hi");
        b.push_back({lo, hi});
    }
    return b;
}

json box_json(const geom::Box& b) {
    json out = json::array();
    for (const auto& iv : b) out.push_back({iv.lo, iv.hi});
    return out;
}

}  // namespace

mm::MultiMapSpec RunConfig::map() const { return mm::MultiMapSpec::parse(domain.dimension, branches, tolerances); }

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig c;
    const auto& map = field(j, "map", "config");
    const long dim = integer(field(map, "dimension", "map"), "map.dimension");
    if (dim < 1 || dim > 16) bad("map.dimension", "must be between 1 and 16");
    c.domain.dimension = static_cast<int>(dim);

    const auto& branches = field(map, "branches", "map");
    if (!branches.is_array() || branches.empty()) bad("map.branches", "expected a nonempty array");
    if (auto n = map.find("n"); n != map.end() && integer(*n, "map.n") != static_cast<long>(branches.size()))
        bad("map.n", "does not match the number of branches");
    for (std::size_t b = 0; b < branches.size(); ++b) {
        const std::string p = "map.branches[" + std::to_string(b) + "]";
        if (!branches[b].is_array() || branches[b].size() != static_cast<std::size_t>(dim))
            bad(p, "expected " + std::to_string(dim) + " expressions");
        std::vector<std::string> comps;
        for (std::size_t a = 0; a < branches[b].size(); ++a) {
            if (!branches[b][a].is_string()) bad(p + "[" + std::to_string(a) + "]", "expected a string");
            comps.push_back(branches[b][a].get<std::string>());
        }
        c.branches.push_back(std::move(comps));
    }

    const auto& domain = field(j, "domain", "config");
    c.domain.h = number(field(domain, "h", "domain"), "domain.h");
    if (!(c.domain.h > 0)) bad("domain.h", "must be positive");
    const auto& boxes = field(domain, "boxes", "domain");
    if (!boxes.is_array() || boxes.empty()) bad("domain.boxes", "expected a nonempty array");
    for (std::size_t i = 0; i < boxes.size(); ++i)
        c.domain.boxes.push_back(parse_box(boxes[i], c.domain.dimension, "domain.boxes[" + std::to_string(i) + "]"));

    if (auto t = j.find("tolerances"); t != j.end()) {
        if (!t->is_object()) bad("tolerances", "expected an object");
        if (auto v = t->find("dedup"); v != t->end()) c.tolerances.dedup = number(*v, "tolerances.dedup");
        if (auto v = t->find("margin_goal"); v != t->end()) c.tolerances.margin_goal = number(*v, "tolerances.margin_goal");
        if (auto v = t->find("min_margin"); v != t->end()) c.tolerances.min_margin = number(*v, "tolerances.min_margin");
        if (auto v = t->find("max_depth"); v != t->end())
            c.tolerances.max_depth = static_cast<int>(integer(*v, "tolerances.max_depth"));
        if (!(c.tolerances.dedup > 0)) bad("tolerances.dedup", "must be positive");
        if (!(c.tolerances.min_margin > 0)) bad("tolerances.min_margin", "must be positive");
        if (c.tolerances.margin_goal < 0) bad("tolerances.margin_goal", "must be >= 0");
        if (c.tolerances.max_depth < 0 || c.tolerances.max_depth > 40) bad("tolerances.max_depth", "must be in 0..40");
    }
    if (auto s = j.find("seed"); s != j.end()) {
        if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long>() >= 0))
            bad("seed", "expected a non-negative integer");
        c.seed = s->get<std::uint64_t>();
    }
    if (auto r = j.find("max_rounds"); r != j.end()) {
        c.max_rounds = static_cast<int>(integer(*r, "max_rounds"));
        if (c.max_rounds < 0) bad("max_rounds", "must be >= 0");
    }

    // Surface expression errors with their field path.
    for (std::size_t b = 0; b < c.branches.size(); ++b) {
        for (std::size_t a = 0; a < c.branches[b].size(); ++a) {
            try {
                const auto e = expr::parse(c.branches[b][a]);
                e.bind(c.domain.dimension);
            } catch (const Error& e) {
                bad("map.branches[" + std::to_string(b) + "][" + std::to_string(a) + "]", e.what());
            }
        }
    }
    return c;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot write");
    out << data;
    if (!out) throw Error(path + ": write failed");
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

json to_json(const RunConfig& c) {
    json boxes = json::array();
    for (const auto& b : c.domain.boxes) boxes.push_back(box_json(b));
    return {
        {"domain", {{"boxes", boxes}, {"h", c.domain.h}}},
        {"map", {{"dimension", c.domain.dimension}, {"branches", c.branches}}},
        {"tolerances",
         {{"dedup", c.tolerances.dedup},
          {"margin_goal", c.tolerances.margin_goal},
          {"min_margin", c.tolerances.min_margin},
          {"max_depth", c.tolerances.max_depth}}},
        {"seed", c.seed},
        {"max_rounds", c.max_rounds},
    };
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json export_cells(const geom::DomainComplex& x) {
    json out = json::array();
    long i = 0;
    for (const auto& c : x.cells()) out.push_back({{"id", i++}, {"box", box_json(c.bounds)}});
    return out;
}

color::Coloring remap_coloring(const geom::DomainComplex& x, const color::Coloring& c) {
    std::unordered_map<geom::CellId, geom::CellId> pos;
    geom::CellId i = 0;
    for (const auto& cell : x.cells()) pos[cell.id] = i++;
    color::Coloring out = c;
    for (auto& cls : out.classes) {
        for (auto& id : cls.cells) id = pos.at(id);
        std::sort(cls.cells.begin(), cls.cells.end());
    }
    return out;
}

geom::DomainComplex import_cells(int dimension, const json& cells) {
    if (!cells.is_array()) bad("cells", "expected an array");
    std::vector<geom::Box> boxes;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string p = "cells[" + std::to_string(i) + "]";
        if (integer(field(cells[i], "id", p), p + ".id") != static_cast<long>(i)) bad(p + ".id", "ids must be 0..N-1 in order");
        boxes.push_back(parse_box(field(cells[i], "box", p), dimension, p + ".box"));
    }
    return geom::DomainComplex(dimension, std::move(boxes));
}

json to_json(const mm::FpfOutcome& outcome) {
    if (const auto* c = std::get_if<mm::FpfCertificate>(&outcome)) {
        return {{"kind", "fpf_certificate"},
                {"delta", c->delta},
                {"depth_used", c->depth_used},
                {"cell_count", c->complex.size()},
                {"cells", export_cells(c->complex)}};
    }
    if (const auto* r = std::get_if<mm::CounterexampleReport>(&outcome)) {
        json w = json::array();
        for (const auto& f : r->witnesses) w.push_back({{"x", f.x}, {"branch", f.branch}, {"residual", f.residual}});
        return {{"kind", "counterexample"}, {"witnesses", w}};
    }
    const auto& inc = std::get<mm::Inconclusive>(outcome);
    json s = json::array();
    for (auto id : inc.suspects) s.push_back(box_json(inc.complex.cell(id).bounds));
    return {{"kind", "inconclusive"}, {"depth_used", inc.depth_used}, {"suspect_cells", s}};
}

json to_json(const color::Coloring& c) {
    json out = json::array();
    for (const auto& cls : c.classes)
        out.push_back({{"cells", cls.cells}, {"margin", cls.margin}, {"provenance", cls.provenance}});
    return out;
}

color::Coloring coloring_from_json(const json& j) {
    if (!j.is_array()) bad("classes", "expected an array");
    color::Coloring c;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = "classes[" + std::to_string(i) + "]";
        color::ColorClass cls;
        const auto& cells = field(j[i], "cells", p);
        if (!cells.is_array()) bad(p + ".cells", "expected an array");
        for (std::size_t k = 0; k < cells.size(); ++k) cls.cells.push_back(integer(cells[k], p + ".cells"));
        std::sort(cls.cells.begin(), cls.cells.end());
        if (auto m = j[i].find("margin"); m != j[i].end()) cls.margin = number(*m, p + ".margin");
        if (auto pr = j[i].find("provenance"); pr != j[i].end() && pr->is_string()) cls.provenance = pr->get<std::string>();
        c.classes.push_back(std::move(cls));
    }
    return c;
}

json to_json(const verify::VerificationReport& r) {
    json classes = json::array();
    for (const auto& st : r.classes) {
        json v = json::array();
        for (const auto& pv : st.point_violations)
            v.push_back({{"x", pv.x}, {"y", pv.y}, {"cell", pv.cell}, {"distance", pv.distance}});
        classes.push_back({{"index", st.index}, {"margin", st.margin}, {"ok", st.ok}, {"reason", st.reason},
                           {"point_violations", v}});
    }
    return {{"verdict", r.bright ? "bright" : "violation"},
            {"min_margin", r.min_margin},
            {"uncovered", r.uncovered},
            {"classes", classes}};
}

json to_json(const strata::StrataPartition& p) {
    json labels = json::array();
    for (const auto& l : p.labels) {
        json singles = json::array();
        for (auto s : l.singleton) singles.push_back(strata::to_string(s));
        labels.push_back({{"cell", l.cell},
                          {"box", box_json(p.complex.cell(l.cell).bounds)},
                          {"multiplicity", l.multiplicity.certified ? json(l.multiplicity.multiplicity) : json("ambiguous")},
                          {"top_branches", l.multiplicity.top_branches},
                          {"collision", strata::to_string(l.collision)},
                          {"singleton", singles}});
    }
    return {{"axis", p.axis}, {"ambiguous", p.ambiguous}, {"labels", labels}};
}

json coloring_certificate(const RunConfig& cfg, const color::ColoredDomain& cd) {
    const int k = cfg.domain.dimension;
    const int n = static_cast<int>(cfg.branches.size());
    json bound;
    try {
        bound = color::bound(k, n);
    } catch (const Error&) {
        bound = "overflow";
    }
    return {{"kind", "coloring"},
            {"config", to_json(cfg)},
            {"margin", cd.margin},
            {"refinement_rounds", cd.refinement_rounds},
            {"cells", export_cells(cd.complex)},
            {"classes", to_json(remap_coloring(cd.complex, cd.coloring))},
            {"ledger", {{"classes", cd.coloring.size()}, {"bound", bound}, {"k", k}, {"n", n}}}};
}

LoadedCertificate load_coloring_certificate(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("certificate: ") + e.what());
    }
    if (!j.is_object() || j.value("kind", "") != "coloring") bad("kind", "expected \"coloring\"");
    LoadedCertificate out;
    out.config = parse_config(field(j, "config", "certificate").dump());
    out.complex = import_cells(out.config.domain.dimension, field(j, "cells", "certificate"));
    out.coloring = coloring_from_json(field(j, "classes", "certificate"));
    out.margin = number(field(j, "margin", "certificate"), "margin");
    return out;
}

std::vector<std::string> check_cells_cover_domain(const geom::DomainSpec& domain, const geom::DomainComplex& x) {
    std::vector<std::string> problems;
    auto volume = [](const geom::Box& b) {
        double v = 1.0;
        for (const auto& iv : b) v *= iv.hi - iv.lo;
        return v;
    };
    double want = 0.0;
    for (const auto& b : domain.boxes) want += volume(b);
    double have = 0.0;
    for (const auto& c : x.cells()) {
        have += volume(c.bounds);
        bool inside = false;
        for (const auto& b : domain.boxes) {
            bool in = true;
            for (std::size_t a = 0; a < b.size() && in; ++a) in = c.bounds[a].lo >= b[a].lo && c.bounds[a].hi <= b[a].hi;
            inside = inside || in;
        }
        if (!inside) problems.push_back("cell " + std::to_string(c.id) + " lies outside the domain");
        for (auto other : x.cells_within(c.bounds, 0.0)) {
            if (other <= c.id) continue;
            const auto& o = x.cell(other).bounds;
            bool interior = true;
            for (std::size_t a = 0; a < o.size() && interior; ++a)
                interior = std::min(o[a].hi, c.bounds[a].hi) > std::max(o[a].lo, c.bounds[a].lo);
            if (interior) problems.push_back("cells " + std::to_string(c.id) + " and " + std::to_string(other) + " overlap");
        }
    }
    if (std::abs(have - want) > 1e-9 * std::max(1.0, want))
        problems.push_back("cells cover volume " + std::to_string(have) + " of " + std::to_string(want));
    return problems;
}

}  // namespace fpf::io
