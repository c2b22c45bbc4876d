#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpf/colorer.hpp"
#include "fpf/verifier.hpp"
#include "fpf/strata.hpp"
#include "json.hpp"

namespace fpf::io {

using json = nlohmann::json;

struct RunConfig {
    geom::DomainSpec domain;
    std::vector<std::vector<std::string>> branches;  // n branches of k expressions
    mm::Tolerances tolerances;
    std::uint64_t seed = 0;
    int max_rounds = 10;  // refinement rounds for the coloring

    mm::MultiMapSpec map() const;
};

/// Parses and validates a JSON config. Errors are ConfigError messages of the
/// form "<field path>: <problem>"; JSON syntax errors carry line and column.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
json to_json(const RunConfig& c);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

/// Cells in ascending id order; export_cells renumbers them 0..N-1 and
/// remap_coloring applies the same renumbering to a coloring.
json export_cells(const geom::DomainComplex& x);
color::Coloring remap_coloring(const geom::DomainComplex& x, const color::Coloring& c);
geom::DomainComplex import_cells(int dimension, const json& cells);

json to_json(const mm::FpfOutcome& outcome);
json to_json(const color::Coloring& c);
color::Coloring coloring_from_json(const json& j);
json to_json(const verify::VerificationReport& r);
json to_json(const strata::StrataPartition& p);

/// A coloring certificate: config echo, cells, classes, ledger.
json coloring_certificate(const RunConfig& cfg, const color::ColoredDomain& cd);

struct LoadedCertificate {
    RunConfig config;
    geom::DomainComplex complex;
    color::Coloring coloring;
    double margin = 0.0;
};
LoadedCertificate load_coloring_certificate(const std::string& text);

/// Problems with the certificate's cells against the configured domain:
/// cells outside every domain box, overlapping interiors, or missing volume.
std::vector<std::string> check_cells_cover_domain(const geom::DomainSpec& domain, const geom::DomainComplex& x);

/// Serialises with two-space indent and a trailing newline.
std::string dump(const json& j);

}  // namespace fpf::io
