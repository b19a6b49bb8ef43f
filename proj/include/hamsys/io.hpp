#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hamsys/verify.hpp"

// Run configuration (flat INI-style text with dotted keys), artifact
// persistence (field/trace/sweep CSVs with JSON sidecars) and manifest
// assembly.  Machine files carry 17 significant digits; human tables carry 6.

namespace hamsys {

struct RunConfig {
    ExponentPair problem{3.0, 3.0, 0.0, 0.0, 1};  // N is taken from the domain
    Domain dom = Domain::interval(M_PI);
    int modes = 64;
    std::vector<Framework> frameworks = {Framework::Dual, Framework::Inversion,
                                         Framework::LSReduction};
    SolverConfig solver;
    Tolerances tols;
    std::vector<double> lambdas = {1.0};    // reduced-functional parameter sweep
    std::vector<double> sweep_weights = {0.0, 5.0, 10.0, 15.0, 20.0};
    std::string outdir = "out";
};

// Parse from text/file.  `origin` labels diagnostics ("path:line: field ...").
// Accepts `[section]` headers with `key = value` lines and equivalently flat
// `section.key = value`; '#' and ';' start comments; unknown keys are errors.
RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);
// Canonical round-trippable INI echo of a config (deterministic).
std::string config_echo(const RunConfig& cfg);

std::string fmt_full(double x);   // 17 significant digits
std::string fmt_human(double x);  // 6 significant digits

Framework parse_framework(const std::string& name);  // throws on unknown

// stem.csv gets `mode_index,coefficient`; stem.json the basis descriptor.
void save_field(const Field& f, const std::string& stem);
Field load_field(const std::string& stem);
// Nodal dump `x[,y],value` at the quadrature nodes.
void save_nodal(const Field& f, const std::string& path);
void save_trace(const std::vector<TraceRow>& trace, const std::string& path);

struct SweepRow {
    double alpha = 0.0, beta = 0.0;
    double c_rad = 0.0, c_full = 0.0;
    bool breaking = false;
    double foliated = 0.0;
};
void save_sweep(const std::vector<SweepRow>& rows, const std::string& path);

nlohmann::json classification_json(const Classification& cl);
nlohmann::json result_json(const FrameworkResult& r);
nlohmann::json report_json(const VerificationReport& rep);
nlohmann::json config_json(const RunConfig& cfg);

}  // namespace hamsys
