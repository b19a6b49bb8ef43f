#pragma once

#include "hamsys/io.hpp"

// Orchestration shared by the CLI and the python bindings: run the selected
// frameworks for one configuration, verify, and assemble the manifest.

namespace hamsys {

struct RunOutcome {
    nlohmann::json manifest;
    std::vector<FrameworkResult> results;
    bool verified = false;  // every converged result verified + cross report passed
};

// Dispatch a single framework (spectral routes build a basis; the shooting
// oracle works on the domain directly).  Hypothesis violations propagate as
// std::domain_error naming the failing flag.
FrameworkResult run_framework(Framework f, const RunConfig& cfg, BasisPtr basis);

// Run every configured framework, verify, and (optionally) write the manifest
// and all artifacts (field/trace/nodal CSVs) into cfg.outdir.
RunOutcome run_solve(const RunConfig& cfg, bool write_artifacts);

// Level vs mode count per framework; needs >= 2 mode counts.  Returns a
// human-readable table; machine rows are appended to `rows` when given.
struct ConvergenceRow {
    Framework framework;
    int modes = 0;
    double c = 0.0;
    double gap = 0.0;  // |c(M) - c(M_max)|
};
std::string convergence_study(const RunConfig& cfg, const std::vector<int>& mlist,
                              std::vector<ConvergenceRow>* rows = nullptr);

// Weighted-problem probe sweep on the disk at the configured exponents.
std::vector<SweepRow> henon_sweep(const RunConfig& cfg);

}  // namespace hamsys
