#include "hamsys/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hamsys {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slug(Framework f) {
    switch (f) {
        case Framework::Dual: return "dual";
        case Framework::Inversion: return "inversion";
        case Framework::LSReduction: return "ls_reduction";
        case Framework::ShootingOracle: return "shooting";
    }
    return "unknown";
}

}  // namespace

FrameworkResult run_framework(Framework f, const RunConfig& cfg, BasisPtr basis) {
    ExponentPair e = cfg.problem;
    e.N = cfg.dom.N;
    switch (f) {
        case Framework::Dual: return solve_dual(e, basis, cfg.solver);
        case Framework::Inversion: return solve_inversion(e, basis, cfg.solver);
        case Framework::LSReduction: return solve_ls_reduction(e, basis, cfg.solver);
        case Framework::ShootingOracle: return solve_shooting(e, cfg.dom, cfg.solver);
    }
    throw std::invalid_argument("unknown framework");
}

RunOutcome run_solve(const RunConfig& cfg, bool write_artifacts) {
    ExponentPair e = cfg.problem;
    e.N = cfg.dom.N;
    e.validate();
    Classification cl = classify(e);
    if (cl.hyperbola != Classification::Hyperbola::Below)
        throw std::domain_error(
            "H1 fails: exponents are " + cl.hyperbola_name() +
            " -- every solver requires the subcritical range, refusing to solve");

    RunOutcome out;
    nlohmann::json& man = out.manifest;
    man["config"] = config_json(cfg);
    man["classification"] = classification_json(cl);

    BasisPtr basis;
    for (Framework f : cfg.frameworks)
        if (f != Framework::ShootingOracle) {
            basis = Basis::build(cfg.dom, cfg.modes);
            break;
        }

    nlohmann::json results = nlohmann::json::array();
    nlohmann::json timings;
    for (Framework f : cfg.frameworks) {
        auto t0 = std::chrono::steady_clock::now();
        FrameworkResult r;
        try {
            r = run_framework(f, cfg, basis);
        } catch (const std::domain_error& ex) {
            r.framework = f;
            r.converged = false;
            r.message = ex.what();
        }
        timings[slug(f)] = seconds_since(t0);
        results.push_back(result_json(r));
        out.results.push_back(std::move(r));
    }
    man["results"] = results;

    // verification: every converged result individually, then pairwise levels
    bool verified = false;
    nlohmann::json ver;
    int nconv = 0;
    for (const auto& r : out.results) {
        if (!r.converged) continue;
        nconv++;
        VerificationReport rep = verify_solution(r, e, cfg.tols);
        ver["per_framework"][slug(r.framework)] = report_json(rep);
        if (nconv == 1) verified = true;
        verified = verified && rep.all_pass();
    }
    if (nconv >= 2) {
        VerificationReport cross = cross_framework_report(out.results, e, cfg.tols);
        ver["cross"] = report_json(cross);
        verified = verified && cross.all_pass();
    } else {
        ver["cross"] = "skipped: fewer than two converged frameworks";
    }
    man["verification"] = ver;
    out.verified = verified && nconv >= 1;

    nlohmann::json artifacts = nlohmann::json::array();
    if (write_artifacts) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.outdir);
        for (const auto& r : out.results) {
            if (!r.converged) continue;
            std::string base = cfg.outdir + "/" + slug(r.framework);
            save_field(r.solution.u, base + "_u");
            save_field(r.solution.v, base + "_v");
            save_nodal(r.solution.u, base + "_u_nodal.csv");
            save_nodal(r.solution.v, base + "_v_nodal.csv");
            save_trace(r.trace, base + "_trace.csv");
            for (const char* suf : {"_u.csv", "_u.json", "_v.csv", "_v.json",
                                    "_u_nodal.csv", "_v_nodal.csv", "_trace.csv"})
                artifacts.push_back(slug(r.framework) + suf);
        }
    }
    man["artifacts"] = artifacts;
    man["timings"] = timings;

    if (write_artifacts) {
        std::ofstream mo(cfg.outdir + "/manifest.json");
        if (!mo) throw std::runtime_error("cannot write manifest in '" + cfg.outdir + "'");
        mo << man.dump(2) << "\n";
    }
    return out;
}

std::string convergence_study(const RunConfig& cfg, const std::vector<int>& mlist,
                              std::vector<ConvergenceRow>* rows) {
    if (mlist.size() < 2)
        throw std::invalid_argument("convergence study needs at least two mode counts");
    ExponentPair e = cfg.problem;
    e.N = cfg.dom.N;
    int mmax = *std::max_element(mlist.begin(), mlist.end());

    std::string table = "framework        modes  level          gap_to_finest\n";
    for (Framework f : cfg.frameworks) {
        if (f == Framework::ShootingOracle) continue;  // mesh-free oracle
        std::vector<std::pair<int, double>> cs;
        for (int m : mlist) {
            FrameworkResult r = run_framework(f, cfg, Basis::build(cfg.dom, m));
            if (!r.converged)
                throw std::runtime_error(std::string(framework_name(f)) + " at M=" +
                                         std::to_string(m) + " failed: " + r.message);
            cs.emplace_back(m, r.c);
        }
        double cref = 0.0;
        for (auto& [m, c] : cs)
            if (m == mmax) cref = c;
        for (auto& [m, c] : cs) {
            double gap = std::abs(c - cref);
            char line[120];
            std::snprintf(line, sizeof(line), "%-16s %5d  %-13s  %s\n",
                          framework_name(f), m, fmt_human(c).c_str(),
                          fmt_human(gap).c_str());
            table += line;
            if (rows) rows->push_back({f, m, c, gap});
        }
    }
    return table;
}

std::vector<SweepRow> henon_sweep(const RunConfig& cfg) {
    if (cfg.dom.kind != Domain::Kind::Disk)
        throw std::invalid_argument("the weight sweep runs on disk domains only");
    BasisPtr basis = Basis::build(cfg.dom, cfg.modes);
    std::vector<SweepRow> rows;
    for (double wgt : cfg.sweep_weights) {
        ExponentPair e = cfg.problem;
        e.N = cfg.dom.N;
        e.alpha = wgt;
        e.beta = wgt;
        BreakingReport rep = symmetry_breaking_probe(e, basis, cfg.solver);
        if (!rep.ok)
            throw std::runtime_error("probe failed at weight " + fmt_human(wgt) + ": " +
                                     rep.message);
        rows.push_back({rep.alpha, rep.beta, rep.c_rad, rep.c_full, rep.breaking,
                        rep.foliated});
    }
    return rows;
}

}  // namespace hamsys
