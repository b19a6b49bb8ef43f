#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hamsys/pipeline.hpp"

using namespace hamsys;

namespace {

// exit codes: 0 pass, 1 verification failure, 2 usage/config/hypothesis error
constexpr int kPass = 0;
constexpr int kVerifyFail = 1;
constexpr int kUsage = 2;

struct Globals {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int modes = 0;
    std::string frameworks;
    CLI::Option *o_config = nullptr, *o_out = nullptr, *o_seed = nullptr,
                *o_modes = nullptr, *o_frameworks = nullptr;
};

RunConfig load_config(const Globals& g) {
    RunConfig cfg;
    if (g.o_config->count()) cfg = parse_config_file(g.config);
    if (g.o_out->count()) cfg.outdir = g.out;
    if (g.o_seed->count()) cfg.solver.seed = g.seed;
    if (g.o_modes->count()) cfg.modes = g.modes;
    if (g.o_frameworks->count()) {
        cfg.frameworks.clear();
        std::stringstream ss(g.frameworks);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) cfg.frameworks.push_back(parse_framework(item));
        if (cfg.frameworks.empty())
            throw std::runtime_error("--frameworks: empty list");
    }
    return cfg;
}

void print_classification(const ExponentPair& e) {
    Classification cl = classify(e);
    std::printf("p = %s, q = %s, alpha = %s, beta = %s, N = %d\n",
                fmt_human(e.p).c_str(), fmt_human(e.q).c_str(),
                fmt_human(e.alpha).c_str(), fmt_human(e.beta).c_str(), e.N);
    std::printf("regime:    %s\n", cl.regime_name().c_str());
    std::printf("hyperbola: %s\n", cl.hyperbola_name().c_str());
    std::printf("H1 (subcritical)           : %s\n", cl.H1 ? "yes" : "no");
    std::printf("H2 (H1 + dimension bounds) : %s\n", cl.H2 ? "yes" : "no");
    std::printf("H3 (superlinear + H1)      : %s\n", cl.H3 ? "yes" : "no");
    std::printf("H4 (p,q > 1 + H1)          : %s\n", cl.H4 ? "yes" : "no");
    std::printf("H4' (p,q > 1 + trace range): %s\n", cl.H4p ? "yes" : "no");
}

int cmd_solve(const Globals& g) {
    RunConfig cfg = load_config(g);
    RunOutcome out = run_solve(cfg, true);
    for (const auto& r : out.results) {
        if (r.converged)
            std::printf("%-16s c = %-13s  iters = %-5d residuals = %s / %s\n",
                        framework_name(r.framework), fmt_human(r.c).c_str(),
                        r.iterations, fmt_human(r.solution.residual_u).c_str(),
                        fmt_human(r.solution.residual_v).c_str());
        else
            std::printf("%-16s refused/failed: %s\n", framework_name(r.framework),
                        r.message.c_str());
    }
    std::printf("verification: %s\n", out.verified ? "pass" : "FAIL");
    std::printf("manifest: %s/manifest.json\n", cfg.outdir.c_str());
    return out.verified ? kPass : kVerifyFail;
}

int cmd_verify(const Globals& g, const std::string& ustem, const std::string& vstem) {
    RunConfig cfg = load_config(g);
    FrameworkResult r;
    r.framework = Framework::Inversion;  // provenance unknown for loaded pairs
    r.solution.u = load_field(ustem);
    r.solution.v = load_field(vstem);
    ExponentPair e = cfg.problem;
    e.N = r.solution.u.basis()->domain.N;
    auto [ru, rv] = system_residuals(r.solution.u, r.solution.v, e);
    r.solution.residual_u = ru;
    r.solution.residual_v = rv;
    r.solution.energy = energy_direct(r.solution.u, r.solution.v, e);
    r.c = r.solution.energy;
    r.converged = true;
    VerificationReport rep = verify_solution(r, e, cfg.tols);
    std::fputs(rep.render().c_str(), stdout);
    if (g.o_out->count()) {
        std::filesystem::create_directories(cfg.outdir);
        std::ofstream o(cfg.outdir + "/verify_report.json");
        o << report_json(rep).dump(2) << "\n";
    }
    return rep.all_pass() ? kPass : kVerifyFail;
}

int cmd_sweep(const Globals& g) {
    RunConfig cfg = load_config(g);
    if (!g.o_config->count()) cfg.dom = Domain::disk(1.0);
    if (cfg.problem.p == 3.0 && cfg.problem.q == 3.0 && !g.o_config->count()) {
        cfg.problem.p = 2.0;  // default sweep problem
        cfg.problem.q = 2.0;
    }
    std::vector<SweepRow> rows = henon_sweep(cfg);
    std::printf("alpha      c_rad         c_full        breaking  foliated\n");
    for (const auto& r : rows)
        std::printf("%-9s  %-13s %-13s %-8s  %s\n", fmt_human(r.alpha).c_str(),
                    fmt_human(r.c_rad).c_str(), fmt_human(r.c_full).c_str(),
                    r.breaking ? "yes" : "no", fmt_human(r.foliated).c_str());
    std::filesystem::create_directories(cfg.outdir);
    save_sweep(rows, cfg.outdir + "/sweep.csv");
    std::printf("sweep written to %s/sweep.csv\n", cfg.outdir.c_str());
    return kPass;
}

int cmd_convergence(const Globals& g, std::vector<int> mlist) {
    RunConfig cfg = load_config(g);
    std::vector<ConvergenceRow> rows;
    std::string table = convergence_study(cfg, mlist, &rows);
    std::fputs(table.c_str(), stdout);
    std::filesystem::create_directories(cfg.outdir);
    std::ofstream o(cfg.outdir + "/convergence.csv");
    o << "framework,modes,c,gap\n";
    for (const auto& r : rows)
        o << framework_name(r.framework) << "," << r.modes << "," << fmt_full(r.c)
          << "," << fmt_full(r.gap) << "\n";
    return kPass;
}

int cmd_demo_nehari(const Globals& g, std::vector<double> lambdas) {
    RunConfig cfg = load_config(g);
    ExponentPair e = cfg.problem;
    e.N = cfg.dom.N;
    BasisPtr b = Basis::build(cfg.dom, std::max(cfg.modes, 8));
    Eigen::VectorXd c0 = Eigen::VectorXd::Zero(b->M);
    c0[0] = 1.0;
    Field u = Field::from_coeff(b, c0);
    auto rows = nehari_degeneracy_demo(e, u, lambdas);
    std::printf("lambda        t             product_norm  identity_residual\n");
    for (const auto& r : rows)
        std::printf("%-13s %-13s %-13s %s\n", fmt_human(r.lambda).c_str(),
                    fmt_human(r.t).c_str(), fmt_human(r.norm).c_str(),
                    fmt_human(r.identity_residual).c_str());
    std::printf("the product norm decays to 0: the plain constraint set adheres to "
                "the origin, so minimizing over it degenerates\n");
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral solver for Dirichlet Hamiltonian elliptic systems\n"
                 "  -Lap u = |x|^beta |v|^{q-1} v,  -Lap v = |x|^alpha |u|^{p-1} u"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    g.o_config = app.add_option("--config", g.config, "run configuration file (INI)");
    g.o_out = app.add_option("--out", g.out, "output directory");
    g.o_seed = app.add_option("--seed", g.seed, "seed for randomized restarts");
    g.o_modes = app.add_option("--modes", g.modes, "number of basis modes");
    g.o_frameworks = app.add_option("--frameworks", g.frameworks,
                                    "comma list: dual,inversion,ls_reduction,shooting");

    auto* c_classify = app.add_subcommand("classify", "hypothesis/regime classification");
    double cp = 3.0, cq = 3.0, ca = 0.0, cb = 0.0;
    int cn = 1;
    CLI::Option* o_n = c_classify->add_option("--N", cn, "space dimension");
    CLI::Option* o_p = c_classify->add_option("--p", cp, "exponent p");
    CLI::Option* o_q = c_classify->add_option("--q", cq, "exponent q");
    CLI::Option* o_a = c_classify->add_option("--alpha", ca, "weight exponent alpha");
    CLI::Option* o_b = c_classify->add_option("--beta", cb, "weight exponent beta");

    auto* c_solve = app.add_subcommand("solve", "run the configured frameworks and verify");

    auto* c_verify = app.add_subcommand("verify", "re-verify a saved solution pair");
    std::string ustem, vstem;
    c_verify->add_option("u_stem", ustem, "field stem (reads stem.csv + stem.json)")
        ->required();
    c_verify->add_option("v_stem", vstem, "field stem for the partner component")
        ->required();

    auto* c_sweep = app.add_subcommand("henon-sweep",
                                       "weight sweep with the symmetry-breaking probe");
    auto* c_conv = app.add_subcommand("convergence", "level vs mode count study");
    std::vector<int> mlist = {16, 32, 64};
    c_conv->add_option("--modes-list", mlist, "mode counts (>= 2 values)");
    auto* c_demo = app.add_subcommand("demo-nehari",
                                      "degeneracy of the plain constraint set");
    std::vector<double> lambdas = {1.0, 1e2, 1e4, 1e6};
    c_demo->add_option("--lambdas", lambdas, "scaling parameters to sample");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (c_classify->parsed()) {
            RunConfig cfg = load_config(g);
            ExponentPair e = cfg.problem;
            e.N = g.o_config->count() ? cfg.dom.N : 2;
            if (o_p->count()) e.p = cp;
            if (o_q->count()) e.q = cq;
            if (o_a->count()) e.alpha = ca;
            if (o_b->count()) e.beta = cb;
            if (o_n->count()) e.N = cn;
            e.validate();
            print_classification(e);
            return kPass;
        }
        if (c_solve->parsed()) return cmd_solve(g);
        if (c_verify->parsed()) return cmd_verify(g, ustem, vstem);
        if (c_sweep->parsed()) return cmd_sweep(g);
        if (c_conv->parsed()) return cmd_convergence(g, mlist);
        if (c_demo->parsed()) return cmd_demo_nehari(g, lambdas);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
