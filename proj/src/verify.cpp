#include "hamsys/verify.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hamsys {

bool VerificationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string VerificationReport::render() const {
    std::string out;
    char line[160];
    for (const auto& c : checks) {
        std::snprintf(line, sizeof(line), "%-26s %+.6e  (tol %.1e)  %s\n",
                      c.name.c_str(), c.measured, c.tolerance,
                      c.pass ? "pass" : "FAIL");
        out += line;
    }
    std::snprintf(line, sizeof(line), "overall: %s\n", all_pass() ? "pass" : "FAIL");
    out += line;
    return out;
}

namespace {

void push(VerificationReport& rep, std::string name, double measured, double tol,
          bool pass) {
    rep.checks.push_back({std::move(name), measured, tol, pass});
}

double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// orient the pair so that int u >= 0 (solutions come in +/- pairs)
SolutionPair oriented(const SolutionPair& s) {
    if (integral(s.u) >= 0.0) return s;
    SolutionPair o = s;
    o.u = Field::from_coeff(s.u.basis(), -s.u.coeff());
    o.v = Field::from_coeff(s.v.basis(), -s.v.coeff());
    return o;
}

}  // namespace

VerificationReport verify_solution(const FrameworkResult& r, const ExponentPair& e,
                                   const Tolerances& tol) {
    if (!r.converged)
        throw std::invalid_argument("verify_solution: unconverged result (" +
                                    r.message + ")");
    e.validate();
    VerificationReport rep;
    SolutionPair s = oriented(r.solution);
    const Basis& b = *s.u.basis();
    Classification cl = classify(e);

    auto [ru, rv] = system_residuals(s.u, s.v, e);
    push(rep, "residual_u", ru, tol.identity, ru < tol.identity);
    push(rep, "residual_v", rv, tol.identity, rv < tol.identity);

    const double mass_u = lp_norm_pow(s.u, e.p + 1.0, e.alpha);
    const double mass_v = lp_norm_pow(s.v, e.q + 1.0, e.beta);
    const double energy = energy_direct(s.u, s.v, e);
    const double scale = std::max({std::abs(energy), mass_u, mass_v});

    if (cl.regime == Classification::Regime::Superlinear)
        push(rep, "level_positive", r.c, 0.0, r.c > 0.0);

    // at critical points both weighted Lebesgue masses equal the Dirichlet pairing
    push(rep, "lebesgue_balance", rel(mass_u, mass_v), tol.identity,
         rel(mass_u, mass_v) < tol.identity);
    const double pairing = dirichlet_pairing(s.u, s.v);
    push(rep, "mass_vs_pairing", rel(mass_u, pairing), tol.identity,
         rel(mass_u, pairing) < tol.identity);

    // I = (pq-1)/((p+1)(q+1)) * mass, valid away from pq = 1
    if (std::abs(e.p * e.q - 1.0) > 1e-12) {
        double kappa = (e.p * e.q - 1.0) / ((e.p + 1.0) * (e.q + 1.0));
        double m = std::abs(energy - kappa * mass_u) / std::max(scale, 1e-300);
        push(rep, "energy_identity", m, tol.identity, m < tol.identity);
        double mlevel = rel(r.c, energy);
        push(rep, "level_vs_energy", mlevel, tol.level, mlevel < tol.level);
    }

    if (e.alpha == 0.0 && e.beta == 0.0) {
        double a1 = e.N / (e.p + 1.0);
        double r1 = pohozaev_residual(s.u, s.v, e, a1) / std::max(scale, 1e-300);
        double r2 = pohozaev_residual(s.u, s.v, e, 1.0) / std::max(scale, 1e-300);
        push(rep, "boundary_identity_a1", r1, tol.pohozaev, r1 < tol.pohozaev);
        push(rep, "boundary_identity_a2", r2, tol.pohozaev, r2 < tol.pohozaev);
        // the identity is affine in a with zero slope at solutions
        push(rep, "boundary_identity_affine", std::abs(r1 - r2), tol.identity,
             std::abs(r1 - r2) < tol.identity);
    }

    // ground states are one-signed; after orientation both components >= 0
    double umin = s.u.nodal().minCoeff(), umax = s.u.nodal().maxCoeff();
    double vmin = s.v.nodal().minCoeff(), vmax = s.v.nodal().maxCoeff();
    double msign = std::max(-umin / std::max(umax, 1e-300),
                            -vmin / std::max(vmax, 1e-300));
    push(rep, "sign_structure", msign, tol.identity, msign < tol.identity);

    // unweighted disk ground states are radial (no breaking without weights)
    if (b.domain.kind == Domain::Kind::Disk && !b.radial_only && b.ntheta > 1 &&
        e.alpha == 0.0 && e.beta == 0.0) {
        double rd = std::max(radial_deficit(s.u), radial_deficit(s.v));
        push(rep, "radial_symmetry", rd, tol.radial, rd < tol.radial);
    }
    return rep;
}

VerificationReport cross_framework_report(const std::vector<FrameworkResult>& rs,
                                          const ExponentPair& e,
                                          const Tolerances& tol) {
    std::vector<const FrameworkResult*> ok;
    for (const auto& r : rs)
        if (r.converged) ok.push_back(&r);
    if (ok.size() < 2)
        throw std::invalid_argument(
            "cross_framework_report needs at least two converged results");
    for (size_t i = 1; i < ok.size(); i++)
        if (!ok[i]->solution.u.basis()->domain.same(ok[0]->solution.u.basis()->domain))
            throw std::invalid_argument(
                "cross_framework_report: results come from different domains");

    VerificationReport rep;
    for (size_t i = 0; i < ok.size(); i++)
        for (size_t j = i + 1; j < ok.size(); j++) {
            std::string tag = std::string(framework_name(ok[i]->framework)) + "/" +
                              framework_name(ok[j]->framework);
            double dc = rel(ok[i]->c, ok[j]->c);
            push(rep, "level " + tag, dc, tol.level, dc < tol.level);
            double mi = lp_norm_pow(ok[i]->solution.u, e.p + 1.0, e.alpha);
            double mj = lp_norm_pow(ok[j]->solution.u, e.p + 1.0, e.alpha);
            double dm = rel(mi, mj);
            push(rep, "mass " + tag, dm, tol.level, dm < tol.level);
        }
    return rep;
}

}  // namespace hamsys
