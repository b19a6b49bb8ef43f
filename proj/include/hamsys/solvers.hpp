#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hamsys/functionals.hpp"

// Ground-state solvers.  Three independent variational routes (dual Nehari
// descent, fourth-order inverse iteration, reduced-functional Nehari descent)
// plus an ODE shooting oracle; each returns the least-energy level c so the
// verification layer can assert cross-framework agreement.

namespace hamsys {

struct TraceRow {
    int iter = 0;
    double energy = 0.0;
    double residual = 0.0;
    double step = 0.0;
};

struct SolverConfig {
    double tol = 1e-9;        // Galerkin residual target
    int max_iter = 10000;     // inverse-iteration cap
    int max_outer = 500;      // descent outer-loop cap
    std::uint64_t seed = 0;   // drives any randomized restart
    double lambda = 1.0;      // reduced-functional parameter
    Field start;              // optional initial iterate (defaults to phi_1)
};

struct FrameworkResult {
    Framework framework = Framework::Inversion;
    bool converged = false;
    double c = 0.0;           // ground-state level
    SolutionPair solution;
    int iterations = 0;
    std::vector<TraceRow> trace;
    std::string message;
    double alpha_pq = 0.0;    // best embedding constant (inversion route only)
};

// Dual-variable Nehari minimization; requires H3 (superlinear subcritical).
FrameworkResult solve_dual(const ExponentPair& e, BasisPtr basis, const SolverConfig& cfg);

// System inverse power iteration on the fourth-order quotient; requires H1 and
// pq != 1.  The only route covering the sublinear regime.
FrameworkResult solve_inversion(const ExponentPair& e, BasisPtr basis, const SolverConfig& cfg);

// Nehari descent on the reduced functional J_lambda; requires H4 (p, q > 1).
FrameworkResult solve_ls_reduction(const ExponentPair& e, BasisPtr basis, const SolverConfig& cfg);

// Two-parameter shooting for the radial problem (interval about its midpoint,
// or the disk in the radial variable).  Independent of the spectral machinery.
FrameworkResult solve_shooting(const ExponentPair& e, const Domain& dom, const SolverConfig& cfg);

// Scalar ground-state level of -Lap w = |w|^{p-1} w on the same domain via
// diagonal shooting; the system level at p = q equals twice this value.
double shooting_scalar_level(double p, const Domain& dom, const SolverConfig& cfg);

// Degeneracy of the standard (unmodified) Nehari set: for fixed u and each
// lambda solve for t with (t u, t lambda u) on the set and report the product
// norm, which decays to 0 as lambda grows.
struct NehariRow {
    double lambda = 0.0;
    double t = 0.0;
    double norm = 0.0;               // H1_0 x H1_0 norm of (t u, t lambda u)
    double identity_residual = 0.0;  // defining equation residual at the root
    bool ok = false;
};
std::vector<NehariRow> nehari_degeneracy_demo(const ExponentPair& e, const Field& u,
                                              const std::vector<double>& lambdas);

// Damped Newton on the coupled Galerkin system; sharpens an already-close
// iterate to the configured residual.  Needs p, q >= 1 (bounded Jacobian).
bool newton_polish(Field& u, Field& v, const ExponentPair& e, double tol, int maxit = 40);

// Closed-form fiber-map maximizer of the dual ray (exposed for testing):
// maximizes A t^{(p+1)/p} - B t^{gamma2} with gamma2 = (p(q+1)+q(p+1))/(p(q+1)).
double dual_ray_maximizer(double A, double B, double p, double q);

}  // namespace hamsys
