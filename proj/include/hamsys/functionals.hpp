#pragma once

#include <utility>

#include "hamsys/domain.hpp"
#include "hamsys/problem.hpp"

// Energy functionals and gradients in coefficient space.  All take immutable
// Fields; nonlinear terms are evaluated nodally and projected back
// (pseudospectral treatment, dealiased by the quadrature margin of the basis).

namespace hamsys {

enum class Framework { Dual, Inversion, LSReduction, ShootingOracle };
const char* framework_name(Framework f);

struct SolutionPair {
    Field u;
    Field v;
    double energy = 0.0;
    double residual_u = 0.0;  // Galerkin residual of -Lap u = |x|^beta |v|^{q-1} v
    double residual_v = 0.0;  // Galerkin residual of -Lap v = |x|^alpha |u|^{p-1} u
    Framework provenance = Framework::Inversion;
};

// Dual variables f = |x|^alpha |u|^{p-1}u, g = |x|^beta |v|^{q-1}v.
struct DualPair {
    Field f;
    Field g;
};

// I(u,v) = int <grad u, grad v> - int H, H the weighted power Hamiltonian.
double energy_direct(const Field& u, const Field& v, const ExponentPair& e);

// Same energy with the quadratic part evaluated as int A^s u . A^{2-s} v;
// constant in s on basis-resolved fields.
double energy_fractional(const Field& u, const Field& v, const ExponentPair& e, double s);

// Dual functional: weighted Lebesgue terms minus (1/2)<T(f,g),(f,g)> with
// <T(f,g),(f,g)> = 2 int f K g.
double energy_dual(const DualPair& d, const ExponentPair& e);
// L2 representation of the gradient of the dual functional.
DualPair gradient_dual(const DualPair& d, const ExponentPair& e);

// Fourth-order reduction functional
//   J(u) = q/(q+1) int |Lap u|^{(q+1)/q} |x|^{-beta/q} - 1/(p+1) int |u|^{p+1} |x|^alpha.
double energy_fourth_order(const Field& u, const ExponentPair& e);
// Coefficient-space gradient of J.
Eigen::VectorXd gradient_fourth_order(const Field& u, const ExponentPair& e);

// Inner maximizer Psi of psi -> I(lambda u + psi, u - psi/lambda): damped
// Newton on a strictly concave problem.  Requires p, q > 1.  `warm` seeds the
// iteration; iteration/convergence info returned through the out-params.
Field solve_inner_max(const Field& u, const ExponentPair& e, double lambda,
                      const Field* warm = nullptr, int* iters = nullptr);

// Reduced functional J_lambda(u) = I(lambda u + Psi, u - Psi/lambda) and its
// gradient via the envelope identity (no differentiation through Psi).
double energy_reduced(const Field& u, const ExponentPair& e, double lambda,
                      Field* psi_out = nullptr, const Field* warm = nullptr);
Field gradient_reduced(const Field& u, const ExponentPair& e, double lambda,
                       Field* psi_out = nullptr, const Field* warm = nullptr);

// Galerkin residual norms of the two equations at (u, v).
std::pair<double, double> system_residuals(const Field& u, const Field& v,
                                           const ExponentPair& e);

}  // namespace hamsys
