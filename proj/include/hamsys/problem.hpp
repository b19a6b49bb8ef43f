#pragma once

#include <string>

#include "hamsys/domain.hpp"

// Exponent bookkeeping for the system
//   -Lap u = |x|^beta |v|^{q-1} v,   -Lap v = |x|^alpha |u|^{p-1} u
// with Dirichlet conditions, plus the hypothesis flags that gate each solver.

namespace hamsys {

struct ExponentPair {
    double p = 1.0;
    double q = 1.0;
    double alpha = 0.0;  // Henon weight on the u-power source
    double beta = 0.0;   // Henon weight on the v-power source
    int N = 2;

    void validate() const;  // throws on p,q <= 0 or negative weights
};

struct Classification {
    enum class Regime { Sublinear, Linear, Superlinear };
    enum class Hyperbola { Below, On, Above };

    bool H1 = false;   // both exponents subcritical (below the hyperbola)
    bool H2 = false;   // H1 + superlinear + p(N-4), q(N-4) < N+4
    bool H3 = false;   // superlinear and subcritical
    bool H4 = false;   // p, q > 1 and subcritical
    bool H4p = false;  // p, q > 1 and (p+1)(N-2), (q+1)(N-2) <= 2N
    Regime regime = Regime::Linear;
    Hyperbola hyperbola = Hyperbola::On;

    std::string regime_name() const;
    std::string hyperbola_name() const;
};

Classification classify(const ExponentPair& e);

// Pointwise power nonlinearity |s|^{p-1} s, its primitive |s|^{p+1}/(p+1), and
// the derivative p |s|^{p-1}.  The derivative is singular at 0 when p < 1; the
// flag is set and +inf returned in that case.
double power_odd(double s, double p);
double power_primitive(double s, double p);
double power_derivative(double s, double p, bool* singular = nullptr);

// Vectorized |s|^r and |s|^{p-1} s with fast paths for small (half-)integer
// exponents; the generic branch falls back to elementwise pow.
Eigen::VectorXd abs_pow_vec(const Eigen::VectorXd& v, double r);
Eigen::VectorXd power_odd_vec(const Eigen::VectorXd& v, double p);

// |LHS - RHS| of the variational identity
//   (N/(p+1) - a) int |u|^{p+1} + (N/(q+1) - (N-2-a)) int |v|^{q+1}
//     = int_boundary (x . nu) dnu(u) dnu(v) dsigma
// which holds for every a > 0 at solutions with alpha = beta = 0 on star-shaped
// domains (on the unit disk the support factor x . nu is identically 1).
// Boundary normal derivatives are evaluated spectrally.
double pohozaev_residual(const Field& u, const Field& v, const ExponentPair& e, double a);

}  // namespace hamsys
