#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hamsys/solvers.hpp"

using namespace hamsys;

namespace {

Field first_mode(const BasisPtr& b) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b->M);
    c[0] = 1.0;
    return Field::from_coeff(b, c);
}

}  // namespace

TEST_CASE("dual ray maximizer closed form") {
    // A = B = 1, p = q = 3: exponents 4/3 and 2, maximizer ((4/3)/2)^{3/2}
    CHECK(dual_ray_maximizer(1.0, 1.0, 3.0, 3.0) ==
          doctest::Approx(std::pow(2.0 / 3.0, 1.5)).epsilon(1e-14));
    // stationarity: d/dt [A t^{g1} - B t^{g2}] = 0 at the returned point
    double A = 2.3, B = 0.7, p = 2.0, q = 4.0;
    double g1 = (p + 1.0) / p;
    double g2 = (p * (q + 1.0) + q * (p + 1.0)) / (p * (q + 1.0));
    double t0 = dual_ray_maximizer(A, B, p, q);
    double der = A * g1 * std::pow(t0, g1 - 1.0) - B * g2 * std::pow(t0, g2 - 1.0);
    CHECK(std::abs(der) < 1e-12 * A);
    CHECK_THROWS_AS(dual_ray_maximizer(-1.0, 1.0, 3.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(dual_ray_maximizer(1.0, 1.0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("constraint-set demo reproduces the first-mode root in closed form") {
    auto b = Basis::build(Domain::interval(M_PI), 8);
    Field u = first_mode(b);
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    auto rows = nehari_degeneracy_demo(e, u, {1.0});
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].ok);
    // 2 t^2 |grad u|^2 = 2 t^4 |u|_4^4 with |grad u|^2 = 1, |u|_4^4 = 3/(2 pi)
    CHECK(rows[0].t == doctest::Approx(std::sqrt(2.0 * M_PI / 3.0)).epsilon(1e-10));
    CHECK(rows[0].identity_residual < 1e-10);
}

TEST_CASE("constraint-set demo: norm decays as the slope parameter grows") {
    auto b = Basis::build(Domain::interval(M_PI), 8);
    Field u = first_mode(b);
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    std::vector<double> lambdas = {1.0, 1e1, 1e2, 1e3};
    auto rows = nehari_degeneracy_demo(e, u, lambdas);
    REQUIRE(rows.size() == 4);
    for (size_t i = 0; i < rows.size(); i++) {
        REQUIRE(rows[i].ok);
        if (i > 0) CHECK(rows[i].norm < rows[i - 1].norm);
    }
    CHECK(rows.back().norm < 0.1 * rows.front().norm);
    CHECK_THROWS_AS(nehari_degeneracy_demo({0.5, 1.5, 0.0, 0.0, 1}, u, lambdas),
                    std::domain_error);
}

TEST_CASE("hypothesis gates refuse out-of-scope exponent data") {
    auto b = Basis::build(Domain::interval(M_PI), 8);
    SolverConfig cfg;
    ExponentPair sublinear{0.5, 1.5, 0.0, 0.0, 1};
    ExponentPair critical{6.0, 6.0, 0.0, 0.0, 3};
    CHECK_THROWS_AS(solve_dual(sublinear, b, cfg), std::domain_error);
    CHECK_THROWS_AS(solve_ls_reduction(sublinear, b, cfg), std::domain_error);
    CHECK_THROWS_AS(solve_inversion(critical, b, cfg), std::domain_error);
    CHECK_THROWS_WITH_AS(solve_dual(sublinear, b, cfg),
                         doctest::Contains("H3"), std::domain_error);
}

TEST_CASE("inversion handles the sublinear regime on the interval") {
    ExponentPair e{0.5, 1.5, 0.0, 0.0, 1};
    auto b = Basis::build(Domain::interval(M_PI), 32);
    SolverConfig cfg;
    FrameworkResult r = solve_inversion(e, b, cfg);
    REQUIRE(r.converged);
    CHECK(r.solution.residual_u < 1e-7);
    CHECK(r.solution.residual_v < 1e-7);
}

TEST_CASE("shooting level agrees with the spectral inversion level") {
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    Domain dom = Domain::interval(M_PI);
    SolverConfig cfg;
    FrameworkResult spec = solve_inversion(e, Basis::build(dom, 48), cfg);
    FrameworkResult ode = solve_shooting(e, dom, cfg);
    REQUIRE(spec.converged);
    REQUIRE(ode.converged);
    CHECK(std::abs(spec.c - ode.c) < 1e-3 * std::abs(spec.c));
}

TEST_CASE("diagonal problems reduce to twice the scalar shooting level") {
    SolverConfig cfg;
    for (auto dom : {Domain::interval(M_PI), Domain::disk(1.0)}) {
        ExponentPair e{3.0, 3.0, 0.0, 0.0, dom.N};
        FrameworkResult sys = solve_shooting(e, dom, cfg);
        double scalar = shooting_scalar_level(3.0, dom, cfg);
        REQUIRE(sys.converged);
        CHECK(sys.c == doctest::Approx(2.0 * scalar).epsilon(1e-6));
    }
}

TEST_CASE("newton polish drives a perturbed solution back to the residual target") {
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    auto b = Basis::build(Domain::interval(M_PI), 24);
    SolverConfig cfg;
    FrameworkResult r = solve_inversion(e, b, cfg);
    REQUIRE(r.converged);
    Eigen::VectorXd bump = Eigen::VectorXd::Zero(b->M);
    bump[2] = 1e-3;
    Field u = Field::from_coeff(b, r.solution.u.coeff() + bump);
    Field v = r.solution.v;
    auto [ru0, rv0] = system_residuals(u, v, e);
    CHECK(ru0 + rv0 > 1e-4);
    CHECK(newton_polish(u, v, e, 1e-11));
    auto [ru1, rv1] = system_residuals(u, v, e);
    CHECK(ru1 + rv1 < 1e-11);
}

TEST_CASE("three variational routes agree on the interval model problem") {
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    auto b = Basis::build(Domain::interval(M_PI), 32);
    SolverConfig cfg;
    FrameworkResult d = solve_dual(e, b, cfg);
    FrameworkResult i = solve_inversion(e, b, cfg);
    FrameworkResult l = solve_ls_reduction(e, b, cfg);
    REQUIRE(d.converged);
    REQUIRE(i.converged);
    REQUIRE(l.converged);
    CHECK(std::abs(d.c - i.c) < 1e-3 * std::abs(i.c));
    CHECK(std::abs(l.c - i.c) < 1e-3 * std::abs(i.c));
}
