#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hamsys/verify.hpp"

using namespace hamsys;

namespace {

FrameworkResult interval_solution() {
    static FrameworkResult cached;
    if (!cached.converged) {
        ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
        auto b = Basis::build(Domain::interval(M_PI), 32);
        cached = solve_inversion(e, b, {});
    }
    return cached;
}

}  // namespace

TEST_CASE("a converged interval ground state passes every identity check") {
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    FrameworkResult r = interval_solution();
    REQUIRE(r.converged);
    VerificationReport rep = verify_solution(r, e);
    for (const CheckRow& row : rep.checks)
        INFO(row.name, " measured ", row.measured, " tol ", row.tolerance);
    CHECK(rep.all_pass());
}

TEST_CASE("verification refuses unconverged input") {
    FrameworkResult r;  // default: converged = false
    CHECK_THROWS_AS(verify_solution(r, {3.0, 3.0, 0.0, 0.0, 1}), std::invalid_argument);
}

TEST_CASE("report rendering is deterministic") {
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    FrameworkResult r = interval_solution();
    std::string a = verify_solution(r, e).render();
    std::string b = verify_solution(r, e).render();
    CHECK(a == b);
    CHECK(a.find("residual_u") != std::string::npos);
    CHECK(a.find("pass") != std::string::npos);
}

TEST_CASE("cross-framework report needs at least two matching results") {
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    FrameworkResult r = interval_solution();
    CHECK_THROWS(cross_framework_report({r}, e));

    auto b2 = Basis::build(Domain::interval(M_PI), 32);
    FrameworkResult d = solve_dual(e, b2, {});
    REQUIRE(d.converged);
    VerificationReport rep = cross_framework_report({r, d}, e);
    CHECK(rep.all_pass());
}

TEST_CASE("cross-framework report flags a corrupted level") {
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    FrameworkResult a = interval_solution();
    FrameworkResult b = a;
    b.framework = Framework::Dual;
    b.c *= 1.5;  // far outside the level tolerance
    VerificationReport rep = cross_framework_report({a, b}, e);
    CHECK_FALSE(rep.all_pass());
}

TEST_CASE("tolerance ladder is honored") {
    ExponentPair e{3.0, 3.0, 0.0, 0.0, 1};
    FrameworkResult r = interval_solution();
    Tolerances strict;
    strict.identity = 1e-30;  // nothing numerical passes at this level
    VerificationReport rep = verify_solution(r, e, strict);
    CHECK_FALSE(rep.all_pass());
}
