#pragma once

#include <string>
#include <vector>

#include "hamsys/solvers.hpp"
#include "hamsys/symmetry.hpp"

// Structural checks applied to computed solutions: conservation-style
// identities that a true ground state must satisfy, and cross-framework
// agreement of the critical levels.  Every check yields a named row so reports
// are byte-for-byte reproducible.

namespace hamsys {

// Central tolerance ladder used by all checks.
struct Tolerances {
    double level = 1e-3;      // relative agreement of critical levels
    double identity = 1e-6;   // relative size of variational identities
    double pointwise = 1e-8;  // nodal comparisons
    double pohozaev = 1e-4;   // boundary-identity residual, relative
    double radial = 1e-4;     // symmetry deficit of unweighted disk solutions
};

struct CheckRow {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::vector<CheckRow> checks;
    bool all_pass() const;
    std::string render() const;  // deterministic fixed-format table
};

// Identity checks on a single converged result: equation residuals, positive
// level (superlinear), weighted Lebesgue balance, the energy-level identity,
// the boundary identity at two pivot values (unweighted case), sign structure
// after orientation, and radial symmetry on the unweighted disk.
VerificationReport verify_solution(const FrameworkResult& r, const ExponentPair& e,
                                   const Tolerances& tol = {});

// Pairwise agreement of levels and of the shared Lebesgue mass across >= 2
// frameworks; throws if fewer results or mismatched problems are given.
VerificationReport cross_framework_report(const std::vector<FrameworkResult>& rs,
                                          const ExponentPair& e,
                                          const Tolerances& tol = {});

}  // namespace hamsys
