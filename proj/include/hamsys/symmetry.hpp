#pragma once

#include <vector>

#include "hamsys/solvers.hpp"

// Rearrangement machinery on the disk: Schwarz symmetrization, halfspace
// polarization, the Talenti comparison test, foliated-Schwarz deficits and the
// Henon symmetry-breaking probe.  All transforms act on the nodal
// representation of a Field; certification by polarization families is at
// sample resolution.

namespace hamsys {

// Closed halfspace H = { x : x . n >= offset } with unit normal n.
struct HalfSpace {
    double nx = 1.0;
    double ny = 0.0;
    double offset = 0.0;
};

// Radially nonincreasing rearrangement, equimeasurable with the (nonnegative)
// input.  Disk domains only.
Field schwarz_rearrange(const Field& w);

// Polarization w_H: on H take max(w, w o sigma_H), outside take the min;
// values reflected outside the domain count as 0 (Dirichlet extension).
Field polarize(const Field& w, const HalfSpace& H);

// Sampled family of halfspaces covering the through-origin axes (offset 0)
// and shifted copies with 0 interior; `normals` axes times `offsets` shifts.
std::vector<HalfSpace> polarization_family(const Basis& basis, int normals = 64,
                                           int offsets = 9);

struct TalentiReport {
    bool ordered = false;       // u* <= w held nodally (with slack)
    double max_violation = 0.0; // worst positive part of u* - w
    double max_gap = 0.0;       // worst |u* - w|
    bool equality_case = false; // u* = w to tolerance (happens iff f radial decreasing)
};
// Solve -Lap u = f and -Lap w = f* and compare u* against w.
TalentiReport talenti_check(const Field& f, double slack = 1e-8);

// max over sampled H with boundary through the origin and e interior of
// ||w_H - w||_2 / ||w||_2; zero certifies foliated Schwarz symmetry w.r.t. e
// at sample resolution.
double foliated_deficit(const Field& w, double ex, double ey);

// ||w - (angular average of w)||_2 / ||w||_2 on the disk.
double radial_deficit(const Field& w);

struct BreakingReport {
    double alpha = 0.0, beta = 0.0;
    double c_rad = 0.0;      // ground level within the radial subspace
    double c_full = 0.0;     // unconstrained ground level
    bool breaking = false;   // c_full < c_rad - margin
    double margin = 0.0;
    double foliated = 0.0;   // foliated deficit of the full minimizer, best axis
    double radial = 0.0;     // radial deficit of the full minimizer
    double axis_x = 1.0, axis_y = 0.0;
    bool ok = false;
    std::string message;
};
// Compare the radial-subspace level against the full minimizer on the disk;
// margin is 10x the cross-framework level tolerance.
BreakingReport symmetry_breaking_probe(const ExponentPair& e, BasisPtr basis,
                                       const SolverConfig& cfg);

}  // namespace hamsys
