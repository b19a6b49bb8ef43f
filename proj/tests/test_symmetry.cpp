#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hamsys/symmetry.hpp"

using namespace hamsys;

namespace {

Field random_nonneg(const BasisPtr& b, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::VectorXd c(b->M);
    for (int n = 0; n < b->M; n++) c[n] = nd(rng) / (1.0 + 0.5 * n * n);
    Eigen::VectorXd nodal = (Field::from_coeff(b, c).nodal().array().abs()).matrix();
    return Field::from_nodal_exact(b, nodal);
}

// sorted nodal values weighted identically within a ring are preserved by any
// measure-preserving transform; compare integral moments instead of the raw sort
double moment(const Field& f, int k) {
    Eigen::VectorXd m = f.nodal();
    for (int j = 1; j < k; j++) m = m.cwiseProduct(f.nodal());
    return integral_nodal(*f.basis(), m);
}

}  // namespace

TEST_CASE("polarization is idempotent and measure preserving") {
    auto b = Basis::build(Domain::disk(1.0), 24);
    std::mt19937_64 rng(3);
    Field w = random_nonneg(b, rng);
    for (const HalfSpace& H : polarization_family(*b, 8, 3)) {
        Field wh = polarize(w, H);
        Field whh = polarize(wh, H);
        // through-origin halfspaces are pure grid permutations (exact); shifted
        // ones go through off-grid evaluation of a non-smooth field (approximate)
        bool exact = H.offset == 0.0;
        CHECK((whh.nodal() - wh.nodal()).cwiseAbs().maxCoeff() < (exact ? 1e-8 : 1e-2));
        for (int k = 1; k <= 3; k++)
            CHECK(moment(wh, k) ==
                  doctest::Approx(moment(w, k)).epsilon(exact ? 1e-8 : 1e-3));
    }
}

TEST_CASE("radial nonincreasing fields are fixed by every polarization") {
    // the first radial eigenmode: band-limited, so off-grid evaluation in the
    // shifted-halfspace path is spectrally exact
    auto b = Basis::build(Domain::disk(1.0), 24);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b->M);
    c[0] = 1.0;
    Field w = Field::from_coeff(b, c);
    for (const HalfSpace& H : polarization_family(*b, 16, 5)) {
        Field wh = polarize(w, H);
        CHECK((wh.nodal() - w.nodal()).cwiseAbs().maxCoeff() < 1e-8);
    }
    Field ws = schwarz_rearrange(w);
    CHECK((ws.nodal() - w.nodal()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("rearrangement output is radial, nonincreasing, equimeasurable") {
    auto b = Basis::build(Domain::disk(1.0), 24);
    std::mt19937_64 rng(5);
    Field w = random_nonneg(b, rng);
    Field ws = schwarz_rearrange(w);
    // radial: constant on each quadrature ring
    for (int ir = 0; ir < b->nr; ir++) {
        double v0 = ws.nodal()[ir * b->ntheta];
        for (int jt = 1; jt < b->ntheta; jt++)
            CHECK(ws.nodal()[ir * b->ntheta + jt] == doctest::Approx(v0).epsilon(1e-12));
    }
    // nonincreasing in radius (rings are ordered by the quadrature grid)
    std::vector<std::pair<double, double>> rv;
    for (int ir = 0; ir < b->nr; ir++)
        rv.push_back({b->radius[ir * b->ntheta], ws.nodal()[ir * b->ntheta]});
    std::sort(rv.begin(), rv.end());
    for (size_t i = 1; i < rv.size(); i++) CHECK(rv[i].second <= rv[i - 1].second + 1e-10);
    for (int k = 1; k <= 3; k++)
        CHECK(moment(ws, k) == doctest::Approx(moment(w, k)).epsilon(1e-2));
}

TEST_CASE("asymmetric fields are moved by some polarization") {
    auto b = Basis::build(Domain::disk(1.0), 24);
    // a bump off the origin: not a fixed point of the full family
    Eigen::VectorXd nodal(b->nq());
    for (int i = 0; i < b->nq(); i++) {
        double dx = b->nodes(i, 0) - 0.4, dy = b->nodes(i, 1);
        nodal[i] = std::exp(-8.0 * (dx * dx + dy * dy));
    }
    Field w = Field::from_nodal_exact(b, nodal);
    double worst = 0.0;
    for (const HalfSpace& H : polarization_family(*b, 16, 5))
        worst = std::max(worst, (polarize(w, H).nodal() - w.nodal()).cwiseAbs().maxCoeff());
    CHECK(worst > 1e-3);
    CHECK((schwarz_rearrange(w).nodal() - w.nodal()).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("comparison principle for the rearranged source term") {
    auto b = Basis::build(Domain::disk(1.0), 24);
    std::mt19937_64 rng(9);
    int ordered = 0, total = 100;
    for (int trial = 0; trial < total; trial++) {
        TalentiReport rep = talenti_check(random_nonneg(b, rng));
        if (rep.ordered) ordered++;
    }
    CHECK(ordered == total);
    // equality case: a radial nonincreasing source
    Eigen::VectorXd nodal(b->nq());
    for (int i = 0; i < b->nq(); i++) nodal[i] = 1.0 - b->radius[i] * b->radius[i];
    TalentiReport rep = talenti_check(Field::from_nodal_exact(b, nodal));
    CHECK(rep.ordered);
    CHECK(rep.equality_case);
}

TEST_CASE("symmetry deficits distinguish radial from angular profiles") {
    auto b = Basis::build(Domain::disk(1.0), 24);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b->M);
    c[0] = 1.0;
    Field radial = Field::from_coeff(b, c);
    CHECK(radial_deficit(radial) < 1e-10);
    CHECK(foliated_deficit(radial, 1.0, 0.0) < 1e-8);

    // add angular content: deficit becomes order one
    int ang = -1;
    for (int n = 0; n < b->M; n++)
        if (b->modes[n].m == 1) { ang = n; break; }
    REQUIRE(ang >= 0);
    Eigen::VectorXd c2 = c;
    c2[ang] = 0.8;
    Field skew = Field::from_coeff(b, c2);
    CHECK(radial_deficit(skew) > 0.1);
}
