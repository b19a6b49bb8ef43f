#include "hamsys/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hamsys {

namespace {

void require_disk(const Field& w, const char* who) {
    if (!w.valid() || w.basis()->domain.kind != Domain::Kind::Disk)
        throw std::domain_error(std::string(who) + " is defined on disk domains only");
}

void require_nonneg(const Field& w, const char* who) {
    double mx = w.nodal().cwiseAbs().maxCoeff();
    if (w.nodal().minCoeff() < -1e-12 * std::max(1.0, mx))
        throw std::invalid_argument(std::string(who) + " requires a nonnegative field");
}

// weighted empirical quantile of the nodal values: piecewise linear through
// the measure midpoints of the sorted samples
struct Quantile {
    std::vector<double> mid;  // ascending cumulative-measure midpoints
    std::vector<double> val;  // matching values, nonincreasing

    Quantile(const Eigen::VectorXd& values, const Eigen::VectorXd& weights) {
        const int n = static_cast<int>(values.size());
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return values[a] > values[b]; });
        mid.resize(n);
        val.resize(n);
        double cum = 0.0;
        for (int i = 0; i < n; i++) {
            int k = order[i];
            mid[i] = cum + 0.5 * weights[k];
            val[i] = values[k];
            cum += weights[k];
        }
    }

    double operator()(double mu) const {
        if (mu <= mid.front()) return val.front();
        if (mu >= mid.back()) {
            // extrapolate the tail instead of clamping at the smallest sample:
            // the samples never reach the essential minimum (nodes stay off the
            // boundary), and a flat tail biases the rearrangement upward right
            // where the comparison-principle gap closes
            size_t j = mid.size() - 1, i = j;
            while (i > 0 && mid[j] - mid[i - 1] < 1e-12 * mid[j]) i--;
            if (i == 0) return val[j];
            double slope = (val[j] - val[i - 1]) / (mid[j] - mid[i - 1]);
            return std::max(0.0, val[j] + slope * (mu - mid[j]));
        }
        auto it = std::upper_bound(mid.begin(), mid.end(), mu);
        size_t i = it - mid.begin();
        double t = (mu - mid[i - 1]) / (mid[i] - mid[i - 1]);
        return (1.0 - t) * val[i - 1] + t * val[i];
    }
};

// true iff the nodal data is constant on rings and nonincreasing outward, in
// which case rearrangement is the identity on the nodal representation
bool radial_monotone(const Field& g) {
    const Basis& b = *g.basis();
    double scale = std::max(1e-300, g.nodal().cwiseAbs().maxCoeff());
    double prev = std::numeric_limits<double>::infinity();
    for (int ir = 0; ir < b.nr; ir++) {
        double v0 = g.nodal()[ir * b.ntheta];
        for (int j = 1; j < b.ntheta; j++)
            if (std::abs(g.nodal()[ir * b.ntheta + j] - v0) > 1e-12 * scale) return false;
        if (v0 > prev + 1e-12 * scale) return false;
        prev = v0;
    }
    return true;
}

// quantile of the band-limited representative of a disk field, sampled on a
// refined polar grid (the synthesis is exact off the quadrature nodes, so the
// refinement genuinely reduces the estimator error)
Quantile fine_quantile(const Field& g, int nrf, int ntf, bool clip) {
    const double R = g.basis()->domain.R;
    Eigen::VectorXd gr, gw;
    gauss_legendre(nrf, 0.0, R, gr, gw);
    Eigen::VectorXd vals(nrf * ntf), wts(nrf * ntf);
    for (int ir = 0; ir < nrf; ir++) {
        double r = gr[ir], cw = gw[ir] * r * 2.0 * M_PI / ntf;
        for (int jt = 0; jt < ntf; jt++) {
            double th = 2.0 * M_PI * jt / ntf;
            double v = g.eval(r * std::cos(th), r * std::sin(th));
            vals[ir * ntf + jt] = clip ? std::max(0.0, v) : v;
            wts[ir * ntf + jt] = cw;
        }
    }
    return Quantile(vals, wts);
}

// Exact quantile of the piecewise-linear interpolant of g on a polar
// triangulation.  The decreasing rearrangement is non-expansive in the sup
// norm, so the quantile error is bounded by the O(h^2) interpolation error --
// unlike a sampled empirical quantile, whose error is amplified wherever the
// value density is low.  The superlevel area of a linear function on a
// triangle is piecewise quadratic in the level and summed in closed form.
struct TriQuantile {
    std::vector<double> a, b, c, A;  // sorted vertex values and metric area
    double vmax = 0.0, vmin = 0.0;

    TriQuantile(const Field& g, int nrf, int ntf, bool clip) {
        const double R = g.basis()->domain.R;
        std::vector<std::vector<double>> V(nrf + 1, std::vector<double>(ntf));
        std::vector<double> cx(ntf), sx(ntf);
        for (int j = 0; j < ntf; j++) {
            cx[j] = std::cos(2.0 * M_PI * j / ntf);
            sx[j] = std::sin(2.0 * M_PI * j / ntf);
        }
        for (int i = 0; i <= nrf; i++) {
            double r = R * i / nrf;
            for (int j = 0; j < ntf; j++) {
                double v = g.eval(r * cx[j], r * sx[j]);
                if (clip && v < 0.0) v = 0.0;
                V[i][j] = v;
                vmax = std::max(vmax, v);
                vmin = std::min(vmin, v);
            }
        }
        a.reserve(2 * nrf * ntf);
        b.reserve(2 * nrf * ntf);
        c.reserve(2 * nrf * ntf);
        A.reserve(2 * nrf * ntf);
        auto add = [&](double v0, double v1, double v2, double area) {
            double s0 = std::min({v0, v1, v2}), s2 = std::max({v0, v1, v2});
            a.push_back(s0);
            b.push_back(v0 + v1 + v2 - s0 - s2);
            c.push_back(s2);
            A.push_back(area);
        };
        for (int i = 0; i < nrf; i++) {
            double r0 = R * i / nrf, r1 = R * (i + 1) / nrf;
            for (int j = 0; j < ntf; j++) {
                int j1 = (j + 1) % ntf;
                double x00 = r0 * cx[j], y00 = r0 * sx[j];
                double x01 = r0 * cx[j1], y01 = r0 * sx[j1];
                double x10 = r1 * cx[j], y10 = r1 * sx[j];
                double x11 = r1 * cx[j1], y11 = r1 * sx[j1];
                if (i == 0) {  // innermost band: fan triangles from the center
                    double ar = 0.5 * std::abs((x10 - x00) * (y11 - y00) -
                                               (x11 - x00) * (y10 - y00));
                    add(V[i][j], V[i + 1][j], V[i + 1][j1], ar);
                } else {
                    double ar1 = 0.5 * std::abs((x10 - x00) * (y01 - y00) -
                                                (x01 - x00) * (y10 - y00));
                    double ar2 = 0.5 * std::abs((x10 - x11) * (y01 - y11) -
                                                (x01 - x11) * (y10 - y11));
                    add(V[i][j], V[i + 1][j], V[i][j1], ar1);
                    add(V[i + 1][j1], V[i + 1][j], V[i][j1], ar2);
                }
            }
        }
    }

    double measure_above(double t) const {
        double mu = 0.0;
        for (size_t k = 0; k < A.size(); k++) {
            if (t >= c[k]) continue;
            if (t < a[k]) {
                mu += A[k];
                continue;
            }
            double ca = c[k] - a[k];
            if (ca <= 0.0) {
                mu += A[k];
                continue;
            }
            if (t >= b[k]) {
                double cb = c[k] - b[k];
                mu += cb > 0.0 ? A[k] * (c[k] - t) * (c[k] - t) / (ca * cb) : 0.0;
            } else {
                double ba = b[k] - a[k];
                double frac = ba > 0.0 ? (t - a[k]) * (t - a[k]) / (ca * ba) : 0.0;
                mu += A[k] * (1.0 - frac);
            }
        }
        return mu;
    }

    // level whose superlevel set has the given measure (bisection; the
    // measure-above function is continuous and nonincreasing)
    double operator()(double target) const {
        double lo = vmin, hi = vmax;
        for (int it = 0; it < 60 && hi - lo > 1e-16 * (std::abs(vmax) + 1.0); it++) {
            double mid = 0.5 * (lo + hi);
            (measure_above(mid) > target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
};

// w solving -Lap w = q(pi s^2) (radial, clipped at 0) with w(R) = 0, through
// the two cumulative radial integrals on a fine uniform mesh
struct RadialPoisson {
    std::vector<double> wv;
    double h = 0.0, R = 0.0;

    RadialPoisson(const Quantile& q, double radius) : R(radius) {
        const int m = 16384;
        h = R / m;
        std::vector<double> F(m + 1, 0.0);
        double prev = 0.0;  // f(s) s at the previous mesh point
        for (int k = 1; k <= m; k++) {
            double s = k * h;
            double cur = std::max(0.0, q(M_PI * s * s)) * s;
            F[k] = F[k - 1] + 0.5 * (prev + cur) * h;
            prev = cur;
        }
        wv.assign(m + 1, 0.0);
        for (int k = m - 1; k >= 0; k--) {
            double a = k > 0 ? F[k] / (k * h) : 0.0;
            double b = F[k + 1] / ((k + 1) * h);
            wv[k] = wv[k + 1] + 0.5 * (a + b) * h;
        }
    }

    double operator()(double r) const {
        double x = std::clamp(r / h, 0.0, double(wv.size() - 1));
        size_t k = std::min(size_t(x), wv.size() - 2);
        double t = x - k;
        return (1.0 - t) * wv[k] + t * wv[k + 1];
    }
};

// quantile of u near the boundary via the level-curve geometry: for small
// levels the superlevel boundary is a graph over the angle, so the sublevel
// area integral converges spectrally in the angular rule.  Returns a negative
// value when the graph assumption fails along some ray.
double tail_level(const Field& u, double target_area, double scale) {
    const double R = u.basis()->domain.R;
    const int nth = 512;
    auto area = [&](double t) -> double {
        double acc = 0.0;
        for (int j = 0; j < nth; j++) {
            double th = 2.0 * M_PI * j / nth, ct = std::cos(th), st = std::sin(th);
            double lo = 0.8 * R, hi = R;
            if (u.eval(lo * ct, lo * st) <= t) return -1.0;  // not a boundary layer
            for (int k = 0; k < 48; k++) {
                double mid = 0.5 * (lo + hi);
                (u.eval(mid * ct, mid * st) > t ? lo : hi) = mid;
            }
            double rt = 0.5 * (lo + hi);
            acc += 0.5 * (R * R - rt * rt) * (2.0 * M_PI / nth);
        }
        return acc;
    };
    double t0 = std::max(1e-10 * scale, 0.3 * scale * target_area / (M_PI * R * R));
    double t1 = 2.0 * t0;
    double a0 = area(t0), a1 = area(t1);
    if (a0 < 0.0 || a1 < 0.0) return -1.0;
    for (int k = 0; k < 80 && std::abs(t1 - t0) > 1e-14 * scale; k++) {
        if (a1 == a0) break;
        double t2 = t1 - (a1 - target_area) * (t1 - t0) / (a1 - a0);
        t2 = std::clamp(t2, 0.25 * t1, 4.0 * t1);
        t0 = t1;
        a0 = a1;
        t1 = t2;
        a1 = area(t1);
        if (a1 < 0.0) return -1.0;
    }
    return t1;
}

}  // namespace

Field schwarz_rearrange(const Field& w) {
    require_disk(w, "schwarz_rearrange");
    require_nonneg(w, "schwarz_rearrange");
    const Basis& b = *w.basis();
    Quantile q(w.nodal(), b.w);

    // rings share one output value: the quantile at the exact measure of the
    // ball through the ring radius (parameterizing by quadrature-cumulative
    // measure instead would shift every ring by a fraction of a cell)
    Eigen::VectorXd out(b.nq());
    for (int ir = 0; ir < b.nr; ir++) {
        double r = b.radius[ir * b.ntheta];
        double v = q(M_PI * r * r);
        for (int j = 0; j < b.ntheta; j++) out[ir * b.ntheta + j] = v;
    }
    return Field::from_nodal_exact(w.basis(), std::move(out));
}

Field polarize(const Field& w, const HalfSpace& H) {
    const Basis& b = *w.basis();
    const double nn = std::hypot(H.nx, H.ny);
    if (!(nn > 0)) throw std::invalid_argument("polarize: zero normal");
    const double nx = H.nx / nn, ny = H.ny / nn, d = H.offset;
    Eigen::VectorXd out(b.nq());

    // grid-exact path: disk, boundary line through the origin along a grid axis
    bool fast = false;
    int kshift = 0;
    if (b.domain.kind == Domain::Kind::Disk && std::abs(d) < 1e-14) {
        double phi = std::atan2(ny, nx) + 0.5 * M_PI;  // line angle
        double kf = phi * b.ntheta / M_PI;
        double kround = std::round(kf);
        if (std::abs(kf - kround) < 1e-9) {
            fast = true;
            kshift = static_cast<int>(kround) % (2 * b.ntheta);
        }
    }
    if (fast) {
        for (int ir = 0; ir < b.nr; ir++)
            for (int j = 0; j < b.ntheta; j++) {
                int idx = ir * b.ntheta + j;
                int jr = ((kshift - j) % b.ntheta + b.ntheta) % b.ntheta;
                double a = w.nodal()[idx], c = w.nodal()[ir * b.ntheta + jr];
                double side = b.nodes(idx, 0) * nx + b.nodes(idx, 1) * ny;
                out[idx] = side >= 0.0 ? std::max(a, c) : std::min(a, c);
            }
    } else {
        for (int i = 0; i < b.nq(); i++) {
            double x = b.nodes(i, 0), y = b.domain.N > 1 ? b.nodes(i, 1) : 0.0;
            double proj = x * nx + y * ny - d;
            double rx = x - 2.0 * proj * nx, ry = y - 2.0 * proj * ny;
            double refl = w.eval(rx, ry);  // zero outside the domain
            out[i] = proj >= 0.0 ? std::max(w.nodal()[i], refl)
                                 : std::min(w.nodal()[i], refl);
        }
    }
    return Field::from_nodal_exact(w.basis(), std::move(out));
}

std::vector<HalfSpace> polarization_family(const Basis& basis, int normals, int offsets) {
    std::vector<HalfSpace> fam;
    const double R = basis.domain.kind == Domain::Kind::Disk ? basis.domain.R : 1.0;
    int nt = basis.domain.kind == Domain::Kind::Disk ? basis.ntheta : 2 * normals;
    int stride = std::max(1, nt / normals);
    for (int k = 0; k < nt; k += stride) {
        double phi = M_PI * k / nt;          // boundary line angle
        double nxa = std::cos(phi - 0.5 * M_PI), nya = std::sin(phi - 0.5 * M_PI);
        for (int s = 0; s < offsets; s++) {
            // offsets <= 0 keep the origin inside (class H_* / boundary case H)
            double d = offsets == 1 ? 0.0 : -0.8 * R * s / (offsets - 1.0);
            fam.push_back({nxa, nya, d});
            fam.push_back({-nxa, -nya, d});
        }
    }
    return fam;
}

TalentiReport talenti_check(const Field& f, double slack) {
    require_disk(f, "talenti_check");
    require_nonneg(f, "talenti_check");
    const Basis& b = *f.basis();
    Field u = apply_inverse_laplacian(f);
    TalentiReport rep;

    if (radial_monotone(f)) {
        // the rearrangement fixes the nodal data, so w and u coincide and the
        // native transforms are exact on the ring plateaus
        Field fstar = schwarz_rearrange(f);
        Field wcmp = apply_inverse_laplacian(Field::from_nodal(f.basis(), fstar.nodal()));
        Field ustar = schwarz_rearrange(u);
        double scale = std::max(1e-300, wcmp.nodal().cwiseAbs().maxCoeff());
        rep.max_violation = std::max(0.0, (ustar.nodal() - wcmp.nodal()).maxCoeff());
        rep.max_gap = (ustar.nodal() - wcmp.nodal()).cwiseAbs().maxCoeff();
        rep.ordered = rep.max_violation <= slack * std::max(1.0, scale);
        rep.equality_case = rep.max_gap < 1e-8 * scale;
        return rep;
    }

    // generic input: the comparison gap closes to first order at the boundary
    // (the slopes of u* and w differ by an arithmetic-vs-harmonic mean of the
    // boundary flux), so every piece is evaluated beyond grid resolution:
    //  - w from the exact radial Poisson integrals of the finely sampled
    //    rearranged source (projection undershoots clipped at 0, which can
    //    only enlarge w and keeps the comparison one-sided),
    //  - u* from the exact quantile of a piecewise-linear interpolant in the
    //    interior and from level-curve geometry on the outermost rings.
    const double scale = std::max(1e-300, u.nodal().cwiseAbs().maxCoeff());
    TriQuantile qu(u, 4 * b.nr, 4 * b.ntheta, false);
    Quantile qf = fine_quantile(f, 4 * b.nr, 4 * b.ntheta, true);
    RadialPoisson w(qf, b.domain.R);

    rep.max_violation = 0.0;
    rep.max_gap = 0.0;
    for (int ir = 0; ir < b.nr; ir++) {
        double r = b.radius[ir * b.ntheta];
        double us;
        if (r >= 0.9 * b.domain.R) {
            double area = M_PI * (b.domain.R * b.domain.R - r * r);
            us = tail_level(u, area, scale);
            if (us < 0.0) us = qu(M_PI * r * r);  // graph assumption failed
        } else {
            us = qu(M_PI * r * r);
        }
        double d = us - w(r);
        rep.max_violation = std::max(rep.max_violation, d);
        rep.max_gap = std::max(rep.max_gap, std::abs(d));
    }
    rep.ordered = rep.max_violation <= slack * std::max(1.0, scale);
    rep.equality_case = rep.max_gap < 1e-8 * scale;
    return rep;
}

double foliated_deficit(const Field& w, double ex, double ey) {
    require_disk(w, "foliated_deficit");
    double l2 = std::sqrt(lp_norm_pow(w, 2.0));
    if (!(l2 > 0)) throw std::invalid_argument("foliated_deficit: zero field");
    double en = std::hypot(ex, ey);
    if (!(en > 0)) throw std::invalid_argument("foliated_deficit: zero axis");
    ex /= en;
    ey /= en;
    const Basis& b = *w.basis();
    int stride = std::max(1, b.ntheta / 64);
    double worst = 0.0;
    for (int k = 0; k < b.ntheta; k += stride) {
        double phi = M_PI * k / b.ntheta;
        double nx = std::cos(phi - 0.5 * M_PI), ny = std::sin(phi - 0.5 * M_PI);
        if (nx * ex + ny * ey < 0) {
            nx = -nx;
            ny = -ny;
        }
        if (nx * ex + ny * ey <= 1e-12) continue;  // axis on the boundary line
        Field wh = polarize(w, {nx, ny, 0.0});
        Eigen::VectorXd diff = wh.nodal() - w.nodal();
        double nd = std::sqrt((b.w.array() * diff.array().square()).sum());
        worst = std::max(worst, nd / l2);
    }
    return worst;
}

double radial_deficit(const Field& w) {
    require_disk(w, "radial_deficit");
    const Basis& b = *w.basis();
    double num = 0.0, den = 0.0;
    for (int ir = 0; ir < b.nr; ir++) {
        double mean = 0.0;
        for (int j = 0; j < b.ntheta; j++) mean += w.nodal()[ir * b.ntheta + j];
        mean /= b.ntheta;
        for (int j = 0; j < b.ntheta; j++) {
            int idx = ir * b.ntheta + j;
            num += b.w[idx] * std::pow(w.nodal()[idx] - mean, 2);
            den += b.w[idx] * std::pow(w.nodal()[idx], 2);
        }
    }
    if (!(den > 0)) throw std::invalid_argument("radial_deficit: zero field");
    return std::sqrt(num / den);
}

BreakingReport symmetry_breaking_probe(const ExponentPair& e, BasisPtr basis,
                                       const SolverConfig& cfg) {
    e.validate();
    if (basis->domain.kind != Domain::Kind::Disk || basis->radial_only)
        throw std::domain_error("symmetry_breaking_probe needs a full disk basis");
    Classification cl = classify(e);
    if (!cl.H3) throw std::domain_error("symmetry_breaking_probe requires H3");

    BreakingReport rep;
    rep.alpha = e.alpha;
    rep.beta = e.beta;

    // radial-subspace level via inverse iteration on the m = 0 modes
    int nrad = 0;
    for (const auto& m : basis->modes)
        if (m.m == 0) nrad++;
    BasisPtr rad = Basis::build_disk_radial(basis->domain.R, std::max(16, nrad + 4));
    FrameworkResult rrad = solve_inversion(e, rad, cfg);
    if (!rrad.converged) {
        rep.message = "radial solve failed: " + rrad.message;
        return rep;
    }
    rep.c_rad = rrad.c;

    // unconstrained level from a deliberately asymmetric start (phi_1 plus the
    // first cos-theta mode, which pins the breaking axis to theta = 0)
    SolverConfig cfull = cfg;
    {
        Eigen::VectorXd c0 = Eigen::VectorXd::Zero(basis->M);
        c0[0] = 1.0;
        for (int n = 0; n < basis->M; n++)
            if (basis->modes[n].m == 1 && basis->modes[n].trig == 0) {
                c0[n] = 0.3;
                break;
            }
        cfull.start = Field::from_coeff(basis, c0);
    }
    FrameworkResult rfull = solve_inversion(e, basis, cfull);
    if (!rfull.converged) {
        rep.message = "full solve failed: " + rfull.message;
        return rep;
    }
    rep.c_full = rfull.c;
    rep.margin = 10.0 * 1e-3 * std::abs(rep.c_rad);
    rep.breaking = rep.c_full < rep.c_rad - rep.margin;

    const Field& u = rfull.solution.u;
    rep.radial = radial_deficit(u);
    // axis of the minimizer: first angular moment of u^2
    const Basis& b = *basis;
    Eigen::ArrayXd u2 = u.nodal().array().square() * b.w.array();
    double mx = (u2 * b.nodes.col(0).array()).sum();
    double my = (u2 * b.nodes.col(1).array()).sum();
    if (std::hypot(mx, my) < 1e-10 * u2.sum()) {
        mx = 1.0;
        my = 0.0;
    }
    double n = std::hypot(mx, my);
    rep.axis_x = mx / n;
    rep.axis_y = my / n;
    rep.foliated = foliated_deficit(u, rep.axis_x, rep.axis_y);
    rep.ok = true;
    return rep;
}

}  // namespace hamsys
