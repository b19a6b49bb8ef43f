#include "hamsys/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace hamsys {

namespace {
constexpr int kModeCap = 4096;  // hard cap on basis size

double bessel_j(int m, double x) { return std::cyl_bessel_j(double(m), x); }

double bessel_j_prime(int m, double x) {
    if (m == 0) return -bessel_j(1, x);
    return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}
}  // namespace

Domain Domain::interval(double L) {
    if (L <= 0) throw std::invalid_argument("interval length must be positive");
    Domain d;
    d.kind = Kind::Interval;
    d.L1 = L;
    d.N = 1;
    return d;
}

Domain Domain::rectangle(double a, double b) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("rectangle sides must be positive");
    Domain d;
    d.kind = Kind::Rectangle;
    d.L1 = a;
    d.L2 = b;
    d.N = 2;
    return d;
}

Domain Domain::disk(double radius) {
    if (radius <= 0) throw std::invalid_argument("disk radius must be positive");
    Domain d;
    d.kind = Kind::Disk;
    d.R = radius;
    d.N = 2;
    return d;
}

std::string Domain::name() const {
    char buf[96];
    switch (kind) {
        case Kind::Interval: snprintf(buf, sizeof buf, "interval(%g)", L1); break;
        case Kind::Rectangle: snprintf(buf, sizeof buf, "rectangle(%g,%g)", L1, L2); break;
        case Kind::Disk: snprintf(buf, sizeof buf, "disk(%g)", R); break;
    }
    return buf;
}

bool Domain::same(const Domain& o) const {
    return kind == o.kind && L1 == o.L1 && L2 == o.L2 && R == o.R;
}

void gauss_legendre(int n, double a, double b, Eigen::VectorXd& x, Eigen::VectorXd& wts) {
    x.resize(n);
    wts.resize(n);
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; i++) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double t0, pp;
        do {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; j++) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
            }
            pp = n * (t * p0 - p1) / (t * t - 1.0);
            t0 = t;
            t -= p0 / pp;
        } while (std::abs(t - t0) > 1e-15);
        x[i] = xm - xl * t;
        x[n - 1 - i] = xm + xl * t;
        wts[i] = 2.0 * xl / ((1.0 - t * t) * pp * pp);
        wts[n - 1 - i] = wts[i];
    }
}

// Zeros found by scanning for a sign change, then bisection-guarded Newton.
// Results cached per (m, k); accuracy ~1e-13 relative.
double bessel_zero(int m, int k) {
    if (m < 0 || k < 1) throw std::invalid_argument("bessel_zero: need m >= 0, k >= 1");
    static std::map<std::pair<int, int>, double> cache;
    static std::map<int, std::vector<double>> found;  // zeros per order, ascending
    auto key = std::make_pair(m, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto& zs = found[m];
    double x = zs.empty() ? (m == 0 ? 2.0 : m + 1.5 * std::cbrt(double(m)) + 0.5)
                          : zs.back() + 0.5;
    while (static_cast<int>(zs.size()) < k) {
        const double step = 0.25;
        double fa = bessel_j(m, x);
        double xb = x;
        // walk right until the sign flips
        while (true) {
            xb += step;
            double fb = bessel_j(m, xb);
            if (fa == 0.0) break;
            if (fa * fb < 0.0) break;
            x = xb;
            fa = fb;
        }
        double lo = x, hi = xb;
        double z = 0.5 * (lo + hi);
        for (int iter = 0; iter < 100; iter++) {
            double f = bessel_j(m, z);
            double df = bessel_j_prime(m, z);
            double zn = z - f / df;
            if (!(zn > lo && zn < hi)) {  // fall back to bisection
                if (f * bessel_j(m, lo) < 0)
                    hi = z;
                else
                    lo = z;
                zn = 0.5 * (lo + hi);
            }
            if (std::abs(zn - z) < 1e-14 * z) {
                z = zn;
                break;
            }
            z = zn;
        }
        zs.push_back(z);
        cache[{m, static_cast<int>(zs.size())}] = z;
        x = z + 0.5;
    }
    return cache[key];
}

std::shared_ptr<const Basis> Basis::build(const Domain& dom, int M) {
    if (M < 1) throw std::invalid_argument("mode count must be >= 1");
    if (M > kModeCap) throw std::length_error("mode count exceeds implementation cap");
    auto b = std::shared_ptr<Basis>(new Basis());
    b->domain = dom;
    b->M = M;
    switch (dom.kind) {
        case Domain::Kind::Interval: b->build_interval(dom.L1, M); break;
        case Domain::Kind::Rectangle: b->build_rectangle(dom.L1, dom.L2, M); break;
        case Domain::Kind::Disk: b->build_disk(dom.R, M, false); break;
    }
    return b;
}

std::shared_ptr<const Basis> Basis::build_disk_radial(double radius, int M) {
    if (M < 1) throw std::invalid_argument("mode count must be >= 1");
    if (M > kModeCap) throw std::length_error("mode count exceeds implementation cap");
    auto b = std::shared_ptr<Basis>(new Basis());
    b->domain = Domain::disk(radius);
    b->M = M;
    b->radial_only = true;
    b->build_disk(radius, M, true);
    return b;
}

void Basis::build_interval(double L, int M) {
    modes.resize(M);
    lambda.resize(M);
    const double c = std::sqrt(2.0 / L);
    for (int n = 0; n < M; n++) {
        modes[n].k = n + 1;
        modes[n].lambda = std::pow((n + 1) * M_PI / L, 2);
        lambda[n] = modes[n].lambda;
    }
    // enough nodes that quartic products of the top mode integrate exactly
    int nq_ = static_cast<int>(std::ceil(3.5 * M)) + 24;
    Eigen::VectorXd x, wt;
    gauss_legendre(nq_, 0.0, L, x, wt);
    nodes.resize(nq_, 1);
    nodes.col(0) = x;
    w = wt;
    radius = x.cwiseAbs();
    phi.resize(nq_, M);
    for (int n = 0; n < M; n++)
        for (int i = 0; i < nq_; i++) phi(i, n) = c * std::sin((n + 1) * M_PI * x[i] / L);
    // boundary: two endpoints, counting measure
    bw = Eigen::VectorXd::Ones(2);
    bxnu.resize(2);
    bxnu << 0.0, L;  // x . nu at the endpoints
    dnu.resize(2, M);
    for (int n = 0; n < M; n++) {
        double dphi = c * (n + 1) * M_PI / L;
        dnu(0, n) = -dphi;                          // outward normal -e_x at 0
        dnu(1, n) = dphi * std::cos((n + 1) * M_PI);  // +e_x at L
    }
}

void Basis::build_rectangle(double a, double b, int M) {
    // collect enough tensor modes, sort by eigenvalue (then by x index)
    int cap = static_cast<int>(std::ceil(std::sqrt(2.0 * M))) + 4;
    struct Cand { double lam; int kx, ky; };
    std::vector<Cand> cand;
    for (int kx = 1; kx <= cap; kx++)
        for (int ky = 1; ky <= cap; ky++)
            cand.push_back({std::pow(kx * M_PI / a, 2) + std::pow(ky * M_PI / b, 2), kx, ky});
    std::stable_sort(cand.begin(), cand.end(), [](const Cand& u, const Cand& v) {
        if (u.lam != v.lam) return u.lam < v.lam;
        if (u.kx != v.kx) return u.kx < v.kx;
        return u.ky < v.ky;
    });
    modes.resize(M);
    lambda.resize(M);
    int kxmax = 0, kymax = 0;
    for (int n = 0; n < M; n++) {
        modes[n].k = cand[n].kx;
        modes[n].m = cand[n].ky;
        modes[n].lambda = cand[n].lam;
        lambda[n] = cand[n].lam;
        kxmax = std::max(kxmax, cand[n].kx);
        kymax = std::max(kymax, cand[n].ky);
    }
    int nx = static_cast<int>(std::ceil(3.5 * kxmax)) + 24;
    int ny = static_cast<int>(std::ceil(3.5 * kymax)) + 24;
    Eigen::VectorXd gx, gwx, gy, gwy;
    gauss_legendre(nx, 0.0, a, gx, gwx);
    gauss_legendre(ny, 0.0, b, gy, gwy);
    int nq_ = nx * ny;
    nodes.resize(nq_, 2);
    w.resize(nq_);
    radius.resize(nq_);
    for (int i = 0; i < nx; i++)
        for (int j = 0; j < ny; j++) {
            int idx = i * ny + j;
            nodes(idx, 0) = gx[i];
            nodes(idx, 1) = gy[j];
            w[idx] = gwx[i] * gwy[j];
            radius[idx] = std::hypot(gx[i], gy[j]);
        }
    const double c = 2.0 / std::sqrt(a * b);
    phi.resize(nq_, M);
    for (int n = 0; n < M; n++) {
        int kx = modes[n].k, ky = modes[n].m;
        for (int i = 0; i < nx; i++) {
            double sx = std::sin(kx * M_PI * gx[i] / a);
            for (int j = 0; j < ny; j++)
                phi(i * ny + j, n) = c * sx * std::sin(ky * M_PI * gy[j] / b);
        }
    }
    // boundary: four edges with the 1D Gauss weights
    int nb = 2 * ny + 2 * nx;
    bw.resize(nb);
    bxnu.resize(nb);
    for (int j = 0; j < ny; j++) {
        bxnu[j] = 0.0;       // x = 0 edge, nu = -e_x
        bxnu[ny + j] = a;    // x = a edge
    }
    for (int i = 0; i < nx; i++) {
        bxnu[2 * ny + i] = 0.0;       // y = 0 edge
        bxnu[2 * ny + nx + i] = b;    // y = b edge
    }
    dnu.resize(nb, M);
    for (int n = 0; n < M; n++) {
        int kx = modes[n].k, ky = modes[n].m;
        double dx = c * kx * M_PI / a, dy = c * ky * M_PI / b;
        double cx = std::cos(kx * M_PI), cy = std::cos(ky * M_PI);
        int at = 0;
        for (int j = 0; j < ny; j++, at++) {  // x = 0
            bw[at] = gwy[j];
            dnu(at, n) = -dx * std::sin(ky * M_PI * gy[j] / b);
        }
        for (int j = 0; j < ny; j++, at++) {  // x = a
            bw[at] = gwy[j];
            dnu(at, n) = dx * cx * std::sin(ky * M_PI * gy[j] / b);
        }
        for (int i = 0; i < nx; i++, at++) {  // y = 0
            bw[at] = gwx[i];
            dnu(at, n) = -dy * std::sin(kx * M_PI * gx[i] / a);
        }
        for (int i = 0; i < nx; i++, at++) {  // y = b
            bw[at] = gwx[i];
            dnu(at, n) = dy * cy * std::sin(kx * M_PI * gx[i] / a);
        }
    }
}

void Basis::build_disk(double R, int M, bool only_radial) {
    // enumerate Bessel modes until M are available (m >= 1 counts twice)
    struct Cand { double j; int m, k; };
    std::vector<Cand> cand;
    double jmaxwin = 8.0;
    while (true) {
        cand.clear();
        int count = 0;
        for (int m = 0;; m++) {
            if (only_radial && m > 0) break;
            double j1 = bessel_zero(m, 1);
            if (j1 > jmaxwin) break;
            for (int k = 1;; k++) {
                double j = bessel_zero(m, k);
                if (j > jmaxwin) break;
                cand.push_back({j, m, k});
                count += (m == 0 || only_radial) ? 1 : 2;
            }
        }
        if (count >= M) break;
        jmaxwin *= 1.25;
    }
    // expand to modes (sin before cos on ties), sort by eigenvalue then m
    std::vector<ModeInfo> all;
    for (const auto& c : cand) {
        ModeInfo mi;
        mi.m = c.m;
        mi.k = c.k;
        mi.lambda = std::pow(c.j / R, 2);
        mi.trig = 0;
        all.push_back(mi);
        if (c.m > 0 && !only_radial) {
            mi.trig = 1;
            all.push_back(mi);
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const ModeInfo& u, const ModeInfo& v) {
        if (u.lambda != v.lambda) return u.lambda < v.lambda;
        if (u.m != v.m) return u.m < v.m;
        return u.trig > v.trig;
    });
    all.resize(M);
    modes = all;
    lambda.resize(M);
    double jmax = 0;
    int mmax = 0;
    for (int n = 0; n < M; n++) {
        lambda[n] = modes[n].lambda;
        jmax = std::max(jmax, std::sqrt(modes[n].lambda) * R);
        mmax = std::max(mmax, modes[n].m);
    }

    nr = static_cast<int>(std::ceil(1.3 * jmax)) + 26;
    // angular grid: dealiasing margin, and a multiple of 128 so that the
    // polarization axes land exactly on grid reflections
    ntheta = 128;
    while (ntheta < 6 * mmax + 2) ntheta += 128;

    Eigen::VectorXd gr, gwr;
    gauss_legendre(nr, 0.0, R, gr, gwr);
    int nq_ = nr * ntheta;
    nodes.resize(nq_, 2);
    w.resize(nq_);
    radius.resize(nq_);
    const double wth = 2.0 * M_PI / ntheta;
    for (int i = 0; i < nr; i++)
        for (int j = 0; j < ntheta; j++) {
            int idx = i * ntheta + j;
            double th = wth * j;
            nodes(idx, 0) = gr[i] * std::cos(th);
            nodes(idx, 1) = gr[i] * std::sin(th);
            w[idx] = gwr[i] * gr[i] * wth;
            radius[idx] = gr[i];
        }

    phi.resize(nq_, M);
    bw = Eigen::VectorXd::Constant(ntheta, R * wth);
    bxnu = Eigen::VectorXd::Constant(ntheta, R);
    dnu.resize(ntheta, M);
    const int nfine = 4096;
    radial_h = R / nfine;
    radial_table.assign(M, Eigen::VectorXd());
    radial_table_d2.assign(M, Eigen::VectorXd());
    for (int n = 0; n < M; n++) {
        int m = modes[n].m, k = modes[n].k;
        double j = bessel_zero(m, k);
        double angfac = (m == 0) ? 2.0 * M_PI : M_PI;
        double c = 1.0 / std::sqrt(angfac * 0.5 * R * R * std::pow(bessel_j(m + 1, j), 2));
        // radial values at the Gauss nodes
        Eigen::VectorXd rad(nr);
        for (int i = 0; i < nr; i++) rad[i] = c * bessel_j(m, j * gr[i] / R);
        for (int i = 0; i < nr; i++)
            for (int jt = 0; jt < ntheta; jt++) {
                double th = wth * jt;
                double ang = (m == 0) ? 1.0 : (modes[n].trig == 0 ? std::cos(m * th) : std::sin(m * th));
                phi(i * ntheta + jt, n) = rad[i] * ang;
            }
        // boundary normal derivative: d/dr of the radial part at r = R
        double drad = c * (j / R) * (-bessel_j(m + 1, j));
        for (int jt = 0; jt < ntheta; jt++) {
            double th = wth * jt;
            double ang = (m == 0) ? 1.0 : (modes[n].trig == 0 ? std::cos(m * th) : std::sin(m * th));
            dnu(jt, n) = drad * ang;
        }
        // fine uniform table + natural cubic spline for off-grid evaluation
        Eigen::VectorXd tab(nfine + 1);
        for (int i = 0; i <= nfine; i++) tab[i] = c * bessel_j(m, j * (i * radial_h) / R);
        Eigen::VectorXd d2 = Eigen::VectorXd::Zero(nfine + 1);
        {
            Eigen::VectorXd u = Eigen::VectorXd::Zero(nfine + 1);
            for (int i = 1; i < nfine; i++) {
                double sig = 0.5;
                double pden = sig * d2[i - 1] + 2.0;
                d2[i] = (sig - 1.0) / pden;
                double rhs = (tab[i + 1] - 2.0 * tab[i] + tab[i - 1]) * 3.0 / (radial_h * radial_h);
                u[i] = (rhs - sig * u[i - 1]) / pden;
            }
            d2[nfine] = 0.0;
            for (int i = nfine - 1; i >= 0; i--) d2[i] = d2[i] * d2[i + 1] + u[i];
        }
        radial_table[n] = tab;
        radial_table_d2[n] = d2;
    }
}

double Basis::eval_radial(int n, double r) const {
    const auto& tab = radial_table[n];
    const auto& d2 = radial_table_d2[n];
    int nfine = static_cast<int>(tab.size()) - 1;
    double s = r / radial_h;
    int i = std::min(std::max(static_cast<int>(s), 0), nfine - 1);
    double a = (i + 1) - s, b = s - i;
    return a * tab[i] + b * tab[i + 1] +
           ((a * a * a - a) * d2[i] + (b * b * b - b) * d2[i + 1]) * radial_h * radial_h / 6.0;
}

double Basis::eval_mode(int n, double x, double y) const {
    switch (domain.kind) {
        case Domain::Kind::Interval:
            if (x <= 0.0 || x >= domain.L1) return 0.0;
            return std::sqrt(2.0 / domain.L1) * std::sin(modes[n].k * M_PI * x / domain.L1);
        case Domain::Kind::Rectangle:
            if (x <= 0.0 || x >= domain.L1 || y <= 0.0 || y >= domain.L2) return 0.0;
            return 2.0 / std::sqrt(domain.L1 * domain.L2) *
                   std::sin(modes[n].k * M_PI * x / domain.L1) *
                   std::sin(modes[n].m * M_PI * y / domain.L2);
        case Domain::Kind::Disk: {
            double r = std::hypot(x, y);
            if (r >= domain.R) return 0.0;
            double rad = eval_radial(n, r);
            int m = modes[n].m;
            if (m == 0) return rad;
            double th = std::atan2(y, x);
            return rad * (modes[n].trig == 0 ? std::cos(m * th) : std::sin(m * th));
        }
    }
    return 0.0;
}

Eigen::VectorXd Basis::weight_pow(double gamma) const {
    if (gamma == 0.0) return Eigen::VectorXd::Ones(nq());
    return radius.array().pow(gamma);
}

Field Field::from_coeff(BasisPtr basis, Eigen::VectorXd coeff) {
    if (!basis) throw std::invalid_argument("null basis");
    if (coeff.size() != basis->M) throw std::invalid_argument("coefficient size mismatch");
    Field f;
    f.basis_ = std::move(basis);
    f.coeff_ = std::move(coeff);
    f.nodal_ = f.basis_->phi * f.coeff_;
    return f;
}

Field Field::from_nodal(BasisPtr basis, const Eigen::VectorXd& nodal) {
    if (!basis) throw std::invalid_argument("null basis");
    if (nodal.size() != basis->nq()) throw std::invalid_argument("nodal size mismatch");
    Eigen::VectorXd coeff = basis->phi.transpose() * basis->w.cwiseProduct(nodal);
    return from_coeff(std::move(basis), std::move(coeff));
}

Field Field::from_nodal_exact(BasisPtr basis, Eigen::VectorXd nodal) {
    if (!basis) throw std::invalid_argument("null basis");
    if (nodal.size() != basis->nq()) throw std::invalid_argument("nodal size mismatch");
    Field f;
    f.coeff_ = basis->phi.transpose() * basis->w.cwiseProduct(nodal);
    f.basis_ = std::move(basis);
    f.nodal_ = std::move(nodal);
    return f;
}

Field Field::zero(BasisPtr basis) {
    return from_coeff(std::move(basis), Eigen::VectorXd::Zero(basis->M));
}

double Field::eval(double x, double y) const {
    double s = 0.0;
    for (int n = 0; n < basis_->M; n++) s += coeff_[n] * basis_->eval_mode(n, x, y);
    return s;
}

Eigen::VectorXd project_nodal(const Basis& basis, const Eigen::VectorXd& nodal) {
    return basis.phi.transpose() * basis.w.cwiseProduct(nodal);
}

namespace {
void check_same_basis(const Field& a, const Field& b) {
    if (a.basis() != b.basis()) throw std::invalid_argument("fields on different bases");
}
}  // namespace

Field apply_inverse_laplacian(const Field& f) {
    return Field::from_coeff(f.basis(),
                             f.coeff().cwiseQuotient(f.basis()->lambda));
}

Field apply_frac(const Field& f, double s) {
    if (s == 0.0) return f;
    Eigen::VectorXd c = f.coeff().cwiseProduct(f.basis()->lambda.array().pow(s / 2.0).matrix());
    return Field::from_coeff(f.basis(), std::move(c));
}

double lp_norm_pow(const Field& f, double r, double gamma) {
    if (r < 1.0) throw std::invalid_argument("Lebesgue exponent must be >= 1");
    const Basis& b = *f.basis();
    if (gamma <= -b.domain.N) throw std::domain_error("weight exponent not integrable");
    Eigen::ArrayXd vals = f.nodal().array().abs().pow(r);
    if (gamma != 0.0) vals *= b.weight_pow(gamma).array();
    return (b.w.array() * vals).sum();
}

double lp_norm(const Field& f, double r, double gamma) {
    return std::pow(lp_norm_pow(f, r, gamma), 1.0 / r);
}

double es_norm(const Field& f, double s) {
    return std::sqrt((f.basis()->lambda.array().pow(s) * f.coeff().array().square()).sum());
}

double dirichlet_pairing(const Field& a, const Field& b) {
    check_same_basis(a, b);
    return (a.basis()->lambda.array() * a.coeff().array() * b.coeff().array()).sum();
}

double l2_inner(const Field& a, const Field& b) {
    check_same_basis(a, b);
    return a.coeff().dot(b.coeff());
}

double integral(const Field& f) {
    return f.basis()->w.dot(f.nodal());
}

double integral_nodal(const Basis& basis, const Eigen::VectorXd& nodal) {
    return basis.w.dot(nodal);
}

}  // namespace hamsys
