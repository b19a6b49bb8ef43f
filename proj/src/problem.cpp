#include "hamsys/problem.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace hamsys {

void ExponentPair::validate() const {
    if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("exponents must be positive");
    if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("weights must be nonnegative");
    if (N < 1) throw std::invalid_argument("dimension must be >= 1");
}

std::string Classification::regime_name() const {
    switch (regime) {
        case Regime::Sublinear: return "sublinear";
        case Regime::Linear: return "linear";
        case Regime::Superlinear: return "superlinear";
    }
    return "";
}

std::string Classification::hyperbola_name() const {
    switch (hyperbola) {
        case Hyperbola::Below: return "below";
        case Hyperbola::On: return "on";
        case Hyperbola::Above: return "above";
    }
    return "";
}

Classification classify(const ExponentPair& e) {
    e.validate();
    Classification c;

    // position relative to 1/(p+1) + 1/(q+1) = (N-2)/N, compared after
    // clearing denominators so that rational inputs are decided exactly
    const double lhs = e.N * (e.q + 1.0) + e.N * (e.p + 1.0);
    const double rhs = (e.N - 2.0) * (e.p + 1.0) * (e.q + 1.0);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
    const double diff = lhs - rhs;
    if (diff > 1e-12 * scale)
        c.hyperbola = Classification::Hyperbola::Below;
    else if (diff < -1e-12 * scale)
        c.hyperbola = Classification::Hyperbola::Above;
    else
        c.hyperbola = Classification::Hyperbola::On;

    const double pq = e.p * e.q;
    if (pq > 1.0 + 1e-12)
        c.regime = Classification::Regime::Superlinear;
    else if (pq < 1.0 - 1e-12)
        c.regime = Classification::Regime::Sublinear;
    else
        c.regime = Classification::Regime::Linear;

    const bool sub = c.hyperbola == Classification::Hyperbola::Below;
    const bool super = c.regime == Classification::Regime::Superlinear;
    c.H1 = sub;
    c.H2 = sub && super && e.p * (e.N - 4.0) < e.N + 4.0 && e.q * (e.N - 4.0) < e.N + 4.0;
    c.H3 = sub && super;
    c.H4 = sub && e.p > 1.0 && e.q > 1.0;
    c.H4p = e.p > 1.0 && e.q > 1.0 && (e.p + 1.0) * (e.N - 2.0) <= 2.0 * e.N &&
            (e.q + 1.0) * (e.N - 2.0) <= 2.0 * e.N;
    return c;
}

double power_odd(double s, double p) {
    if (s == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(s), p), s);
}

double power_primitive(double s, double p) {
    return std::pow(std::abs(s), p + 1.0) / (p + 1.0);
}

Eigen::VectorXd abs_pow_vec(const Eigen::VectorXd& v, double r) {
    Eigen::ArrayXd a = v.array().abs();
    double ri = std::round(2.0 * r) / 2.0;
    if (r == ri && r >= 0.0 && r <= 8.0) {
        int whole = static_cast<int>(r);
        Eigen::ArrayXd out = Eigen::ArrayXd::Ones(v.size());
        for (int k = 0; k < whole; k++) out *= a;
        if (r != whole) out *= a.sqrt();
        return out.matrix();
    }
    return a.pow(r).matrix();
}

Eigen::VectorXd power_odd_vec(const Eigen::VectorXd& v, double p) {
    if (p >= 1.0)
        return (abs_pow_vec(v, p - 1.0).array() * v.array()).matrix();
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); i++) out[i] = power_odd(v[i], p);
    return out;
}

double power_derivative(double s, double p, bool* singular) {
    if (singular) *singular = false;
    if (s == 0.0 && p < 1.0) {
        if (singular) *singular = true;
        return std::numeric_limits<double>::infinity();
    }
    if (s == 0.0) return p == 1.0 ? 1.0 : 0.0;
    return p * std::pow(std::abs(s), p - 1.0);
}

namespace {

// finer basis on the same domain, cached: the boundary series of an M-mode
// expansion truncates slowly, so normal derivatives are rebuilt at ~4M modes
BasisPtr fine_basis_for(const Basis& b) {
    static std::map<std::string, BasisPtr> cache;
    int mfine = std::min(8 * b.M, 640);
    std::string key = b.domain.name() + (b.radial_only ? "#rad#" : "#") +
                      std::to_string(mfine);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    BasisPtr fine = b.radial_only ? Basis::build_disk_radial(b.domain.R, mfine)
                                  : Basis::build(b.domain, mfine);
    cache[key] = fine;
    return fine;
}

// boundary normal derivative of K(source) with source given pointwise
Eigen::VectorXd dnu_of_inverse(const Basis& fine, const std::function<double(double, double)>& src) {
    Eigen::VectorXd sn(fine.nq());
    for (int i = 0; i < fine.nq(); i++)
        sn[i] = src(fine.nodes(i, 0), fine.nodes.cols() > 1 ? fine.nodes(i, 1) : 0.0);
    Eigen::VectorXd c = project_nodal(fine, sn);
    return fine.dnu * c.cwiseQuotient(fine.lambda);
}

}  // namespace

double pohozaev_residual(const Field& u, const Field& v, const ExponentPair& e, double a) {
    if (u.basis() != v.basis()) throw std::invalid_argument("fields on different bases");
    if (!(a > 0.0)) throw std::invalid_argument("free parameter must be positive");
    const Basis& b = *u.basis();
    const double N = e.N;
    const double lhs = (N / (e.p + 1.0) - a) * lp_norm_pow(u, e.p + 1.0) +
                       (N / (e.q + 1.0) - (N - 2.0 - a)) * lp_norm_pow(v, e.q + 1.0);

    // normal derivatives through the equations: u = K(|x|^beta phi_q(v)) etc.,
    // re-expanded in a finer basis to push the boundary-series truncation down
    BasisPtr fine = fine_basis_for(b);
    auto wpow = [&](double x, double y, double g) {
        double r = b.domain.N > 1 ? std::hypot(x, y) : std::abs(x);
        return g == 0.0 ? 1.0 : std::pow(r, g);
    };
    Eigen::VectorXd du = dnu_of_inverse(*fine, [&](double x, double y) {
        return wpow(x, y, e.beta) * power_odd(v.eval(x, y), e.q);
    });
    Eigen::VectorXd dv = dnu_of_inverse(*fine, [&](double x, double y) {
        return wpow(x, y, e.alpha) * power_odd(u.eval(x, y), e.p);
    });
    // boundary term of the star-shaped identity carries the support function
    const double rhs =
        (fine->bw.array() * fine->bxnu.array() * du.array() * dv.array()).sum();
    return std::abs(lhs - rhs);
}

}  // namespace hamsys
