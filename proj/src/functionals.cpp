#include "hamsys/functionals.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace hamsys {

const char* framework_name(Framework f) {
    switch (f) {
        case Framework::Dual: return "dual";
        case Framework::Inversion: return "inversion";
        case Framework::LSReduction: return "ls_reduction";
        case Framework::ShootingOracle: return "shooting_oracle";
    }
    return "";
}

namespace {

// int |x|^gamma * F_p(field) over the domain, nodally
double hamiltonian_part(const Field& u, const Field& v, const ExponentPair& e) {
    return lp_norm_pow(u, e.p + 1.0, e.alpha) / (e.p + 1.0) +
           lp_norm_pow(v, e.q + 1.0, e.beta) / (e.q + 1.0);
}

Eigen::VectorXd power_nodal(const Eigen::VectorXd& vals, double p) {
    return power_odd_vec(vals, p);
}

Eigen::VectorXd power_deriv_nodal(const Eigen::VectorXd& vals, double p) {
    return p * abs_pow_vec(vals, p - 1.0);
}

}  // namespace

double energy_direct(const Field& u, const Field& v, const ExponentPair& e) {
    return dirichlet_pairing(u, v) - hamiltonian_part(u, v, e);
}

double energy_fractional(const Field& u, const Field& v, const ExponentPair& e, double s) {
    if (!(s > 0.0 && s < 2.0)) throw std::invalid_argument("fractional split must be in (0,2)");
    Field au = apply_frac(u, s);
    Field av = apply_frac(v, 2.0 - s);
    const Basis& b = *u.basis();
    double quad = (b.w.array() * au.nodal().array() * av.nodal().array()).sum();
    return quad - hamiltonian_part(u, v, e);
}

double energy_dual(const DualPair& d, const ExponentPair& e) {
    if (d.f.basis() != d.g.basis()) throw std::invalid_argument("fields on different bases");
    const double lf = lp_norm_pow(d.f, (e.p + 1.0) / e.p, -e.alpha / e.p);
    const double lg = lp_norm_pow(d.g, (e.q + 1.0) / e.q, -e.beta / e.q);
    // <T(f,g),(f,g)>/2 = int f K g, spectrally
    const double fkg =
        (d.f.coeff().array() * d.g.coeff().array() / d.f.basis()->lambda.array()).sum();
    return e.p / (e.p + 1.0) * lf + e.q / (e.q + 1.0) * lg - fkg;
}

DualPair gradient_dual(const DualPair& d, const ExponentPair& e) {
    const Basis& b = *d.f.basis();
    Field kf = apply_inverse_laplacian(d.f);
    Field kg = apply_inverse_laplacian(d.g);
    Eigen::VectorXd gf =
        b.weight_pow(-e.alpha / e.p).cwiseProduct(power_nodal(d.f.nodal(), 1.0 / e.p)) -
        kg.nodal();
    Eigen::VectorXd gg =
        b.weight_pow(-e.beta / e.q).cwiseProduct(power_nodal(d.g.nodal(), 1.0 / e.q)) -
        kf.nodal();
    return {Field::from_nodal(d.f.basis(), gf), Field::from_nodal(d.f.basis(), gg)};
}

double energy_fourth_order(const Field& u, const ExponentPair& e) {
    Field lap = apply_frac(u, 2.0);  // -Lap u, spectrally
    const double num = lp_norm_pow(lap, (e.q + 1.0) / e.q, -e.beta / e.q);
    return e.q / (e.q + 1.0) * num - lp_norm_pow(u, e.p + 1.0, e.alpha) / (e.p + 1.0);
}

Eigen::VectorXd gradient_fourth_order(const Field& u, const ExponentPair& e) {
    const Basis& b = *u.basis();
    Field lap = apply_frac(u, 2.0);  // nodal values of -Lap u
    // d/du of the |Lap u| term tested against phi_n picks up a factor lambda_n
    Eigen::VectorXd h =
        b.weight_pow(-e.beta / e.q).cwiseProduct(power_nodal(lap.nodal(), 1.0 / e.q));
    Eigen::VectorXd hn = project_nodal(b, h);
    Eigen::VectorXd pn =
        project_nodal(b, b.weight_pow(e.alpha).cwiseProduct(power_nodal(u.nodal(), e.p)));
    return b.lambda.cwiseProduct(hn) - pn;
}

Field solve_inner_max(const Field& u, const ExponentPair& e, double lambda,
                      const Field* warm, int* iters) {
    if (!(e.p > 1.0 && e.q > 1.0))
        throw std::domain_error("inner maximizer requires p, q > 1 (hypothesis H4)");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const BasisPtr bp = u.basis();
    const Basis& b = *bp;
    const int M = b.M;
    const Eigen::VectorXd wa = b.w.cwiseProduct(b.weight_pow(e.alpha));
    const Eigen::VectorXd wb = b.w.cwiseProduct(b.weight_pow(e.beta));

    Eigen::VectorXd psi = warm && warm->valid() ? warm->coeff() : Eigen::VectorXd::Zero(M);

    auto objective = [&](const Eigen::VectorXd& ps, Eigen::VectorXd& u1c,
                         Eigen::VectorXd& v1c) -> double {
        u1c = lambda * u.coeff() + ps;
        v1c = u.coeff() - ps / lambda;
        Eigen::VectorXd u1n = b.phi * u1c, v1n = b.phi * v1c;
        double quad = (b.lambda.array() * u1c.array() * v1c.array()).sum();
        double ham =
            (wa.array() * abs_pow_vec(u1n, e.p + 1.0).array()).sum() / (e.p + 1.0) +
            (wb.array() * abs_pow_vec(v1n, e.q + 1.0).array()).sum() / (e.q + 1.0);
        return quad - ham;
    };

    Eigen::VectorXd u1c, v1c;
    double h0 = objective(psi, u1c, v1c);
    const double grad_tol = 1e-11 * (1.0 + lambda * es_norm(u, 1.0));
    Eigen::LLT<Eigen::MatrixXd> llt;
    bool fresh = false;  // Hessian is reused across steps while it contracts well
    double prev_gn = -1.0;
    int it = 0;
    for (; it < 200; it++) {
        Eigen::VectorXd u1n = b.phi * u1c, v1n = b.phi * v1c;
        Eigen::VectorXd fp = project_nodal(b, b.weight_pow(e.alpha).cwiseProduct(power_nodal(u1n, e.p)));
        Eigen::VectorXd gq = project_nodal(b, b.weight_pow(e.beta).cwiseProduct(power_nodal(v1n, e.q)));
        Eigen::VectorXd grad =
            b.lambda.cwiseProduct(v1c - u1c / lambda) - fp + gq / lambda;
        double gn = grad.norm();
        if (gn < grad_tol) break;
        if (prev_gn > 0.0 && gn > 0.2 * prev_gn) llt = Eigen::LLT<Eigen::MatrixXd>();
        prev_gn = gn;

        if (llt.rows() == 0) {
            // negative Hessian is SPD: (2/lambda) Lam + A + B/lambda^2
            Eigen::VectorXd da = wa.cwiseProduct(power_deriv_nodal(u1n, e.p));
            Eigen::VectorXd db = wb.cwiseProduct(power_deriv_nodal(v1n, e.q)) / (lambda * lambda);
            Eigen::MatrixXd nh = b.phi.transpose() * (da + db).asDiagonal() * b.phi;
            nh.diagonal() += (2.0 / lambda) * b.lambda;
            llt.compute(nh);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("inner maximizer: Hessian factorization failed");
            fresh = true;
        }
        Eigen::VectorXd step = llt.solve(grad);

        // backtracking on the concave objective, step floor 1e-4
        double t = 1.0;
        bool accepted = false;
        while (t >= 1e-4) {
            Eigen::VectorXd trial = psi + t * step;
            Eigen::VectorXd tu, tv;
            double ht = objective(trial, tu, tv);
            if (ht >= h0 - 1e-14 * std::abs(h0)) {
                psi = trial;
                u1c = tu;
                v1c = tv;
                h0 = ht;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (accepted && t < 1.0) llt = Eigen::LLT<Eigen::MatrixXd>();  // damped: refresh
        if (!accepted) {
            if (!fresh) {  // stale Hessian: rebuild and retry this iterate
                llt = Eigen::LLT<Eigen::MatrixXd>();
                continue;
            }
            // quadrature round-off floor: the gradient is already far below any
            // level the outer loops can see, so stop ascending
            if (grad.norm() < 1e6 * grad_tol) break;
            char msg[200];
            std::snprintf(msg, sizeof(msg),
                          "inner maximizer: no ascent step (it=%d |grad|=%.3g tol=%.3g "
                          "h0=%.6g |u1|=%.3g |psi|=%.3g)",
                          it, grad.norm(), grad_tol, h0, u1c.norm(), psi.norm());
            throw std::runtime_error(msg);
        }
        fresh = false;  // the factorization now belongs to the previous iterate
    }
    if (it >= 200) throw std::runtime_error("inner maximizer: iteration cap reached");
    if (iters) *iters = it;
    return Field::from_coeff(bp, std::move(psi));
}

double energy_reduced(const Field& u, const ExponentPair& e, double lambda,
                      Field* psi_out, const Field* warm) {
    Field psi = solve_inner_max(u, e, lambda, warm);
    Field u1 = Field::from_coeff(u.basis(), lambda * u.coeff() + psi.coeff());
    Field v1 = Field::from_coeff(u.basis(), u.coeff() - psi.coeff() / lambda);
    if (psi_out) *psi_out = psi;
    return energy_direct(u1, v1, e);
}

Field gradient_reduced(const Field& u, const ExponentPair& e, double lambda,
                       Field* psi_out, const Field* warm) {
    Field psi = solve_inner_max(u, e, lambda, warm);
    const Basis& b = *u.basis();
    Eigen::VectorXd u1c = lambda * u.coeff() + psi.coeff();
    Eigen::VectorXd v1c = u.coeff() - psi.coeff() / lambda;
    Eigen::VectorXd u1n = b.phi * u1c, v1n = b.phi * v1c;
    Eigen::VectorXd fp = project_nodal(b, b.weight_pow(e.alpha).cwiseProduct(power_nodal(u1n, e.p)));
    Eigen::VectorXd gq = project_nodal(b, b.weight_pow(e.beta).cwiseProduct(power_nodal(v1n, e.q)));
    // envelope identity: J_lambda'(u) xi = I'(u1,v1)(lambda xi, xi)
    Eigen::VectorXd grad = lambda * (b.lambda.cwiseProduct(v1c) - fp) +
                           b.lambda.cwiseProduct(u1c) - gq;
    if (psi_out) *psi_out = psi;
    return Field::from_coeff(u.basis(), std::move(grad));
}

std::pair<double, double> system_residuals(const Field& u, const Field& v,
                                           const ExponentPair& e) {
    if (u.basis() != v.basis()) throw std::invalid_argument("fields on different bases");
    const Basis& b = *u.basis();
    Eigen::VectorXd rhs_u =
        project_nodal(b, b.weight_pow(e.beta).cwiseProduct(power_nodal(v.nodal(), e.q)));
    Eigen::VectorXd rhs_v =
        project_nodal(b, b.weight_pow(e.alpha).cwiseProduct(power_nodal(u.nodal(), e.p)));
    double ru = (b.lambda.cwiseProduct(u.coeff()) - rhs_u).norm();
    double rv = (b.lambda.cwiseProduct(v.coeff()) - rhs_v).norm();
    return {ru, rv};
}

}  // namespace hamsys
