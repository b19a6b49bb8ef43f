#include "hamsys/solvers.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hamsys {

namespace {

Eigen::VectorXd power_nodal(const Eigen::VectorXd& vals, double p) {
    return power_odd_vec(vals, p);
}

Field phi1(const BasisPtr& basis) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(basis->M);
    c[0] = 1.0;
    return Field::from_coeff(basis, c);
}

}  // namespace

bool newton_polish(Field& u, Field& v, const ExponentPair& e, double tol, int maxit) {
    const BasisPtr bp = u.basis();
    const Basis& b = *bp;
    const int M = b.M;
    Eigen::VectorXd uc = u.coeff(), vc = v.coeff();
    const Eigen::VectorXd wa = b.w.cwiseProduct(b.weight_pow(e.alpha));
    const Eigen::VectorXd wb = b.w.cwiseProduct(b.weight_pow(e.beta));

    auto residual = [&](const Eigen::VectorXd& ucur, const Eigen::VectorXd& vcur,
                        Eigen::VectorXd& r) {
        Eigen::VectorXd un = b.phi * ucur, vn = b.phi * vcur;
        Eigen::VectorXd pu = b.phi.transpose() * wa.cwiseProduct(power_nodal(un, e.p));
        Eigen::VectorXd qv = b.phi.transpose() * wb.cwiseProduct(power_nodal(vn, e.q));
        r.resize(2 * M);
        r.head(M) = b.lambda.cwiseProduct(ucur) - qv;
        r.tail(M) = b.lambda.cwiseProduct(vcur) - pu;
    };

    Eigen::VectorXd r;
    residual(uc, vc, r);
    double rn = r.norm();
    for (int it = 0; it < maxit && rn > tol; it++) {
        Eigen::VectorXd un = b.phi * uc, vn = b.phi * vc;
        Eigen::VectorXd dfu = e.p * wa.cwiseProduct(abs_pow_vec(un, e.p - 1.0));
        Eigen::VectorXd dgv = e.q * wb.cwiseProduct(abs_pow_vec(vn, e.q - 1.0));
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * M, 2 * M);
        J.topLeftCorner(M, M).diagonal() = b.lambda;
        J.bottomRightCorner(M, M).diagonal() = b.lambda;
        J.topRightCorner(M, M) = -(b.phi.transpose() * dgv.asDiagonal() * b.phi);
        J.bottomLeftCorner(M, M) = -(b.phi.transpose() * dfu.asDiagonal() * b.phi);
        Eigen::VectorXd dz = J.partialPivLu().solve(-r);
        double t = 1.0;
        bool ok = false;
        while (t > 1e-6) {
            Eigen::VectorXd ut = uc + t * dz.head(M), vt = vc + t * dz.tail(M);
            Eigen::VectorXd rt;
            residual(ut, vt, rt);
            if (rt.norm() < rn) {
                uc = ut;
                vc = vt;
                r = rt;
                rn = rt.norm();
                ok = true;
                break;
            }
            t *= 0.5;
        }
        if (!ok) break;
    }
    u = Field::from_coeff(bp, uc);
    v = Field::from_coeff(bp, vc);
    return rn <= tol;
}

double dual_ray_maximizer(double A, double B, double p, double q) {
    if (!(A > 0.0 && B > 0.0)) throw std::invalid_argument("ray maximizer needs A, B > 0");
    if (!(p * q > 1.0)) throw std::invalid_argument("ray maximizer needs pq > 1");
    const double g1 = (p + 1.0) / p;
    const double g2 = (p * (q + 1.0) + q * (p + 1.0)) / (p * (q + 1.0));
    return std::pow(A * g1 / (B * g2), 1.0 / (g2 - g1));
}

FrameworkResult solve_dual(const ExponentPair& e, BasisPtr basis, const SolverConfig& cfg) {
    e.validate();
    Classification cl = classify(e);
    if (!cl.H3)
        throw std::domain_error(
            "solve_dual requires H3 (superlinear and subcritical): refused for " +
            cl.regime_name() + "/" + cl.hyperbola_name() + " data");

    FrameworkResult res;
    res.framework = Framework::Dual;
    const Basis& b = *basis;
    const int M = b.M;
    const double g1 = (e.p + 1.0) / e.p;
    const double g2 = (e.p * (e.q + 1.0) + e.q * (e.p + 1.0)) / (e.p * (e.q + 1.0));
    const double kappa = e.q * (e.p + 1.0) / (e.p * (e.q + 1.0));
    const Eigen::VectorXd wap = b.weight_pow(-e.alpha / e.p);
    const Eigen::VectorXd wbq = b.weight_pow(-e.beta / e.q);
    std::mt19937_64 rng(cfg.seed);

    // direction state (f, g) as coefficients, kept at unit joint norm
    Eigen::VectorXd fc, gc;
    if (cfg.start.valid()) {
        fc = cfg.start.coeff();
        gc = cfg.start.coeff();
    } else {
        fc = gc = phi1(basis).coeff();
    }
    auto normalize = [&]() {
        double n = std::sqrt(fc.squaredNorm() + gc.squaredNorm());
        fc /= n;
        gc /= n;
    };
    normalize();

    struct Eval {
        bool ok = false;
        double m = 0.0, t0 = 0.0, A = 0.0, B = 0.0;
    };
    auto eval = [&](const Eigen::VectorXd& f, const Eigen::VectorXd& g) -> Eval {
        Eval ev;
        ev.B = (f.array() * g.array() / b.lambda.array()).sum();
        if (!(ev.B > 0.0)) return ev;
        Eigen::VectorXd fn = b.phi * f, gn = b.phi * g;
        double lf = (b.w.array() * wap.array() * fn.array().abs().pow(g1)).sum();
        double lg = (b.w.array() * wbq.array() * gn.array().abs().pow((e.q + 1.0) / e.q)).sum();
        ev.A = e.p / (e.p + 1.0) * lf + e.q / (e.q + 1.0) * lg;
        ev.t0 = dual_ray_maximizer(ev.A, ev.B, e.p, e.q);
        ev.m = ev.A * std::pow(ev.t0, g1) - ev.B * std::pow(ev.t0, g2);
        ev.ok = true;
        return ev;
    };

    Eval ev = eval(fc, gc);
    for (int tries = 0; !ev.ok && tries < 20; tries++) {
        // no ascent along this ray: re-randomize the direction
        std::normal_distribution<double> nd;
        for (int n = 0; n < M; n++) {
            fc[n] = nd(rng);
            gc[n] = nd(rng);
        }
        normalize();
        ev = eval(fc, gc);
    }
    if (!ev.ok) {
        res.message = "no direction with positive coupling <T(f,g),(f,g)> found";
        return res;
    }

    const double descend_tol = 1e-3;  // Newton on the stationarity system finishes
    double bb_step = 0.1;
    Eigen::VectorXd prev_d, prev_gr;
    double resid = 0.0;
    int it = 0;
    for (; it < cfg.max_outer; it++) {
        // gradient of the full dual functional at the fiber-projected point
        double tk = std::pow(ev.t0, kappa);
        Eigen::VectorXd F0 = ev.t0 * fc, G0 = tk * gc;
        Eigen::VectorXd F0n = b.phi * F0, G0n = b.phi * G0;
        Eigen::VectorXd kg = b.phi * (G0.cwiseQuotient(b.lambda));
        Eigen::VectorXd kf = b.phi * (F0.cwiseQuotient(b.lambda));
        Eigen::VectorXd pf =
            b.phi.transpose() * b.w.cwiseProduct(wap.cwiseProduct(power_nodal(F0n, 1.0 / e.p)) - kg);
        Eigen::VectorXd pg =
            b.phi.transpose() * b.w.cwiseProduct(wbq.cwiseProduct(power_nodal(G0n, 1.0 / e.q)) - kf);
        resid = std::sqrt(pf.squaredNorm() + pg.squaredNorm());
        res.trace.push_back({it, ev.m, resid, bb_step});
        if (resid < descend_tol * std::max(1.0, ev.t0)) break;

        // chain rule through the fiber projection (envelope in t0)
        Eigen::VectorXd gr(2 * M);
        gr.head(M) = ev.t0 * pf;
        gr.tail(M) = tk * pg;
        Eigen::VectorXd d(2 * M);
        d.head(M) = fc;
        d.tail(M) = gc;

        double s = bb_step;
        if (prev_d.size()) {  // Barzilai-Borwein step length
            Eigen::VectorXd sd = d - prev_d, yg = gr - prev_gr;
            double denom = sd.dot(yg);
            if (denom > 0) s = std::min(std::max(sd.squaredNorm() / denom, 1e-6), 1e3);
        }
        prev_d = d;
        prev_gr = gr;

        bool accepted = false;
        for (int halve = 0; halve < 40; halve++) {
            Eigen::VectorXd fcand = fc - s * gr.head(M);
            Eigen::VectorXd gcand = gc - s * gr.tail(M);
            double n = std::sqrt(fcand.squaredNorm() + gcand.squaredNorm());
            fcand /= n;
            gcand /= n;
            Eval ec = eval(fcand, gcand);
            if (ec.ok && ec.m < ev.m) {
                fc = fcand;
                gc = gcand;
                ev = ec;
                bb_step = s;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) break;  // stationary at line-search resolution
    }
    res.iterations = it;

    // sharpen the fiber point by damped Newton on the dual stationarity system
    //   P(w_a^- phi_{1/p}(F)) = K G,   P(w_b^- phi_{1/q}(G)) = K F
    Eigen::VectorXd Fc = ev.t0 * fc, Gc = std::pow(ev.t0, kappa) * gc;
    auto dual_res = [&](const Eigen::VectorXd& F, const Eigen::VectorXd& G,
                        Eigen::VectorXd& r) {
        Eigen::VectorXd Fn = b.phi * F, Gn = b.phi * G;
        r.resize(2 * M);
        r.head(M) = b.phi.transpose() * b.w.cwiseProduct(wap.cwiseProduct(power_nodal(Fn, 1.0 / e.p))) -
                    G.cwiseQuotient(b.lambda);
        r.tail(M) = b.phi.transpose() * b.w.cwiseProduct(wbq.cwiseProduct(power_nodal(Gn, 1.0 / e.q))) -
                    F.cwiseQuotient(b.lambda);
    };
    Eigen::VectorXd r;
    dual_res(Fc, Gc, r);
    double rn = r.norm();
    const double ntol = cfg.tol * std::max(1.0, std::max(Fc.norm(), Gc.norm()));
    for (int nit = 0; nit < 60 && rn > ntol; nit++) {
        Eigen::VectorXd Fn = b.phi * Fc, Gn = b.phi * Gc;
        Eigen::VectorXd df(b.nq()), dg(b.nq());
        double fscale = Fn.cwiseAbs().maxCoeff(), gscale = Gn.cwiseAbs().maxCoeff();
        for (int i = 0; i < b.nq(); i++) {
            df[i] = b.w[i] * wap[i] / e.p *
                    std::pow(std::max(std::abs(Fn[i]), 1e-13 * fscale), 1.0 / e.p - 1.0);
            dg[i] = b.w[i] * wbq[i] / e.q *
                    std::pow(std::max(std::abs(Gn[i]), 1e-13 * gscale), 1.0 / e.q - 1.0);
        }
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * M, 2 * M);
        J.topLeftCorner(M, M) = b.phi.transpose() * df.asDiagonal() * b.phi;
        J.bottomRightCorner(M, M) = b.phi.transpose() * dg.asDiagonal() * b.phi;
        J.topRightCorner(M, M).diagonal() = -b.lambda.cwiseInverse();
        J.bottomLeftCorner(M, M).diagonal() = -b.lambda.cwiseInverse();
        Eigen::VectorXd dz = J.partialPivLu().solve(-r);
        double t = 1.0;
        bool ok = false;
        while (t > 1e-4) {
            Eigen::VectorXd Ft = Fc + t * dz.head(M), Gt = Gc + t * dz.tail(M);
            Eigen::VectorXd rt;
            dual_res(Ft, Gt, rt);
            if (rt.norm() < rn) {
                Fc = Ft;
                Gc = Gt;
                r = rt;
                rn = rt.norm();
                ok = true;
                break;
            }
            t *= 0.5;
        }
        if (!ok) break;
    }

    // level from the dual functional at the sharpened critical point
    {
        Eigen::VectorXd Fn = b.phi * Fc, Gn = b.phi * Gc;
        double lf = (b.w.array() * wap.array() * Fn.array().abs().pow(g1)).sum();
        double lg = (b.w.array() * wbq.array() * Gn.array().abs().pow((e.q + 1.0) / e.q)).sum();
        double coupling = (Fc.array() * Gc.array() / b.lambda.array()).sum();
        res.c = e.p / (e.p + 1.0) * lf + e.q / (e.q + 1.0) * lg - coupling;
    }

    // recover (u, v) = (K g, K f); a primal polish absorbs the (spectrally
    // small) aliasing gap between the dual and primal Galerkin systems
    Field u = apply_inverse_laplacian(Field::from_coeff(basis, Gc));
    Field v = apply_inverse_laplacian(Field::from_coeff(basis, Fc));
    if (std::min(e.p, e.q) >= 1.0) newton_polish(u, v, e, cfg.tol * 1e-2);
    auto [ru, rv] = system_residuals(u, v, e);
    res.solution = {u, v, energy_direct(u, v, e), ru, rv, Framework::Dual};
    res.converged = ru + rv < cfg.tol * std::max(1.0, es_norm(u, 1.0)) && rn <= ntol;
    if (!res.converged && res.message.empty()) {
        char msg[120];
        std::snprintf(msg, sizeof(msg),
                      "dual stationarity residual %.3g above tolerance %.3g "
                      "(pair residual %.3g)", rn, ntol, ru + rv);
        res.message = msg;
    }
    return res;
}

FrameworkResult solve_inversion(const ExponentPair& e, BasisPtr basis, const SolverConfig& cfg) {
    e.validate();
    Classification cl = classify(e);
    if (!cl.H1)
        throw std::domain_error("solve_inversion requires H1 (subcritical): refused");
    if (cl.regime == Classification::Regime::Linear)
        throw std::domain_error(
            "solve_inversion refused for pq = 1: the problem degenerates to an eigenvalue "
            "problem (H1 holds but superlinearity/sublinearity fails)");

    FrameworkResult res;
    res.framework = Framework::Inversion;
    const Basis& b = *basis;
    const Eigen::VectorXd wa = b.weight_pow(e.alpha);
    const Eigen::VectorXd wb = b.weight_pow(e.beta);

    Field u = cfg.start.valid() ? cfg.start : phi1(basis);
    // normalize int |u|^{p+1} |x|^alpha = 1
    auto renorm = [&](Field& w) {
        double s = std::pow(lp_norm_pow(w, e.p + 1.0, e.alpha), 1.0 / (e.p + 1.0));
        w = Field::from_coeff(basis, w.coeff() / s);
    };
    renorm(u);

    double quotient_prev = 0.0;
    double sigma = 1.0;
    Field v;
    int it = 0;
    bool stationary = false;
    for (; it < cfg.max_iter; it++) {
        v = apply_inverse_laplacian(
            Field::from_nodal(basis, wa.cwiseProduct(power_nodal(u.nodal(), e.p))));
        Field t = apply_inverse_laplacian(
            Field::from_nodal(basis, wb.cwiseProduct(power_nodal(v.nodal(), e.q))));
        double s = std::pow(lp_norm_pow(t, e.p + 1.0, e.alpha), 1.0 / (e.p + 1.0));
        Field unew = Field::from_coeff(basis, t.coeff() / s);
        sigma = s;  // K(wb g(v)) = sigma * u at a fixed direction

        // embedding quotient in the substituted (always-integrable) form:
        // -Lap unew = wb |v|^{q-1} v / s
        double quotient =
            (b.w.array() * wb.array() * v.nodal().array().abs().pow(e.q + 1.0)).sum() /
            std::pow(s, (e.q + 1.0) / e.q);
        double dirchange = (unew.coeff() - u.coeff()).norm();
        res.trace.push_back({it, quotient, dirchange, s});
        u = unew;
        if (it > 0 && dirchange < 1e-14 * u.coeff().norm()) {
            stationary = true;
            break;
        }
        if (it > 5 && std::abs(quotient - quotient_prev) < 1e-15 * quotient && dirchange < 1e-12) {
            stationary = true;
            break;
        }
        quotient_prev = quotient;
    }
    res.iterations = it;
    res.alpha_pq = quotient_prev > 0.0 ? quotient_prev : 0.0;

    // amplitude fix: with K(wa f(u)) = vhat and K(wb g(vhat)) = sigma u, the pair
    // (a u, a^p vhat) with a^{1-pq} = sigma solves the system exactly
    Field vhat = apply_inverse_laplacian(
        Field::from_nodal(basis, wa.cwiseProduct(power_nodal(u.nodal(), e.p))));
    {
        Field t = apply_inverse_laplacian(
            Field::from_nodal(basis, wb.cwiseProduct(power_nodal(vhat.nodal(), e.q))));
        sigma = t.coeff().dot(u.coeff()) / u.coeff().squaredNorm();
        res.alpha_pq = (b.w.array() * wb.array() * vhat.nodal().array().abs().pow(e.q + 1.0)).sum() /
                       std::pow(sigma, (e.q + 1.0) / e.q);
    }
    double a = std::pow(sigma, 1.0 / (1.0 - e.p * e.q));
    double bamp = std::pow(a, e.p);
    Field U = Field::from_coeff(basis, a * u.coeff());
    Field V = Field::from_coeff(basis, bamp * vhat.coeff());

    // sign normalization: ground states are one-signed; report the positive one
    if (integral(U) < 0.0) {
        U = Field::from_coeff(basis, -U.coeff());
        V = Field::from_coeff(basis, -V.coeff());
    }

    auto [ru, rv] = system_residuals(U, V, e);
    res.solution = {U, V, energy_direct(U, V, e), ru, rv, Framework::Inversion};
    res.c = res.solution.energy;
    res.converged = stationary && ru + rv < cfg.tol * std::max(1.0, es_norm(U, 1.0));
    if (!res.converged)
        res.message = stationary ? "residual above tolerance at stationary direction"
                                 : "iteration cap reached before stagnation";
    return res;
}

FrameworkResult solve_ls_reduction(const ExponentPair& e, BasisPtr basis,
                                   const SolverConfig& cfg) {
    e.validate();
    Classification cl = classify(e);
    if (!cl.H4)
        throw std::domain_error(
            "solve_ls_reduction requires H4 (p, q > 1 and subcritical): refused");
    if (e.N >= 3) {
        double crit = (e.N + 2.0) / (e.N - 2.0);
        if (!(e.p < crit && e.q < crit))
            throw std::domain_error(
                "solve_ls_reduction requires both exponents H1-subcritical (H4'-type bound)");
    }
    const double lambda = cfg.lambda;
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");

    FrameworkResult res;
    res.framework = Framework::LSReduction;
    const Basis& b = *basis;
    const int M = b.M;

    Field w = cfg.start.valid() ? cfg.start : phi1(basis);
    w = Field::from_coeff(basis, w.coeff() / es_norm(w, 1.0));
    Field psi_warm;

    auto jval = [&](const Field& x) { return energy_reduced(x, e, lambda, &psi_warm, &psi_warm); };
    auto jgrad = [&](const Field& x) {
        return gradient_reduced(x, e, lambda, &psi_warm, &psi_warm);
    };
    auto at = [&](const Field& dir, double t) {
        return Field::from_coeff(basis, t * dir.coeff());
    };

    // maximize J_lambda(t w) over the ray: golden section on log t, then secant
    // polish on the directional derivative
    auto ray_max = [&](const Field& dir, double t_init) -> double {
        double lo = std::log(1e-4), hi = std::log(1e4);
        if (t_init > 0.0) {
            lo = std::log(t_init) - 1.5;
            hi = std::log(t_init) + 1.5;
        }
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a1 = hi - gr * (hi - lo), b1 = lo + gr * (hi - lo);
        double fa = jval(at(dir, std::exp(a1))), fb = jval(at(dir, std::exp(b1)));
        for (int k = 0; k < (t_init > 0.0 ? 12 : 48) && hi - lo > 1e-10; k++) {
            if (fa < fb) {
                lo = a1;
                a1 = b1;
                fa = fb;
                b1 = lo + gr * (hi - lo);
                fb = jval(at(dir, std::exp(b1)));
            } else {
                hi = b1;
                b1 = a1;
                fb = fa;
                a1 = hi - gr * (hi - lo);
                fa = jval(at(dir, std::exp(a1)));
            }
        }
        double t = std::exp(0.5 * (lo + hi));
        // secant on phi(t) = <grad J(t w), w>
        auto dphi = [&](double tt) { return jgrad(at(dir, tt)).coeff().dot(dir.coeff()); };
        double t0 = t * 0.995, t1 = t;
        double p0 = dphi(t0), p1 = dphi(t1);
        for (int k = 0; k < 10 && std::abs(p1) > 1e-10 * (1.0 + std::abs(p0)); k++) {
            if (p1 == p0) break;
            double tn = t1 - p1 * (t1 - t0) / (p1 - p0);
            if (!(tn > 0.2 * t1 && tn < 5.0 * t1)) break;
            t0 = t1;
            p0 = p1;
            t1 = tn;
            p1 = dphi(t1);
        }
        return t1;
    };

    double t_star = ray_max(w, -1.0);
    double m = jval(at(w, t_star));
    const double descend_tol = std::max(cfg.tol, 1e-6);
    double bb_step = 0.5;
    Eigen::VectorXd prev_d, prev_gr;
    double resid = 0.0;
    int it = 0;
    for (; it < cfg.max_outer; it++) {
        Field x = at(w, t_star);
        Field G = jgrad(x);
        resid = G.coeff().norm();
        res.trace.push_back({it, m, resid, bb_step});
        if (resid < descend_tol * std::max(1.0, t_star)) break;

        // H1-preconditioned envelope gradient of the ray maximum
        Eigen::VectorXd gr = t_star * G.coeff().cwiseQuotient(b.lambda);
        double s = bb_step;
        if (prev_d.size()) {
            Eigen::VectorXd sd = w.coeff() - prev_d, yg = gr - prev_gr;
            double denom = sd.dot(yg);
            if (denom > 0) s = std::min(std::max(sd.squaredNorm() / denom, 1e-6), 1e2);
        }
        prev_d = w.coeff();
        prev_gr = gr;

        bool accepted = false;
        for (int halve = 0; halve < 30; halve++) {
            Eigen::VectorXd cand = w.coeff() - s * gr;
            Field wc = Field::from_coeff(basis, cand);
            wc = Field::from_coeff(basis, wc.coeff() / es_norm(wc, 1.0));
            double tc = ray_max(wc, t_star);
            double mc = jval(at(wc, tc));
            if (mc < m) {
                w = wc;
                t_star = tc;
                m = mc;
                bb_step = s;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) break;
    }
    res.iterations = it;
    res.c = m;  // reduced-functional level at the Nehari minimizer

    // assemble (u, v) = (lambda x + Psi, x - Psi/lambda) and polish the pair
    Field x = at(w, t_star);
    Field psi = solve_inner_max(x, e, lambda, &psi_warm);
    Field u = Field::from_coeff(basis, lambda * x.coeff() + psi.coeff());
    Field v = Field::from_coeff(basis, x.coeff() - psi.coeff() / lambda);
    newton_polish(u, v, e, cfg.tol * 1e-2);
    if (integral(u) < 0.0) {
        u = Field::from_coeff(basis, -u.coeff());
        v = Field::from_coeff(basis, -v.coeff());
    }
    auto [ru, rv] = system_residuals(u, v, e);
    res.solution = {u, v, energy_direct(u, v, e), ru, rv, Framework::LSReduction};
    res.converged = ru + rv < cfg.tol * std::max(1.0, es_norm(u, 1.0)) &&
                    resid < descend_tol * std::max(1.0, t_star);
    if (!res.converged) res.message = "descent stalled above tolerance";
    return res;
}

std::vector<NehariRow> nehari_degeneracy_demo(const ExponentPair& e, const Field& u,
                                              const std::vector<double>& lambdas) {
    e.validate();
    if (!(e.p * e.q > 1.0))
        throw std::domain_error("degeneracy demo requires the superlinear regime pq > 1");
    const double A = lp_norm_pow(u, e.p + 1.0, e.alpha);
    const double B = lp_norm_pow(u, e.q + 1.0, e.beta);
    const double grad2 = es_norm(u, 1.0) * es_norm(u, 1.0);
    if (!(grad2 > 0.0)) throw std::invalid_argument("degeneracy demo requires u != 0");

    std::vector<NehariRow> rows;
    for (double lam : lambdas) {
        NehariRow row;
        row.lambda = lam;
        const double C = 2.0 * lam * grad2;
        auto h = [&](double t) {
            return std::pow(t, e.p - 1.0) * A + std::pow(t, e.q - 1.0) * std::pow(lam, e.q + 1.0) * B - C;
        };
        // bracket a root on a log grid, then bisect
        double lo = 0.0, hi = 0.0, hlo = 0.0;
        double prev_t = 1e-12, prev_h = h(prev_t);
        for (int k = 1; k <= 400; k++) {
            double t = 1e-12 * std::pow(10.0, 24.0 * k / 400.0);
            double ht = h(t);
            if (prev_h * ht <= 0.0) {
                lo = prev_t;
                hi = t;
                hlo = prev_h;
                break;
            }
            prev_t = t;
            prev_h = ht;
        }
        if (hi == 0.0) {
            rows.push_back(row);  // no admissible t for this lambda
            continue;
        }
        for (int k = 0; k < 200 && (hi - lo) > 1e-16 * hi; k++) {
            double mid = 0.5 * (lo + hi);
            if (hlo * h(mid) <= 0.0)
                hi = mid;
            else {
                lo = mid;
                hlo = h(mid);
            }
        }
        row.t = 0.5 * (lo + hi);
        row.identity_residual = std::abs(h(row.t));
        row.norm = row.t * std::sqrt(1.0 + lam * lam) * std::sqrt(grad2);
        row.ok = true;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace hamsys
