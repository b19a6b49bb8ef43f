#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

// Model domains, Dirichlet eigenbases and quadrature.  Everything downstream
// (functionals, solvers, symmetrization) works on Basis/Field objects built here.

namespace hamsys {

struct Domain {
    enum class Kind { Interval, Rectangle, Disk };

    Kind kind = Kind::Interval;
    double L1 = 0.0;   // interval length, or rectangle side along x
    double L2 = 0.0;   // rectangle side along y
    double R = 0.0;    // disk radius
    int N = 1;         // spatial dimension

    static Domain interval(double L);
    static Domain rectangle(double a, double b);
    static Domain disk(double radius);

    std::string name() const;
    bool same(const Domain& o) const;
};

// Bookkeeping for one eigenmode.  For the interval only `k` is used; for the
// rectangle (k, m) are the sine indices in x and y; for the disk m is the
// angular index, k the radial index and trig selects cos (0) or sin (1).
struct ModeInfo {
    double lambda = 0.0;
    int m = 0;
    int k = 0;
    int trig = 0;
};

class Basis {
public:
    // Build the first M Dirichlet eigenmodes, globally sorted by eigenvalue
    // (ties on the disk broken by angular index, sin before cos).
    static std::shared_ptr<const Basis> build(const Domain& dom, int M);
    // Angular-average (m = 0) subspace of the disk; used for radial-constrained runs.
    static std::shared_ptr<const Basis> build_disk_radial(double radius, int M);

    Domain domain;
    int M = 0;
    bool radial_only = false;        // disk basis restricted to m = 0

    std::vector<ModeInfo> modes;     // size M, lambda ascending
    Eigen::VectorXd lambda;          // eigenvalues, same order

    // Quadrature: nodes (Nq x dim), positive weights, |x| at each node.
    Eigen::MatrixXd nodes;
    Eigen::VectorXd w;
    Eigen::VectorXd radius;
    // Tabulated eigenfunctions at the quadrature nodes, Nq x M.
    Eigen::MatrixXd phi;

    // Boundary trace data for the Pohozaev check: outward normal derivative of
    // each mode at boundary quadrature nodes (Nb x M) with surface weights and
    // the support function x . nu of the boundary point.
    Eigen::MatrixXd dnu;
    Eigen::VectorXd bw;
    Eigen::VectorXd bxnu;

    // Polar grid structure (disk only): node index = ir * ntheta + itheta.
    int nr = 0;
    int ntheta = 0;

    int nq() const { return static_cast<int>(w.size()); }
    // Pointwise eigenfunction evaluation (used by polarization with reflected
    // points that fall off the quadrature grid).
    double eval_mode(int n, double x, double y = 0.0) const;
    // |x|^gamma at the quadrature nodes.
    Eigen::VectorXd weight_pow(double gamma) const;

private:
    Basis() = default;
    void build_interval(double L, int M);
    void build_rectangle(double a, double b, int M);
    void build_disk(double radius, int M, bool only_radial);
    // Fine radial tables for fast Bessel evaluation off the grid (disk only).
    std::vector<Eigen::VectorXd> radial_table;
    std::vector<Eigen::VectorXd> radial_table_d2;  // spline second derivatives
    double radial_h = 0.0;
    double eval_radial(int n, double r) const;
};

using BasisPtr = std::shared_ptr<const Basis>;

// A scalar function held both as coefficients and as cached nodal values.
// Fields are immutable: every constructor synthesizes the cache once.
class Field {
public:
    Field() = default;
    static Field from_coeff(BasisPtr basis, Eigen::VectorXd coeff);
    // L2 projection of nodal data followed by resynthesis (keeps the invariant
    // nodal == phi * coeff).
    static Field from_nodal(BasisPtr basis, const Eigen::VectorXd& nodal);
    // Keeps the given nodal values verbatim alongside their L2 projection.
    // Used by the pointwise symmetrization transforms, whose outputs are only
    // band-limited up to the resolution of the data; for resolved inputs the
    // cache still matches the synthesis.
    static Field from_nodal_exact(BasisPtr basis, Eigen::VectorXd nodal);
    static Field zero(BasisPtr basis);

    const BasisPtr& basis() const { return basis_; }
    const Eigen::VectorXd& coeff() const { return coeff_; }
    const Eigen::VectorXd& nodal() const { return nodal_; }
    bool valid() const { return basis_ != nullptr; }

    double eval(double x, double y = 0.0) const;

private:
    BasisPtr basis_;
    Eigen::VectorXd coeff_;
    Eigen::VectorXd nodal_;
};

// K = (-Laplace)^{-1}: divide coefficients by the eigenvalues.
Field apply_inverse_laplacian(const Field& f);
// A^s = (-Laplace)^{s/2}: scale coefficients by lambda^{s/2}; negative s inverts.
Field apply_frac(const Field& f, double s);

// integral of |f|^r * |x|^gamma over the domain (gamma > -N for integrability).
double lp_norm_pow(const Field& f, double r, double gamma = 0.0);
double lp_norm(const Field& f, double r, double gamma = 0.0);
// ||A^s f||_2, so s = 1 is the H^1_0 seminorm.
double es_norm(const Field& f, double s);
// Dirichlet pairing, computed spectrally as sum lambda_n a_n b_n.
double dirichlet_pairing(const Field& a, const Field& b);
double l2_inner(const Field& a, const Field& b);
double integral(const Field& f);
double integral_nodal(const Basis& basis, const Eigen::VectorXd& nodal);

// Project arbitrary nodal data onto the basis (coefficients only).
Eigen::VectorXd project_nodal(const Basis& basis, const Eigen::VectorXd& nodal);

// Gauss-Legendre rule on [a, b] (Newton on the Legendre recurrence).
void gauss_legendre(int n, double a, double b, Eigen::VectorXd& x, Eigen::VectorXd& wts);

// k-th positive zero of the Bessel function J_m, k >= 1, to ~1e-13.
double bessel_zero(int m, int k);

}  // namespace hamsys
