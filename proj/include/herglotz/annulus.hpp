#pragma once

// Function theory on the annulus A_q = {q < |z| < 1}: Laurent-series
// Dirichlet solver, Poisson kernels relative to harmonic measure at t0, the
// conjugate-period constraint phi_1, and the extremal Herglotz functions
// built from one point on each boundary circle.
//
// Boundary densities are taken with respect to d(theta)/(2 pi) on each
// circle. Kernels of boundary point masses are evaluated in closed form by
// summing the geometric series of every Laurent mode (a method-of-images
// sum that converges like q^(2j)), so no mode truncation enters f_x.

#include "herglotz/matrix_measure.hpp"

#include <span>
#include <utility>
#include <vector>

namespace herglotz {

enum class Component { Outer = 0, Inner = 1 };

struct BoundaryPoint {
    Component component = Component::Outer;
    double angle = 0.0;  // in [0, 2 pi)

    /// Wraps the angle into [0, 2 pi).
    static BoundaryPoint make(Component c, double angle);
};

struct AnnulusConfig {
    double q = 0.5;
    cplx t0{0.70710678118654752, 0.0};
    int modes = 64;   // Laurent modes -M..M
    int grid = 256;   // quadrature nodes per circle
};

class Annulus {
public:
    /// Throws ShapeError unless 0 < q < 1, q < |t0| < 1, M >= 8, grid >= 8.
    explicit Annulus(const AnnulusConfig& cfg = {});

    [[nodiscard]] double q() const { return cfg_.q; }
    [[nodiscard]] double log_q() const { return log_q_; }
    [[nodiscard]] cplx t0() const { return cfg_.t0; }
    [[nodiscard]] int modes() const { return cfg_.modes; }
    [[nodiscard]] int grid() const { return cfg_.grid; }
    [[nodiscard]] const AnnulusConfig& config() const { return cfg_; }

    [[nodiscard]] bool contains(cplx z) const;
    [[nodiscard]] bool in_closure(cplx z, double slack = 1e-14) const;
    [[nodiscard]] cplx location(const BoundaryPoint& x) const;

    /// l-th equispaced quadrature node on a circle.
    [[nodiscard]] BoundaryPoint node(Component c, int l) const;

    /// Holomorphic (multivalued through Log z) G_x with Re G_x(z) the
    /// Poisson density of the point x at z.
    [[nodiscard]] cplx herglotz_kernel(const BoundaryPoint& x, cplx z) const;
    [[nodiscard]] double poisson_density(const BoundaryPoint& x, cplx z) const;
    /// Density of harmonic measure at t0.
    [[nodiscard]] double harmonic_density(const BoundaryPoint& x) const;
    /// P_z(x) = density(z, x) / density(t0, x); P_t0 = 1.
    [[nodiscard]] double poisson_kernel(cplx z, const BoundaryPoint& x) const;

private:
    AnnulusConfig cfg_;
    double log_q_;
    int image_terms_;
};

/// Fourier coefficients hat{u}_n, n = -M..M, of real boundary data with
/// respect to d(theta)/(2 pi); stored at index n + M.
struct FourierData {
    int M = 0;
    std::vector<cplx> coeffs;

    [[nodiscard]] cplx operator[](int n) const;
    static FourierData zeros(int M);
    /// Discrete Fourier coefficients of equispaced samples theta_l = 2 pi l / K.
    static FourierData from_samples(std::span<const double> samples, int M);
};

/// h(z) = a0 + b0 log|z| + sum_{n != 0} Re(c_n z^n).
struct LaurentHarmonic {
    double a0 = 0.0;
    double b0 = 0.0;
    int M = 0;
    std::vector<cplx> c;  // index n + M, c[M] unused

    [[nodiscard]] cplx coefficient(int n) const;
    [[nodiscard]] double operator()(cplx z) const;
};

/// Mode-by-mode solution of the Dirichlet problem with the given traces on
/// |z| = 1 and |z| = q.
LaurentHarmonic dirichlet_solve(const FourierData& outer, const FourierData& inner, double q, int M);

/// Period of the harmonic conjugate around the hole: 2 pi b0.
double conjugate_period(const LaurentHarmonic& h);

/// Weights r_l with u(z) ~ sum_l r_l u(zeta_l): outer nodes first, then
/// inner nodes, from the M-mode Dirichlet solve of each Lagrange datum.
RVector poisson_matrix_row(const Annulus& a, cplx z);

/// phi_1(x): conjugate period of z -> P_z(x). Positive on the outer circle,
/// negative on the inner one.
double phi_eval(const Annulus& a, const BoundaryPoint& x);

/// Two boundary points (one per circle) with their extremal weights.
struct ExtremalPair {
    BoundaryPoint outer;
    BoundaryPoint inner;
    double w0 = 0.0;
    double w1 = 0.0;
};

/// Unique positive weights with w0 phi(x0) + w1 phi(x1) = 0, w0 + w1 = 1.
std::pair<double, double> extremal_weights(const Annulus& a, const BoundaryPoint& x0, const BoundaryPoint& x1);
ExtremalPair make_extremal_pair(const Annulus& a, double outer_angle, double inner_angle);

/// Boundary atom id ("outer:<angle>" / "inner:<angle>") and its inverse.
std::string boundary_id(const BoundaryPoint& x);
BoundaryPoint parse_boundary_id(const std::string& id);

/// N = 1, m = 1 measure w0 delta_x0 + w1 delta_x1 with tags 0 / 1.
DiscreteMatrixMeasure extremal_measure(const Annulus& a, const ExtremalPair& x);

/// f_x at an interior point.
cplx extremal_herglotz(const Annulus& a, const ExtremalPair& x, cplx z);
/// Boundary value of f_x at a boundary point different from the atoms.
cplx extremal_herglotz_boundary(const Annulus& a, const ExtremalPair& x, const BoundaryPoint& zeta);

/// Matrix Herglotz function with Re F = integral of P_z against the
/// boundary measure mu (atom ids from boundary_id) and Im F(t0) = 0.
CMatrix herglotz_from_measure(const Annulus& a, const DiscreteMatrixMeasure& mu, cplx z);

}  // namespace herglotz
