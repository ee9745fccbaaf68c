#pragma once

// Linear-algebra primitives behind the extremality theory: convex-hull
// interior tests, weak independence of subspace families, and the space of
// admissible hermitian perturbations.

#include "herglotz/linalg.hpp"

#include <optional>
#include <span>
#include <vector>

namespace herglotz {

struct GeometryConfig {
    /// Relative singular-value threshold for rank decisions.
    double rank_rtol = kDefaultRankRtol;
    /// Absolute tolerance for residual and structural checks.
    double tol = 1e-9;
};

/// The values (phi_1(x), ..., phi_m(x)) attached to a support point.
class ConstraintVector {
public:
    ConstraintVector() = default;
    explicit ConstraintVector(RVector entries);
    ConstraintVector(std::initializer_list<double> entries);

    [[nodiscard]] Eigen::Index size() const { return entries_.size(); }
    [[nodiscard]] const RVector& entries() const { return entries_; }
    double operator[](Eigen::Index i) const { return entries_(i); }

    friend bool operator==(const ConstraintVector& a, const ConstraintVector& b) {
        return a.entries_.size() == b.entries_.size() && a.entries_ == b.entries_;
    }

private:
    RVector entries_;
};

/// A subspace of C^N stored as an orthonormal basis and its projector.
class Subspace {
public:
    /// Certify a hermitian idempotent; throws ShapeError otherwise or if P = 0.
    static Subspace from_projector(const CMatrix& p, double tol = 1e-9);
    /// Orthonormalize the columns (numerical column space).
    static Subspace span(const CMatrix& columns, double rtol = kDefaultRankRtol);
    /// Range of a PSD weight.
    static Subspace range_of(const CMatrix& w, double rtol = kDefaultRankRtol);

    [[nodiscard]] Eigen::Index ambient_dim() const { return basis_.rows(); }
    [[nodiscard]] Eigen::Index dim() const { return basis_.cols(); }
    [[nodiscard]] const CMatrix& basis() const { return basis_; }
    [[nodiscard]] CMatrix projector() const { return basis_ * basis_.adjoint(); }

private:
    explicit Subspace(CMatrix basis) : basis_(std::move(basis)) {}
    CMatrix basis_;
};

/// Hermitian tuple (T_1, ..., T_n), each block living on its subspace.
struct PerturbationTuple {
    std::vector<CMatrix> blocks;

    /// Frobenius norm of the stacked tuple.
    [[nodiscard]] double norm() const;
};

/// True iff the only real c with sum c_j = 0 and sum c_j u_j = 0 is c = 0,
/// i.e. the stacked (m+1) x n matrix [u_j; 1] has numerical rank n.
/// Requires positive weights summing to 1 with sum w_j u_j = 0.
bool zero_interior_convex_hull(std::span<const ConstraintVector> vectors,
                               std::span<const double> weights,
                               const GeometryConfig& cfg = {});

/// Unique strictly positive solution of [u_j; 1] lambda = [0; 1], if any.
std::optional<std::vector<double>> solve_convex_weights(std::span<const ConstraintVector> vectors,
                                                        const GeometryConfig& cfg = {});

/// Complex tuples living on the subspaces with sum T_j = 0 must vanish.
bool weakly_independent(std::span<const Subspace> subspaces, const GeometryConfig& cfg = {});

/// As above with the extra hypotheses sum_j phi_i(x_j) T_j = 0.
bool phi_constrained_weakly_independent(std::span<const Subspace> subspaces,
                                        std::span<const ConstraintVector> phis,
                                        const GeometryConfig& cfg = {});

/// Orthonormal basis (in the isometric hermitian coordinates) of the real
/// space of hermitian tuples living on the subspaces and satisfying
/// sum T_j = 0, sum phi_i T_j = 0. Empty iff the family is phi-constrained
/// weakly independent.
std::vector<PerturbationTuple> admissible_perturbation_space(std::span<const Subspace> subspaces,
                                                             std::span<const ConstraintVector> phis,
                                                             const GeometryConfig& cfg = {});

/// Real (m+1)N^2 x sum d_j^2 matrix of the constraints sum T_j = 0,
/// sum phi_i T_j = 0, with each T_j = U_j A_j U_j^* parametrized by the
/// hermitian coordinates of A_j. Its null space is the admissible space.
RMatrix admissible_constraint_matrix(std::span<const Subspace> subspaces,
                                     std::span<const ConstraintVector> phis);

}  // namespace herglotz
