#pragma once

// Finitely supported positive matrix measures subject to linear constraints:
// membership, extremality with certificates, face splitting, Choquet-type
// decomposition into extreme points, and the standard constructors of
// extreme measures.

#include "herglotz/constraint_geometry.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace herglotz {

struct MeasureConfig {
    GeometryConfig geometry{};
    /// Weights are PSD if every eigenvalue is >= -psd_rtol * ||W||.
    double psd_rtol = 1e-10;
    /// Atoms with ||W|| at or below this are dropped before extremality tests.
    double prune_tol = 1e-12;

    [[nodiscard]] double tol() const { return geometry.tol; }
};

struct Atom {
    std::string id;
    std::optional<int> tag;
    ConstraintVector phi;
    CMatrix weight;
};

struct DiscreteMatrixMeasure {
    int N = 1;
    int m = 0;
    std::vector<Atom> atoms;

    /// Throws ShapeError on inconsistent sizes, duplicate ids, non-finite data.
    void check_shape() const;
    /// Replace each weight by its hermitian part.
    void symmetrize();
    /// Atom with the given id, or nullptr.
    [[nodiscard]] const Atom* find(const std::string& id) const;
    /// Sum of ranks of the weights.
    [[nodiscard]] std::size_t total_rank(double rtol = kDefaultRankRtol) const;
};

struct MembershipReport {
    bool member = false;
    bool psd_ok = false;
    /// max(0, -lambda_min(W_j)) per atom.
    std::vector<double> psd_residuals;
    /// ||sum W_j - I||.
    double mass_residual = 0.0;
    /// ||sum phi_i(x_j) W_j|| for i = 1..m.
    std::vector<double> constraint_residuals;
};

struct ExtremalityReport {
    bool is_extreme = false;
    /// Indexed like the input atoms (zero blocks on pruned atoms).
    std::optional<PerturbationTuple> witness;
    /// Number of atoms with nonzero weight.
    int support_count = 0;
    /// (m+1) N^2.
    int support_bound = 0;
    bool bound_ok = false;
    /// Dimension of the admissible perturbation space, when it was computed.
    std::optional<int> perturbation_dim;
};

struct SplitResult {
    DiscreteMatrixMeasure plus;
    DiscreteMatrixMeasure minus;
    /// mu = lambda * plus + (1 - lambda) * minus.
    double lambda = 0.5;
    double eps_plus = 0.0;
    double eps_minus = 0.0;
};

struct ChoquetTerm {
    double coefficient = 0.0;
    DiscreteMatrixMeasure measure;
};

struct ChoquetDecomposition {
    std::vector<ChoquetTerm> terms;
    int depth = 0;
};

struct BoundaryMass {
    int tag = 0;
    CMatrix mass;
    bool invertible = false;
};

MembershipReport validate_membership(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg = {});

/// Throws PreconditionError with a residual summary unless mu is a member.
void require_member(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg = {});

/// Copy of mu without atoms whose weight norm is <= prune_tol.
DiscreteMatrixMeasure pruned(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg = {});

ExtremalityReport is_extreme(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg = {});

/// Walk mu +/- eps * t to the PSD boundary in both directions. The tuple
/// is indexed like mu.atoms.
SplitResult split_along(const DiscreteMatrixMeasure& mu, const PerturbationTuple& t,
                        const MeasureConfig& cfg = {});

/// Decompose a member into a convex combination of extreme members.
/// Throws ToleranceError if more than max_depth splits are needed.
ChoquetDecomposition choquet_decompose(const DiscreteMatrixMeasure& mu, int max_depth = 10000,
                                       const MeasureConfig& cfg = {});

/// sum_k coefficient_k * measure_k, merged by point id.
DiscreteMatrixMeasure recombine(const ChoquetDecomposition& d);

/// Largest atomwise ||W_a - W_b|| over the union of ids.
double atomwise_distance(const DiscreteMatrixMeasure& a, const DiscreteMatrixMeasure& b);

/// sum_k mu_k L_k for scalar extremes mu_k and PSD L_k summing to I.
DiscreteMatrixMeasure build_special(std::span<const DiscreteMatrixMeasure> scalar_extremes,
                                    std::span<const CMatrix> weights, const MeasureConfig& cfg = {});

/// sum_k mu_k P_k for a complete family of rank-one orthogonal projections.
DiscreteMatrixMeasure build_spectral(std::span<const CMatrix> projections,
                                     std::span<const DiscreteMatrixMeasure> scalar_extremes,
                                     const MeasureConfig& cfg = {});

/// Per-tag weight sums with an invertibility verdict (sigma_min > tol).
/// Tags listed in expected_tags are reported even when no atom carries them.
std::vector<BoundaryMass> boundary_component_mass(const DiscreteMatrixMeasure& mu,
                                                  std::span<const int> expected_tags = {},
                                                  const MeasureConfig& cfg = {});

}  // namespace herglotz
