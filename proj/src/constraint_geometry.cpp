#include "herglotz/constraint_geometry.hpp"

#include "herglotz/errors.hpp"

#include <cmath>
#include <string>

namespace herglotz {

ConstraintVector::ConstraintVector(RVector entries) : entries_(std::move(entries)) {
    if (!entries_.allFinite()) throw ShapeError("ConstraintVector: non-finite entry");
}

ConstraintVector::ConstraintVector(std::initializer_list<double> entries)
    : entries_(static_cast<Eigen::Index>(entries.size())) {
    Eigen::Index i = 0;
    for (double v : entries) entries_(i++) = v;
    if (!entries_.allFinite()) throw ShapeError("ConstraintVector: non-finite entry");
}

Subspace Subspace::from_projector(const CMatrix& p, double tol) {
    if (p.rows() != p.cols() || p.rows() == 0) throw ShapeError("Subspace: projector must be square and non-empty");
    if ((p - p.adjoint()).norm() > tol) throw ShapeError("Subspace: projector is not hermitian");
    if ((p * p - p).norm() > tol) throw ShapeError("Subspace: projector is not idempotent");
    const double tr = p.trace().real();
    const auto dim = static_cast<Eigen::Index>(std::lround(tr));
    if (dim == 0) throw ShapeError("Subspace: zero projector");
    // Eigenvectors for the top `dim` eigenvalues (all equal to 1).
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(p));
    return Subspace(es.eigenvectors().rightCols(dim).rowwise().reverse().eval());
}

Subspace Subspace::span(const CMatrix& columns, double rtol) {
    if (columns.rows() == 0) throw ShapeError("Subspace: empty ambient space");
    Eigen::JacobiSVD<CMatrix> svd(columns, Eigen::ComputeThinU);
    const RVector& sv = svd.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(0) > 0.0 && sv(i) > rtol * sv(0)) ++r;
    }
    if (r == 0) throw ShapeError("Subspace: spanning set is zero");
    return Subspace(svd.matrixU().leftCols(r));
}

Subspace Subspace::range_of(const CMatrix& w, double rtol) {
    CMatrix b = psd_range_basis(w, rtol);
    if (b.cols() == 0) throw ShapeError("Subspace: zero weight has no range");
    return Subspace(std::move(b));
}

double PerturbationTuple::norm() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
}

namespace {

Eigen::Index common_m(std::span<const ConstraintVector> vectors) {
    if (vectors.empty()) throw ShapeError("empty list of constraint vectors");
    const Eigen::Index m = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != m) throw ShapeError("constraint vectors have different lengths");
    }
    return m;
}

Eigen::Index common_n(std::span<const Subspace> subspaces) {
    if (subspaces.empty()) throw ShapeError("empty list of subspaces");
    const Eigen::Index n = subspaces.front().ambient_dim();
    for (const auto& s : subspaces) {
        if (s.ambient_dim() != n) throw ShapeError("subspaces live in different ambient spaces");
    }
    return n;
}

// Rows: u_j entries, then a row of ones.
RMatrix stacked(std::span<const ConstraintVector> vectors, Eigen::Index m) {
    const auto n = static_cast<Eigen::Index>(vectors.size());
    RMatrix a(m + 1, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a.col(j).head(m) = vectors[static_cast<std::size_t>(j)].entries();
        a(m, j) = 1.0;
    }
    return a;
}

// Complex vec of every u_a u_b^* for the basis of each subspace, weighted by
// (1, phi_1, ..., phi_m) in stacked row blocks.
CMatrix complex_constraint_matrix(std::span<const Subspace> subspaces,
                                  std::span<const ConstraintVector> phis, Eigen::Index m) {
    const Eigen::Index n = common_n(subspaces);
    Eigen::Index cols = 0;
    for (const auto& s : subspaces) cols += s.dim() * s.dim();
    CMatrix a = CMatrix::Zero((m + 1) * n * n, cols);
    Eigen::Index c = 0;
    for (std::size_t j = 0; j < subspaces.size(); ++j) {
        const CMatrix& u = subspaces[j].basis();
        for (Eigen::Index p = 0; p < u.cols(); ++p) {
            for (Eigen::Index r = 0; r < u.cols(); ++r, ++c) {
                const CMatrix t = u.col(p) * u.col(r).adjoint();
                const Eigen::Map<const CVector> vec(t.data(), n * n);
                a.col(c).head(n * n) = vec;
                for (Eigen::Index i = 0; i < m; ++i) {
                    a.col(c).segment((i + 1) * n * n, n * n) = vec * phis[j][i];
                }
            }
        }
    }
    return a;
}

}  // namespace

bool zero_interior_convex_hull(std::span<const ConstraintVector> vectors,
                               std::span<const double> weights, const GeometryConfig& cfg) {
    const Eigen::Index m = common_m(vectors);
    if (weights.size() != vectors.size()) throw ShapeError("zero_interior_convex_hull: weight count mismatch");
    double total = 0.0;
    RVector mean = RVector::Zero(m);
    double scale = 1.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (!(weights[j] > 0.0)) {
            throw PreconditionError("zero_interior_convex_hull: weights must be strictly positive");
        }
        total += weights[j];
        mean += weights[j] * vectors[j].entries();
        if (m > 0) scale = std::max(scale, vectors[j].entries().cwiseAbs().maxCoeff());
    }
    if (std::abs(total - 1.0) > cfg.tol) {
        throw PreconditionError("zero_interior_convex_hull: weights do not sum to 1");
    }
    if (m > 0 && mean.cwiseAbs().maxCoeff() > cfg.tol * scale) {
        throw PreconditionError("zero_interior_convex_hull: weights do not represent 0");
    }
    const RMatrix a = stacked(vectors, m);
    return numerical_rank(a, cfg.rank_rtol) == vectors.size();
}

std::optional<std::vector<double>> solve_convex_weights(std::span<const ConstraintVector> vectors,
                                                        const GeometryConfig& cfg) {
    const Eigen::Index m = common_m(vectors);
    const RMatrix a = stacked(vectors, m);
    const auto n = static_cast<Eigen::Index>(vectors.size());
    if (numerical_rank(a, cfg.rank_rtol) != static_cast<std::size_t>(n)) return std::nullopt;
    RVector b = RVector::Zero(m + 1);
    b(m) = 1.0;
    const RVector lambda = a.colPivHouseholderQr().solve(b);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a * lambda - b).norm() > cfg.tol * scale) return std::nullopt;
    const double lmax = lambda.cwiseAbs().maxCoeff();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!(lambda(j) > cfg.rank_rtol * lmax)) return std::nullopt;
        out[static_cast<std::size_t>(j)] = lambda(j);
    }
    return out;
}

bool weakly_independent(std::span<const Subspace> subspaces, const GeometryConfig& cfg) {
    const CMatrix a = complex_constraint_matrix(subspaces, {}, 0);
    return numerical_rank(a, cfg.rank_rtol) == static_cast<std::size_t>(a.cols());
}

bool phi_constrained_weakly_independent(std::span<const Subspace> subspaces,
                                        std::span<const ConstraintVector> phis,
                                        const GeometryConfig& cfg) {
    if (phis.size() != subspaces.size()) throw ShapeError("phi_constrained_weakly_independent: list lengths differ");
    const Eigen::Index m = common_m(phis);
    const CMatrix a = complex_constraint_matrix(subspaces, phis, m);
    return numerical_rank(a, cfg.rank_rtol) == static_cast<std::size_t>(a.cols());
}

RMatrix admissible_constraint_matrix(std::span<const Subspace> subspaces,
                                     std::span<const ConstraintVector> phis) {
    if (phis.size() != subspaces.size()) throw ShapeError("admissible_constraint_matrix: list lengths differ");
    const Eigen::Index m = common_m(phis);
    const Eigen::Index n = common_n(subspaces);
    const Eigen::Index nn = n * n;
    Eigen::Index cols = 0;
    for (const auto& s : subspaces) cols += s.dim() * s.dim();
    RMatrix a = RMatrix::Zero((m + 1) * nn, cols);
    Eigen::Index c = 0;
    for (std::size_t j = 0; j < subspaces.size(); ++j) {
        const CMatrix& u = subspaces[j].basis();
        const Eigen::Index d = u.cols();
        for (Eigen::Index k = 0; k < d * d; ++k, ++c) {
            const CMatrix t = u * coords_to_hermitian(RVector::Unit(d * d, k), d) * u.adjoint();
            const RVector x = hermitian_to_coords(t);
            a.col(c).head(nn) = x;
            for (Eigen::Index i = 0; i < m; ++i) a.col(c).segment((i + 1) * nn, nn) = phis[j][i] * x;
        }
    }
    return a;
}

std::vector<PerturbationTuple> admissible_perturbation_space(std::span<const Subspace> subspaces,
                                                             std::span<const ConstraintVector> phis,
                                                             const GeometryConfig& cfg) {
    const RMatrix a = admissible_constraint_matrix(subspaces, phis);
    const RMatrix ker = null_space(a, cfg.rank_rtol);
    std::vector<PerturbationTuple> out;
    out.reserve(static_cast<std::size_t>(ker.cols()));
    for (Eigen::Index k = 0; k < ker.cols(); ++k) {
        PerturbationTuple t;
        Eigen::Index off = 0;
        for (const auto& s : subspaces) {
            const Eigen::Index d = s.dim();
            const CMatrix& u = s.basis();
            t.blocks.push_back(u * coords_to_hermitian(ker.col(k).segment(off, d * d), d) * u.adjoint());
            off += d * d;
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace herglotz
