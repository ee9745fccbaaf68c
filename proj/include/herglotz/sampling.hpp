#pragma once

// Seeded random instances: members, scalar extremes and point pools. Used
// by the sweep command and by the test suites.

#include "herglotz/matrix_measure.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace herglotz::sampling {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    bool coin(double p = 0.5) { return uniform() < p; }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline CMatrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    CMatrix a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
    }
    return a;
}

inline CMatrix random_unitary(Rng& rng, Eigen::Index n) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex(rng, n, n));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

/// Random PSD matrix of the given rank with unit-scale eigenvalues.
inline CMatrix random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank) {
    const CMatrix g = random_complex(rng, n, rank);
    return g * g.adjoint();
}

/// Random matrix with spectral norm exactly `norm`.
inline CMatrix random_contraction(Rng& rng, Eigen::Index n, double norm) {
    const CMatrix a = random_complex(rng, n, n);
    return a * (norm / spectral_norm(a));
}

/// A finite set X of labelled points with constraint values.
struct PointPool {
    int m = 0;
    std::vector<std::string> ids;
    std::vector<ConstraintVector> phis;
};

inline PointPool make_pool(Rng& rng, int m, int size, const std::string& prefix = "x") {
    PointPool p{m, {}, {}};
    for (int k = 0; k < size; ++k) {
        RVector v(m);
        for (int i = 0; i < m; ++i) v(i) = rng.normal();
        p.ids.push_back(prefix + std::to_string(k));
        p.phis.emplace_back(v);
    }
    return p;
}

/// Scalar extreme measure supported on m+1 pool points drawn from the
/// candidates list (all points when empty). Returns false if none found.
inline bool random_scalar_extreme(Rng& rng, const PointPool& pool, DiscreteMatrixMeasure& out,
                                  std::vector<int> candidates = {}) {
    if (candidates.empty()) {
        for (int k = 0; k < static_cast<int>(pool.ids.size()); ++k) candidates.push_back(k);
    }
    const int need = pool.m + 1;
    if (static_cast<int>(candidates.size()) < need) return false;
    for (int attempt = 0; attempt < 500; ++attempt) {
        std::shuffle(candidates.begin(), candidates.end(), rng.engine());
        std::vector<ConstraintVector> u;
        for (int k = 0; k < need; ++k) u.push_back(pool.phis[static_cast<std::size_t>(candidates[static_cast<std::size_t>(k)])]);
        const auto w = solve_convex_weights(u);
        if (!w) continue;
        // Avoid nearly degenerate weights, which make tolerances meaningless.
        if (*std::min_element(w->begin(), w->end()) < 1e-3) continue;
        out = DiscreteMatrixMeasure{1, pool.m, {}};
        for (int k = 0; k < need; ++k) {
            const auto idx = static_cast<std::size_t>(candidates[static_cast<std::size_t>(k)]);
            out.atoms.push_back(Atom{pool.ids[idx], std::nullopt, pool.phis[idx],
                                     CMatrix::Constant(1, 1, (*w)[static_cast<std::size_t>(k)])});
        }
        return true;
    }
    return false;
}

/// Member of C(X, N, phi) with n atoms: W_j = S^-1/2 A_j S^-1/2 for random PSD
/// A_j (commuting when `commuting`), and phi drawn from the real relations
/// sum c_j W_j = 0. Returns false when the relations leave fewer than m
/// dimensions.
inline bool random_member(Rng& rng, int N, int m, int n, bool commuting, DiscreteMatrixMeasure& out,
                          const std::string& prefix = "p") {
    std::vector<CMatrix> a;
    const CMatrix u = random_unitary(rng, N);
    for (int j = 0; j < n; ++j) {
        if (commuting) {
            RVector d(N);
            for (int i = 0; i < N; ++i) d(i) = rng.coin(0.7) ? rng.uniform(0.2, 1.0) : 0.0;
            if (d.maxCoeff() == 0.0) d(rng.integer(0, N - 1)) = 1.0;
            a.push_back(u * d.cast<cplx>().asDiagonal() * u.adjoint());
        } else {
            a.push_back(random_psd(rng, N, rng.integer(1, N)));
        }
    }
    CMatrix s = CMatrix::Zero(N, N);
    for (const auto& x : a) s += x;
    if (min_eigenvalue(s) < 1e-6) return false;
    const CMatrix r = pd_inv_sqrt(s);
    std::vector<CMatrix> w;
    for (const auto& x : a) w.push_back(hermitian_part(CMatrix(r * x * r)));

    RMatrix map(N * N, n);
    for (int j = 0; j < n; ++j) map.col(j) = hermitian_to_coords(w[static_cast<std::size_t>(j)]);
    const RMatrix rel = null_space(map, 1e-10);
    if (rel.cols() < m) return false;

    RMatrix phi = RMatrix::Zero(n, m);
    for (int i = 0; i < m; ++i) {
        for (Eigen::Index k = 0; k < rel.cols(); ++k) phi.col(i) += rng.normal() * rel.col(k);
        phi.col(i) /= phi.col(i).cwiseAbs().maxCoeff();
    }
    out = DiscreteMatrixMeasure{N, m, {}};
    for (int j = 0; j < n; ++j) {
        out.atoms.push_back(Atom{prefix + std::to_string(j), std::nullopt, ConstraintVector(RVector(phi.row(j).transpose())),
                                 w[static_cast<std::size_t>(j)]});
    }
    return true;
}

/// Convex combination of two measures, merged by point id.
inline DiscreteMatrixMeasure mixture(const DiscreteMatrixMeasure& a, const DiscreteMatrixMeasure& b, double lambda) {
    ChoquetDecomposition d;
    d.terms.push_back(ChoquetTerm{lambda, a});
    d.terms.push_back(ChoquetTerm{1.0 - lambda, b});
    return recombine(d);
}

/// Conjugate every weight by u.
inline DiscreteMatrixMeasure conjugated(const DiscreteMatrixMeasure& mu, const CMatrix& u) {
    DiscreteMatrixMeasure out = mu;
    for (auto& a : out.atoms) a.weight = hermitian_part(CMatrix(u * a.weight * u.adjoint()));
    return out;
}

}  // namespace herglotz::sampling
