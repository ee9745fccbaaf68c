#include "herglotz/linalg.hpp"

#include "herglotz/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <vector>

// Rank and null-space decisions use JacobiSVD throughout: Eigen 3.4's
// BDCSVD returned non-null "null vectors" for some 16-column inputs.

namespace herglotz {

CMatrix hermitian_part(const CMatrix& a) {
    return (a + a.adjoint()) * 0.5;
}

double spectral_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

double spectral_norm(const RMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<RMatrix> svd(a);
    return svd.singularValues()(0);
}

namespace {

template <class Vec>
std::size_t count_above(const Vec& sv, double rtol) {
    if (sv.size() == 0) return 0;
    const double smax = sv(0);
    if (!(smax > 0.0)) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > rtol * smax) ++r;
    }
    return r;
}

}  // namespace

std::size_t numerical_rank(const RMatrix& a, double rtol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<RMatrix> svd(a);
    return count_above(svd.singularValues(), rtol);
}

std::size_t numerical_rank(const CMatrix& a, double rtol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return count_above(svd.singularValues(), rtol);
}

RMatrix null_space(const RMatrix& a, double rtol) {
    const Eigen::Index cols = a.cols();
    if (cols == 0) return RMatrix(0, 0);
    if (a.rows() == 0) return RMatrix::Identity(cols, cols);

    Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeFullV);
    const auto r = static_cast<Eigen::Index>(count_above(svd.singularValues(), rtol));
    RMatrix basis = svd.matrixV().rightCols(cols - r);
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        Eigen::Index imax = 0;
        double vmax = -1.0;
        for (Eigen::Index i = 0; i < basis.rows(); ++i) {
            // Prefer the earliest index among near-ties for determinism.
            if (std::abs(basis(i, k)) > vmax * (1.0 + 1e-9)) {
                vmax = std::abs(basis(i, k));
                imax = i;
            }
        }
        if (basis(imax, k) < 0.0) basis.col(k) *= -1.0;
    }
    return basis;
}

CMatrix psd_range_basis(const CMatrix& w, double rtol) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(w));
    const RVector& ev = es.eigenvalues();
    const double lmax = ev.size() ? ev(ev.size() - 1) : 0.0;
    if (!(lmax > 0.0)) return CMatrix(w.rows(), 0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
        if (ev(i) > rtol * lmax) keep.push_back(i);
    }
    CMatrix basis(w.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        basis.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    }
    return basis;
}

CMatrix psd_sqrt(const CMatrix& w) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(w));
    RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix pd_inv_sqrt(const CMatrix& w) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(w));
    const RVector& ev = es.eigenvalues();
    if (ev.size() && !(ev(0) > 0.0)) {
        throw PreconditionError("pd_inv_sqrt: matrix is not positive definite");
    }
    RVector d = ev.cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const CMatrix& h) {
    if (h.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

RVector hermitian_to_coords(const CMatrix& h) {
    const Eigen::Index n = h.rows();
    RVector x(n * n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) x(k++) = h(i, i).real();
    const double s = std::sqrt(2.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            x(k++) = s * h(i, j).real();
            x(k++) = s * h(i, j).imag();
        }
    }
    return x;
}

CMatrix coords_to_hermitian(const RVector& x, Eigen::Index n) {
    if (x.size() != n * n) throw ShapeError("coords_to_hermitian: expected N^2 coordinates");
    CMatrix h = CMatrix::Zero(n, n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) = x(k++);
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const cplx v(s * x(k), s * x(k + 1));
            k += 2;
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

CMatrix snap_psd(const CMatrix& w, double scale, double rtol) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(w));
    RVector ev = es.eigenvalues();
    const double cut = rtol * scale;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) <= cut) ev(i) = 0.0;
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace herglotz
