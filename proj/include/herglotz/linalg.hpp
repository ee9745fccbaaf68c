#pragma once

// Small dense linear-algebra helpers shared by every module.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace herglotz {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Default relative threshold for numerical rank decisions.
inline constexpr double kDefaultRankRtol = 1e-10;

/// (A + A*) / 2.
CMatrix hermitian_part(const CMatrix& a);

/// Largest singular value.
double spectral_norm(const CMatrix& a);
double spectral_norm(const RMatrix& a);

/// Number of singular values strictly above rtol * sigma_max.
std::size_t numerical_rank(const RMatrix& a, double rtol = kDefaultRankRtol);
std::size_t numerical_rank(const CMatrix& a, double rtol = kDefaultRankRtol);

/// Orthonormal basis (columns) of the null space of a, each column sign
/// normalized so that its largest-magnitude entry is positive.
RMatrix null_space(const RMatrix& a, double rtol = kDefaultRankRtol);

/// Orthonormal basis of the range of a hermitian PSD matrix: eigenvectors
/// whose eigenvalue exceeds rtol * lambda_max.
CMatrix psd_range_basis(const CMatrix& w, double rtol = kDefaultRankRtol);

/// Principal square root and inverse square root of a hermitian PSD /
/// positive definite matrix.
CMatrix psd_sqrt(const CMatrix& w);
CMatrix pd_inv_sqrt(const CMatrix& w);

/// Smallest eigenvalue of the hermitian part.
double min_eigenvalue(const CMatrix& h);

/// Isometric real coordinates of a hermitian N x N matrix: N diagonal
/// entries followed by sqrt(2)*Re and sqrt(2)*Im of each strict upper entry,
/// row by row. The Frobenius inner product becomes the Euclidean one.
RVector hermitian_to_coords(const CMatrix& h);
CMatrix coords_to_hermitian(const RVector& x, Eigen::Index n);

/// Zero out eigenvalues of a hermitian PSD matrix that are below
/// rtol * scale (negative ones are clipped as well).
CMatrix snap_psd(const CMatrix& w, double scale, double rtol = kDefaultRankRtol);

}  // namespace herglotz
