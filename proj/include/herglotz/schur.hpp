#pragma once

// Cayley transforms between normalized Herglotz and Schur functions, the
// matrix ball automorphisms L_W, and residuals of the defect identities.

#include "herglotz/linalg.hpp"

#include <vector>

namespace herglotz {

/// Matrix-valued function known through its values at sample points.
struct MatrixFunctionSample {
    std::vector<cplx> points;
    std::vector<CMatrix> values;

    /// Throws ShapeError on length mismatch or inconsistent matrix sizes.
    void check() const;
    [[nodiscard]] Eigen::Index size() const { return values.empty() ? 0 : values.front().rows(); }
    /// Index of the sample at z (|point - z| <= tol), or -1.
    [[nodiscard]] int index_of(cplx z, double tol = 1e-12) const;
};

/// s = (f - 1) / (f + 1); throws PreconditionError at f = -1.
cplx cayley_scalar(cplx f);
/// f = (1 + s) / (1 - s); throws PreconditionError at s = 1.
cplx cayley_scalar_inverse(cplx s);

/// S = (F + I)^-1 (F - I).
CMatrix cayley_matrix(const CMatrix& f);
/// F = (I - S)^-1 (I + S).
CMatrix cayley_matrix_inverse(const CMatrix& s);

MatrixFunctionSample matrix_cayley(const MatrixFunctionSample& f);
MatrixFunctionSample matrix_cayley_inverse(const MatrixFunctionSample& s);

/// Residual norms of the pointwise identities, with S = cayley_matrix(F):
///   F(z) + F(w)^* = 2 (I - S(z))^-1 (I - S(z) S(w)^*) (I - S(w)^*)^-1
double f_defect_residual(const CMatrix& fz, const CMatrix& fw);
///   I - S(z) S(w)^* = 2 (F(z) + I)^-1 (F(z) + F(w)^*) (F(w)^* + I)^-1
double s_defect_residual(const CMatrix& fz, const CMatrix& fw);
///   (F(z) + I)^-1 = (I - S(z)) / 2
double useful_residual(const CMatrix& fz);

/// D_W = (I - W^* W)^(1/2).
CMatrix defect(const CMatrix& w);

/// Ball automorphism Z -> (A Z + B)(C Z + D)^-1 sending W to 0.
/// Throws PreconditionError unless ||W|| < 1 - margin and ||Z|| < 1.
CMatrix mobius_apply(const CMatrix& w, const CMatrix& z, double margin = 1e-9);
/// Inverse map Z' -> D_{W*} (I + Z' W^*)^-1 (Z' + W) D_W^-1.
CMatrix mobius_inverse(const CMatrix& w, const CMatrix& zp, double margin = 1e-9);

/// S~ = L_{S(t0)}[S] at every sample. t0 must be one of the points.
MatrixFunctionSample normalize_schur(const MatrixFunctionSample& s, cplx t0, double margin = 1e-9);

/// Residual of
///   I - S(z)S(w)^* = D (I + S~(z) W^*)^-1 (I - S~(z) S~(w)^*) (I + W S~(w)^*)^-1 D
/// with W = S(t0), D = D_{W*}, S~ = L_W[S].
double sdefect_residual(const CMatrix& w, const CMatrix& sz, const CMatrix& sw);

}  // namespace herglotz
