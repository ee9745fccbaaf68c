#include "herglotz/schur.hpp"

#include "herglotz/errors.hpp"

#include <cmath>

namespace herglotz {

namespace {

// Inverse with an explicit singularity check (reciprocal condition number).
CMatrix checked_inverse(const CMatrix& a, const char* who) {
    Eigen::JacobiSVD<CMatrix> svd(a);
    const RVector& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-14 * sv(0))) {
        throw PreconditionError(std::string(who) + ": matrix is numerically singular");
    }
    return a.inverse();
}

CMatrix eye(Eigen::Index n) {
    return CMatrix::Identity(n, n);
}

}  // namespace

void MatrixFunctionSample::check() const {
    if (points.size() != values.size()) throw ShapeError("function sample: points and values differ in length");
    if (values.empty()) throw ShapeError("function sample: no samples");
    const Eigen::Index n = values.front().rows();
    for (const auto& v : values) {
        if (v.rows() != n || v.cols() != n || n == 0) throw ShapeError("function sample: values must be N x N");
        if (!v.allFinite()) throw ShapeError("function sample: non-finite value");
    }
}

int MatrixFunctionSample::index_of(cplx z, double tol) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (std::abs(points[i] - z) <= tol) return static_cast<int>(i);
    }
    return -1;
}

cplx cayley_scalar(cplx f) {
    if (std::abs(f + 1.0) == 0.0) throw PreconditionError("cayley_scalar: pole at f = -1");
    return (f - 1.0) / (f + 1.0);
}

cplx cayley_scalar_inverse(cplx s) {
    if (std::abs(1.0 - s) == 0.0) throw PreconditionError("cayley_scalar_inverse: pole at s = 1");
    return (1.0 + s) / (1.0 - s);
}

CMatrix cayley_matrix(const CMatrix& f) {
    const CMatrix i = eye(f.rows());
    return checked_inverse(f + i, "cayley_matrix") * (f - i);
}

CMatrix cayley_matrix_inverse(const CMatrix& s) {
    const CMatrix i = eye(s.rows());
    return checked_inverse(i - s, "cayley_matrix_inverse") * (i + s);
}

MatrixFunctionSample matrix_cayley(const MatrixFunctionSample& f) {
    f.check();
    MatrixFunctionSample out{f.points, {}};
    for (const auto& v : f.values) out.values.push_back(cayley_matrix(v));
    return out;
}

MatrixFunctionSample matrix_cayley_inverse(const MatrixFunctionSample& s) {
    s.check();
    MatrixFunctionSample out{s.points, {}};
    for (const auto& v : s.values) out.values.push_back(cayley_matrix_inverse(v));
    return out;
}

double f_defect_residual(const CMatrix& fz, const CMatrix& fw) {
    const CMatrix i = eye(fz.rows());
    const CMatrix sz = cayley_matrix(fz);
    const CMatrix sw = cayley_matrix(fw);
    const CMatrix lhs = fz + fw.adjoint();
    const CMatrix rhs = 2.0 * (i - sz).inverse() * (i - sz * sw.adjoint()) * (i - sw.adjoint()).inverse();
    return spectral_norm(CMatrix(lhs - rhs));
}

double s_defect_residual(const CMatrix& fz, const CMatrix& fw) {
    const CMatrix i = eye(fz.rows());
    const CMatrix sz = cayley_matrix(fz);
    const CMatrix sw = cayley_matrix(fw);
    const CMatrix lhs = i - sz * sw.adjoint();
    const CMatrix rhs = 2.0 * (fz + i).inverse() * (fz + fw.adjoint()) * (fw.adjoint() + i).inverse();
    return spectral_norm(CMatrix(lhs - rhs));
}

double useful_residual(const CMatrix& fz) {
    const CMatrix i = eye(fz.rows());
    const CMatrix sz = cayley_matrix(fz);
    return spectral_norm(CMatrix((fz + i).inverse() - 0.5 * (i - sz)));
}

CMatrix defect(const CMatrix& w) {
    return psd_sqrt(CMatrix(eye(w.cols()) - w.adjoint() * w));
}

namespace {

void check_strict(const CMatrix& w, double margin, const char* who) {
    if (w.rows() != w.cols() || w.rows() == 0) throw ShapeError(std::string(who) + ": W must be square");
    const double nw = spectral_norm(w);
    if (!(nw < 1.0 - margin)) {
        throw PreconditionError(std::string(who) + ": ||W|| = " + std::to_string(nw) + " is not a strict contraction");
    }
}

}  // namespace

CMatrix mobius_apply(const CMatrix& w, const CMatrix& z, double margin) {
    check_strict(w, margin, "mobius_apply");
    if (z.rows() != w.rows() || z.cols() != w.cols()) throw ShapeError("mobius_apply: size mismatch");
    if (!(spectral_norm(z) < 1.0)) throw PreconditionError("mobius_apply: ||Z|| must be < 1");
    const CMatrix dws_inv = defect(w.adjoint()).inverse();
    const CMatrix dw_inv = defect(w).inverse();
    const CMatrix a = dws_inv;
    const CMatrix b = -dws_inv * w;
    const CMatrix c = -w.adjoint() * dws_inv;
    const CMatrix d = dw_inv;
    return (a * z + b) * checked_inverse(c * z + d, "mobius_apply");
}

CMatrix mobius_inverse(const CMatrix& w, const CMatrix& zp, double margin) {
    check_strict(w, margin, "mobius_inverse");
    if (zp.rows() != w.rows() || zp.cols() != w.cols()) throw ShapeError("mobius_inverse: size mismatch");
    if (!(spectral_norm(zp) < 1.0)) throw PreconditionError("mobius_inverse: ||Z'|| must be < 1");
    const CMatrix i = eye(w.rows());
    return defect(w.adjoint()) * checked_inverse(i + zp * w.adjoint(), "mobius_inverse") * (zp + w) *
           defect(w).inverse();
}

MatrixFunctionSample normalize_schur(const MatrixFunctionSample& s, cplx t0, double margin) {
    s.check();
    const int k = s.index_of(t0);
    if (k < 0) throw PreconditionError("normalize_schur: t0 is not among the sample points");
    const CMatrix w = s.values[static_cast<std::size_t>(k)];
    MatrixFunctionSample out{s.points, {}};
    for (const auto& v : s.values) out.values.push_back(mobius_apply(w, v, margin));
    return out;
}

double sdefect_residual(const CMatrix& w, const CMatrix& sz, const CMatrix& sw) {
    const CMatrix i = eye(w.rows());
    const CMatrix tz = mobius_apply(w, sz);
    const CMatrix tw = mobius_apply(w, sw);
    const CMatrix d = defect(w.adjoint());
    const CMatrix lhs = i - sz * sw.adjoint();
    const CMatrix rhs = d * (i + tz * w.adjoint()).inverse() * (i - tz * tw.adjoint()) *
                        (i + w * tw.adjoint()).inverse() * d;
    return spectral_norm(CMatrix(lhs - rhs));
}

}  // namespace herglotz
