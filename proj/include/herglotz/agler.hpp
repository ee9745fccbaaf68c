#pragma once

// Numerical Agler-type decomposition on the annulus:
//   1 - s(z) conj(s(w)) = sum_x nu_x h_x(z) (1 - s_x(z) conj(s_x(w))) conj(h_x(w)),
// with h_x = (1 - s) / (1 - s_x) and nu a finite probability measure over
// extremal pairs x, obtained by decomposing the boundary measure of
// f = (1 + s) / (1 - s).

#include "herglotz/annulus.hpp"

#include <functional>
#include <span>
#include <vector>

namespace herglotz {

using ScalarFunction = std::function<cplx(cplx)>;

struct AglerTerm {
    ExtremalPair x;
    double weight = 0.0;
};

struct AglerResult {
    /// |lhs - rhs| for every (z, w) in grid x grid, row index z.
    RMatrix residual;
    double max_residual = 0.0;
    /// Largest max(|z|, q/|z|)^grid over the grid: the quadrature error scale.
    double aliasing_bound = 0.0;
    bool near_boundary = false;
};

/// Re f * harmonic measure at t0, atomized on the quadrature nodes
/// (N = 1, m = 1, ids from boundary_id, tags 0 outer / 1 inner).
/// s must be defined on the closed annulus with |s| < 1 there.
DiscreteMatrixMeasure boundary_measure(const Annulus& a, const ScalarFunction& s);

/// nu from the Choquet decomposition of boundary_measure. Requires s(t0) = 0.
std::vector<AglerTerm> agler_measure(const Annulus& a, const ScalarFunction& s, const MeasureConfig& cfg = {},
                                     int max_depth = 10000);

/// count points at radii spread over the middle 70% of (q, 1), angles
/// 2 pi i / count + 0.3.
std::vector<cplx> default_zw_grid(const Annulus& a, int count = 8);

/// Scalar Schur function s_x = (f_x - 1) / (f_x + 1).
cplx extremal_schur(const Annulus& a, const ExtremalPair& x, cplx z);

AglerResult agler_reconstruct(const Annulus& a, const ScalarFunction& s, std::span<const AglerTerm> nu,
                              std::span<const cplx> grid);

}  // namespace herglotz
