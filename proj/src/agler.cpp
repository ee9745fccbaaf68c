#include "herglotz/agler.hpp"

#include "herglotz/errors.hpp"
#include "herglotz/schur.hpp"

#include <cmath>
#include <numbers>

namespace herglotz {

DiscreteMatrixMeasure boundary_measure(const Annulus& a, const ScalarFunction& s) {
    const int k = a.grid();
    DiscreteMatrixMeasure mu{1, 1, {}};
    for (Component c : {Component::Outer, Component::Inner}) {
        for (int l = 0; l < k; ++l) {
            const BoundaryPoint x = a.node(c, l);
            const cplx sv = s(a.location(x));
            if (!(std::abs(sv) < 1.0)) throw PreconditionError("boundary_measure: |s| >= 1 on the boundary");
            const double density = cayley_scalar_inverse(sv).real() * a.harmonic_density(x) / k;
            mu.atoms.push_back(Atom{boundary_id(x), static_cast<int>(c), ConstraintVector{phi_eval(a, x)},
                                    CMatrix::Constant(1, 1, density)});
        }
    }
    return mu;
}

std::vector<AglerTerm> agler_measure(const Annulus& a, const ScalarFunction& s, const MeasureConfig& cfg,
                                     int max_depth) {
    if (std::abs(s(a.t0())) > cfg.tol()) throw PreconditionError("agler_measure: s(t0) must vanish");
    const DiscreteMatrixMeasure mu = boundary_measure(a, s);
    const ChoquetDecomposition d = choquet_decompose(mu, max_depth, cfg);
    std::vector<AglerTerm> out;
    for (const auto& t : d.terms) {
        const DiscreteMatrixMeasure leaf = pruned(t.measure, cfg);
        if (leaf.atoms.size() != 2) throw InternalError("agler_measure: leaf is not a two-point measure");
        ExtremalPair x;
        for (const auto& atom : leaf.atoms) {
            const BoundaryPoint p = parse_boundary_id(atom.id);
            if (p.component == Component::Outer) {
                x.outer = p;
                x.w0 = atom.weight(0, 0).real();
            } else {
                x.inner = p;
                x.w1 = atom.weight(0, 0).real();
            }
        }
        if (x.outer.component != Component::Outer || x.inner.component != Component::Inner) {
            throw InternalError("agler_measure: leaf does not meet both circles");
        }
        out.push_back(AglerTerm{x, t.coefficient});
    }
    return out;
}

std::vector<cplx> default_zw_grid(const Annulus& a, int count) {
    if (count < 1) throw ShapeError("default_zw_grid: count must be positive");
    const double q = a.q();
    const double lo = q + 0.15 * (1.0 - q);
    const double hi = 1.0 - 0.15 * (1.0 - q);
    std::vector<cplx> out;
    for (int i = 0; i < count; ++i) {
        const double r = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1);
        out.push_back(std::polar(r, 2.0 * std::numbers::pi * i / count + 0.3));
    }
    return out;
}

cplx extremal_schur(const Annulus& a, const ExtremalPair& x, cplx z) {
    return cayley_scalar(extremal_herglotz(a, x, z));
}

AglerResult agler_reconstruct(const Annulus& a, const ScalarFunction& s, std::span<const AglerTerm> nu,
                              std::span<const cplx> grid) {
    if (nu.empty()) throw ShapeError("agler_reconstruct: empty measure");
    if (grid.empty()) throw ShapeError("agler_reconstruct: empty grid");
    const auto g = static_cast<Eigen::Index>(grid.size());
    AglerResult r;
    for (const cplx z : grid) {
        if (!a.contains(z)) throw PreconditionError("agler_reconstruct: grid point outside the annulus");
        const double rho = std::max(std::abs(z), a.q() / std::abs(z));
        r.aliasing_bound = std::max(r.aliasing_bound, std::pow(rho, a.grid()));
    }
    r.near_boundary = r.aliasing_bound > 1e-8;

    CVector sv(g);
    for (Eigen::Index i = 0; i < g; ++i) sv(i) = s(grid[static_cast<std::size_t>(i)]);
    // Per term: h_x and s_x at every grid point.
    std::vector<CVector> hx, sx;
    for (const auto& t : nu) {
        CVector h(g), e(g);
        for (Eigen::Index i = 0; i < g; ++i) {
            e(i) = extremal_schur(a, t.x, grid[static_cast<std::size_t>(i)]);
            h(i) = (1.0 - sv(i)) / (1.0 - e(i));
        }
        hx.push_back(std::move(h));
        sx.push_back(std::move(e));
    }
    r.residual = RMatrix::Zero(g, g);
    for (Eigen::Index i = 0; i < g; ++i) {
        for (Eigen::Index j = 0; j < g; ++j) {
            const cplx lhs = 1.0 - sv(i) * std::conj(sv(j));
            cplx rhs = 0.0;
            for (std::size_t k = 0; k < nu.size(); ++k) {
                rhs += nu[k].weight * hx[k](i) * (1.0 - sx[k](i) * std::conj(sx[k](j))) * std::conj(hx[k](j));
            }
            r.residual(i, j) = std::abs(lhs - rhs);
        }
    }
    r.max_residual = r.residual.maxCoeff();
    return r;
}

}  // namespace herglotz
