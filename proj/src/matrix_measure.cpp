#include "herglotz/matrix_measure.hpp"

#include "herglotz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace herglotz {

// ---------------------------------------------------------------------------
// Basic structure

void DiscreteMatrixMeasure::check_shape() const {
    if (N < 1) throw ShapeError("measure: N must be >= 1");
    if (m < 0) throw ShapeError("measure: m must be >= 0");
    if (atoms.empty()) throw ShapeError("measure: no atoms");
    std::set<std::string> seen;
    for (const auto& a : atoms) {
        if (!seen.insert(a.id).second) throw ShapeError("measure: duplicate point id '" + a.id + "'");
        if (a.phi.size() != m) throw ShapeError("measure: atom '" + a.id + "' has wrong constraint length");
        if (a.weight.rows() != N || a.weight.cols() != N) {
            throw ShapeError("measure: atom '" + a.id + "' has wrong weight size");
        }
        if (!a.weight.allFinite()) throw ShapeError("measure: atom '" + a.id + "' has non-finite weight");
    }
}

void DiscreteMatrixMeasure::symmetrize() {
    for (auto& a : atoms) a.weight = hermitian_part(a.weight);
}

const Atom* DiscreteMatrixMeasure::find(const std::string& id) const {
    for (const auto& a : atoms) {
        if (a.id == id) return &a;
    }
    return nullptr;
}

std::size_t DiscreteMatrixMeasure::total_rank(double rtol) const {
    std::size_t r = 0;
    for (const auto& a : atoms) r += static_cast<std::size_t>(psd_range_basis(a.weight, rtol).cols());
    return r;
}

// ---------------------------------------------------------------------------
// Membership

namespace {

// Scale for the i-th constraint residual: sum_j |phi_i(x_j)| ||W_j||.
double constraint_scale(const DiscreteMatrixMeasure& mu, int i) {
    double s = 0.0;
    for (const auto& a : mu.atoms) s += std::abs(a.phi[i]) * spectral_norm(a.weight);
    return std::max(1.0, s);
}

}  // namespace

MembershipReport validate_membership(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg) {
    mu.check_shape();
    MembershipReport r;
    r.psd_ok = true;
    CMatrix total = CMatrix::Zero(mu.N, mu.N);
    for (const auto& a : mu.atoms) {
        const CMatrix w = hermitian_part(a.weight);
        const double lmin = min_eigenvalue(w);
        r.psd_residuals.push_back(std::max(0.0, -lmin));
        if (lmin < -cfg.psd_rtol * spectral_norm(w)) r.psd_ok = false;
        total += w;
    }
    r.mass_residual = spectral_norm(CMatrix(total - CMatrix::Identity(mu.N, mu.N)));
    bool constraints_ok = true;
    for (int i = 0; i < mu.m; ++i) {
        CMatrix s = CMatrix::Zero(mu.N, mu.N);
        for (const auto& a : mu.atoms) s += a.phi[i] * hermitian_part(a.weight);
        const double res = spectral_norm(s);
        r.constraint_residuals.push_back(res);
        if (res > cfg.tol() * constraint_scale(mu, i)) constraints_ok = false;
    }
    r.member = r.psd_ok && r.mass_residual <= cfg.tol() && constraints_ok;
    return r;
}

void require_member(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg) {
    const MembershipReport r = validate_membership(mu, cfg);
    if (r.member) return;
    std::ostringstream os;
    os.precision(3);
    os << "measure is not a member: mass residual " << r.mass_residual;
    if (!r.psd_ok) os << ", negative weight eigenvalue";
    for (std::size_t i = 0; i < r.constraint_residuals.size(); ++i) {
        os << ", constraint " << (i + 1) << " residual " << r.constraint_residuals[i];
    }
    throw PreconditionError(os.str());
}

DiscreteMatrixMeasure pruned(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg) {
    DiscreteMatrixMeasure out{mu.N, mu.m, {}};
    for (const auto& a : mu.atoms) {
        if (spectral_norm(a.weight) > cfg.prune_tol) out.atoms.push_back(a);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Extremality

namespace {

int support_bound(const DiscreteMatrixMeasure& mu) {
    return (mu.m + 1) * mu.N * mu.N;
}

std::vector<Subspace> ranges(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg) {
    std::vector<Subspace> out;
    out.reserve(mu.atoms.size());
    for (const auto& a : mu.atoms) out.push_back(Subspace::range_of(a.weight, cfg.geometry.rank_rtol));
    return out;
}

std::vector<ConstraintVector> phis_of(const DiscreteMatrixMeasure& mu) {
    std::vector<ConstraintVector> out;
    out.reserve(mu.atoms.size());
    for (const auto& a : mu.atoms) out.push_back(a.phi);
    return out;
}

}  // namespace

ExtremalityReport is_extreme(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg) {
    require_member(mu, cfg);
    const DiscreteMatrixMeasure p = pruned(mu, cfg);
    ExtremalityReport r;
    r.support_count = static_cast<int>(p.atoms.size());
    r.support_bound = support_bound(mu);
    r.bound_ok = r.support_count <= r.support_bound;

    const auto subs = ranges(p, cfg);
    const auto phis = phis_of(p);
    const auto space = admissible_perturbation_space(subs, phis, cfg.geometry);
    r.perturbation_dim = static_cast<int>(space.size());
    r.is_extreme = space.empty();
    if (!r.is_extreme) {
        PerturbationTuple w;
        std::size_t k = 0;
        for (const auto& a : mu.atoms) {
            if (k < p.atoms.size() && p.atoms[k].id == a.id) {
                w.blocks.push_back(space.front().blocks[k++]);
            } else {
                w.blocks.push_back(CMatrix::Zero(mu.N, mu.N));
            }
        }
        r.witness = std::move(w);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Splitting

namespace {

// Largest eps with W + eps * T >= 0, where T is compressed to the range of W
// (basis u). Returns +inf when T is PSD on that range.
double max_step(const CMatrix& w, const CMatrix& u, const CMatrix& t, double rtol) {
    if (u.cols() == 0) return std::numeric_limits<double>::infinity();
    const CMatrix wc = hermitian_part(CMatrix(u.adjoint() * w * u));
    const CMatrix tc = hermitian_part(CMatrix(u.adjoint() * t * u));
    const CMatrix s = pd_inv_sqrt(wc);
    const CMatrix g = hermitian_part(CMatrix(s * tc * s));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
    const RVector& ev = es.eigenvalues();
    // A step longer than ||W|| / (rtol ||T||) is treated as unbounded. The
    // threshold must not be relative to max |ev|: a near-singular W makes
    // that huge and would hide genuine negative directions.
    const double wn = spectral_norm(wc);
    const double tn = spectral_norm(tc);
    if (!(tn > 0.0) || !(ev(0) < -rtol * tn / wn)) return std::numeric_limits<double>::infinity();
    return -1.0 / ev(0);
}

void check_admissible(const DiscreteMatrixMeasure& mu, const PerturbationTuple& t, const MeasureConfig& cfg) {
    if (t.blocks.size() != mu.atoms.size()) throw ShapeError("split_along: tuple length differs from atom count");
    const double tn = t.norm();
    if (!(tn > 0.0)) throw PreconditionError("split_along: perturbation is zero");
    const double tol = 10.0 * cfg.tol() * tn;
    CMatrix total = CMatrix::Zero(mu.N, mu.N);
    std::vector<CMatrix> weighted(static_cast<std::size_t>(mu.m), CMatrix::Zero(mu.N, mu.N));
    for (std::size_t j = 0; j < t.blocks.size(); ++j) {
        const CMatrix& b = t.blocks[j];
        if (b.rows() != mu.N || b.cols() != mu.N) throw ShapeError("split_along: block has wrong size");
        if ((b - b.adjoint()).norm() > tol) throw PreconditionError("split_along: block is not hermitian");
        const CMatrix u = psd_range_basis(mu.atoms[j].weight, cfg.geometry.rank_rtol);
        const CMatrix p = u * u.adjoint();
        if ((b - p * b * p).norm() > tol) {
            throw PreconditionError("split_along: block does not live on the range of its weight");
        }
        total += b;
        for (int i = 0; i < mu.m; ++i) weighted[static_cast<std::size_t>(i)] += mu.atoms[j].phi[i] * b;
    }
    if (total.norm() > tol) throw PreconditionError("split_along: perturbation does not preserve total mass");
    for (int i = 0; i < mu.m; ++i) {
        if (weighted[static_cast<std::size_t>(i)].norm() > tol * std::max(1.0, constraint_scale(mu, i))) {
            throw PreconditionError("split_along: perturbation violates a linear constraint");
        }
    }
}

DiscreteMatrixMeasure step_measure(const DiscreteMatrixMeasure& mu, const PerturbationTuple& t, double eps,
                                   const MeasureConfig& cfg) {
    DiscreteMatrixMeasure out = mu;
    for (std::size_t j = 0; j < mu.atoms.size(); ++j) {
        const CMatrix& w = mu.atoms[j].weight;
        const double scale = spectral_norm(w);
        CMatrix next = hermitian_part(CMatrix(w + eps * t.blocks[j]));
        next = snap_psd(next, scale, cfg.geometry.rank_rtol);
        if (spectral_norm(next) <= cfg.prune_tol) next.setZero();
        out.atoms[j].weight = next;
    }
    return out;
}

}  // namespace

SplitResult split_along(const DiscreteMatrixMeasure& mu, const PerturbationTuple& t, const MeasureConfig& cfg) {
    require_member(mu, cfg);
    check_admissible(mu, t, cfg);
    double eps_plus = std::numeric_limits<double>::infinity();
    double eps_minus = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < mu.atoms.size(); ++j) {
        const CMatrix& w = mu.atoms[j].weight;
        const CMatrix u = psd_range_basis(w, cfg.geometry.rank_rtol);
        eps_plus = std::min(eps_plus, max_step(w, u, t.blocks[j], cfg.geometry.rank_rtol));
        eps_minus = std::min(eps_minus, max_step(w, u, CMatrix(-t.blocks[j]), cfg.geometry.rank_rtol));
    }
    if (!std::isfinite(eps_plus) || !std::isfinite(eps_minus)) {
        throw InternalError("split_along: unbounded step along an admissible perturbation");
    }
    SplitResult r;
    r.eps_plus = eps_plus;
    r.eps_minus = eps_minus;
    r.lambda = eps_minus / (eps_plus + eps_minus);
    r.plus = step_measure(mu, t, eps_plus, cfg);
    PerturbationTuple neg = t;
    for (auto& b : neg.blocks) b = -b;
    r.minus = step_measure(mu, neg, eps_minus, cfg);
    return r;
}

// ---------------------------------------------------------------------------
// Decomposition
//
// Caratheodory-style peeling. Given the current member c, descend inside the
// minimal face of c to an extreme point e by repeated one-sided splits, then
// push c away from e to the relative boundary of that face:
//     c = s/(1+s) e + 1/(1+s) r,   r = (1+s) c - s e.
// r lies on a strictly smaller face, so the loop ends after at most
// dim(face) + 1 leaves. Witnesses are taken on the shortest prefix of atoms
// whose real parameter count exceeds (m+1)N^2, which keeps every split local.

namespace {

struct WorkAtom {
    std::size_t src;
    CMatrix w;
    CMatrix u;  // orthonormal basis of Ran w
};

using Face = std::vector<WorkAtom>;

struct Decomposer {
    const DiscreteMatrixMeasure& base;
    const MeasureConfig& cfg;
    int bound;

    WorkAtom make(std::size_t src, CMatrix w) const {
        CMatrix u = psd_range_basis(w, cfg.geometry.rank_rtol);
        return WorkAtom{src, std::move(w), std::move(u)};
    }

    // Constraint map of face[0, k) in compressed coordinates: each atom
    // contributes the hermitian matrices on its range, sent to their total
    // and phi-weighted totals.
    RMatrix face_matrix(const Face& f, std::size_t k) const {
        const Eigen::Index nn = static_cast<Eigen::Index>(base.N) * base.N;
        const Eigen::Index m = base.m;
        Eigen::Index cols = 0;
        for (std::size_t j = 0; j < k; ++j) cols += f[j].u.cols() * f[j].u.cols();
        RMatrix a = RMatrix::Zero((m + 1) * nn, cols);
        Eigen::Index c = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const CMatrix& u = f[j].u;
            const Eigen::Index d = u.cols();
            const ConstraintVector& phi = base.atoms[f[j].src].phi;
            for (Eigen::Index q = 0; q < d * d; ++q, ++c) {
                const RVector x = hermitian_to_coords(u * coords_to_hermitian(RVector::Unit(d * d, q), d) * u.adjoint());
                a.col(c).head(nn) = x;
                for (Eigen::Index i = 0; i < m; ++i) a.col(c).segment((i + 1) * nn, nn) = phi[i] * x;
            }
        }
        return a;
    }

    // Null vector of the constraint system restricted to face[0, k), or
    // nothing if that system is injective.
    std::optional<RVector> witness_on(const Face& f, std::size_t k) const {
        const RMatrix ker = null_space(face_matrix(f, k), cfg.geometry.rank_rtol);
        if (ker.cols() == 0) return std::nullopt;
        return RVector(ker.col(0));
    }

    // Smallest correction inside the face that restores the mass and
    // constraint equations. Peeling divides by 1 + s, so rounding in the
    // residual face grows geometrically unless it is removed.
    void repair(Face& f) const {
        if (f.empty()) return;
        const Eigen::Index nn = static_cast<Eigen::Index>(base.N) * base.N;
        const RMatrix a = face_matrix(f, f.size());
        RVector x(a.cols());
        Eigen::Index off = 0;
        for (const auto& at : f) {
            const Eigen::Index d = at.u.cols();
            x.segment(off, d * d) = hermitian_to_coords(CMatrix(at.u.adjoint() * at.w * at.u));
            off += d * d;
        }
        RVector target = RVector::Zero(a.rows());
        target.head(nn) = hermitian_to_coords(CMatrix::Identity(base.N, base.N));
        // Truncated pseudo-inverse: near-dependent directions would turn a
        // rounding-size residual into a large correction. The cut is looser
        // than the rank tolerance so a face that is only barely injective
        // cannot amplify rounding by more than 1e6.
        Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(std::max(cfg.geometry.rank_rtol, 1e-6));
        const RVector delta = svd.solve(RVector(target - a * x));
        off = 0;
        for (auto& at : f) {
            const Eigen::Index d = at.u.cols();
            const CMatrix w = at.u * coords_to_hermitian(RVector(x.segment(off, d * d) + delta.segment(off, d * d)), d) *
                              at.u.adjoint();
            off += d * d;
            at = make(at.src, snap_psd(hermitian_part(w), spectral_norm(w), cfg.geometry.rank_rtol));
        }
        drop_empty(f);
    }

    // Witness for the whole face, local when the parameter count allows it.
    std::optional<std::pair<std::size_t, RVector>> witness(const Face& f) const {
        Eigen::Index count = 0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            count += f[k].u.cols() * f[k].u.cols();
            if (count > bound) {
                auto v = witness_on(f, k + 1);
                if (!v) throw InternalError("choquet_decompose: over-determined face has no perturbation");
                return std::make_pair(k + 1, *v);
            }
        }
        auto v = witness_on(f, f.size());
        if (!v) return std::nullopt;
        return std::make_pair(f.size(), *v);
    }

    // Move f along the witness to the PSD boundary (plus direction).
    void descend_step(Face& f, std::size_t k, const RVector& v) const {
        std::vector<CMatrix> blocks;
        Eigen::Index off = 0;
        double eps = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            const CMatrix& u = f[j].u;
            const Eigen::Index d = u.cols();
            blocks.push_back(u * coords_to_hermitian(v.segment(off, d * d), d) * u.adjoint());
            off += d * d;
            eps = std::min(eps, max_step(f[j].w, u, blocks.back(), cfg.geometry.rank_rtol));
        }
        if (!std::isfinite(eps)) throw InternalError("choquet_decompose: unbounded step");
        for (std::size_t j = 0; j < k; ++j) {
            const double scale = spectral_norm(f[j].w);
            CMatrix next = snap_psd(hermitian_part(CMatrix(f[j].w + eps * blocks[j])), scale, cfg.geometry.rank_rtol);
            f[j] = make(f[j].src, std::move(next));
        }
        drop_empty(f);
    }

    void drop_empty(Face& f) const {
        f.erase(std::remove_if(f.begin(), f.end(),
                               [&](const WorkAtom& a) {
                                   return a.u.cols() == 0 || spectral_norm(a.w) <= cfg.prune_tol;
                               }),
                f.end());
    }

    DiscreteMatrixMeasure to_measure(const Face& f) const {
        DiscreteMatrixMeasure out{base.N, base.m, {}};
        for (const auto& a : f) {
            Atom at = base.atoms[a.src];
            at.weight = a.w;
            out.atoms.push_back(std::move(at));
        }
        return out;
    }

    static bool same_face(const Face& a, const Face& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[j].src != b[j].src || a[j].w != b[j].w) return false;
        }
        return true;
    }
};

}  // namespace

ChoquetDecomposition choquet_decompose(const DiscreteMatrixMeasure& mu, int max_depth, const MeasureConfig& cfg) {
    require_member(mu, cfg);
    DiscreteMatrixMeasure clean = mu;
    clean.symmetrize();
    Decomposer dec{clean, cfg, support_bound(clean)};

    Face current;
    for (std::size_t j = 0; j < clean.atoms.size(); ++j) {
        if (spectral_norm(clean.atoms[j].weight) > cfg.prune_tol) current.push_back(dec.make(j, clean.atoms[j].weight));
    }

    ChoquetDecomposition out;
    double remaining = 1.0;
    std::vector<std::pair<double, Face>> leaves;
    for (int iter = 0;; ++iter) {
        if (iter > max_depth) throw ToleranceError("choquet_decompose: max_depth exceeded");
        out.depth = iter;

        Face e = current;
        std::size_t potential = 0;
        for (const auto& a : e) potential += static_cast<std::size_t>(a.u.cols());
        std::size_t steps = 0;
        while (auto w = dec.witness(e)) {
            if (++steps > potential) throw ToleranceError("choquet_decompose: descent failed to reduce rank");
            dec.descend_step(e, w->first, w->second);
        }
        if (Decomposer::same_face(e, current)) {
            dec.repair(e);
            leaves.emplace_back(remaining, std::move(e));
            break;
        }
        // The residual is formed from the repaired leaf, so the identity
        // c = s/(1+s) e + 1/(1+s) r holds to rounding.
        dec.repair(e);

        // Largest s with (1+s) c - s e >= 0.
        double s = std::numeric_limits<double>::infinity();
        std::size_t ei = 0;
        std::vector<const WorkAtom*> partner(current.size(), nullptr);
        for (std::size_t j = 0; j < current.size(); ++j) {
            while (ei < e.size() && e[ei].src < current[j].src) ++ei;
            if (ei < e.size() && e[ei].src == current[j].src) partner[j] = &e[ei];
            if (!partner[j]) continue;
            const CMatrix diff = current[j].w - partner[j]->w;
            s = std::min(s, max_step(current[j].w, current[j].u, diff, cfg.geometry.rank_rtol));
        }
        if (!std::isfinite(s) || !(s > 0.0)) {
            throw InternalError("choquet_decompose: extreme point is not inside the current face");
        }
        Face rest;
        for (std::size_t j = 0; j < current.size(); ++j) {
            CMatrix w = (1.0 + s) * current[j].w;
            if (partner[j]) w -= s * partner[j]->w;
            const double scale = (1.0 + s) * spectral_norm(current[j].w);
            rest.push_back(dec.make(current[j].src, snap_psd(hermitian_part(w), scale, cfg.geometry.rank_rtol)));
        }
        dec.drop_empty(rest);
        dec.repair(rest);
        leaves.emplace_back(remaining * s / (1.0 + s), std::move(e));
        remaining /= (1.0 + s);
        current = std::move(rest);
    }

    // Merge leaves that coincide within tolerance.
    for (auto& [coef, face] : leaves) {
        DiscreteMatrixMeasure leaf = dec.to_measure(face);
        bool merged = false;
        for (auto& t : out.terms) {
            if (t.measure.atoms.size() == leaf.atoms.size() && atomwise_distance(t.measure, leaf) <= cfg.tol()) {
                t.coefficient += coef;
                merged = true;
                break;
            }
        }
        if (!merged) out.terms.push_back(ChoquetTerm{coef, std::move(leaf)});
    }
    return out;
}

DiscreteMatrixMeasure recombine(const ChoquetDecomposition& d) {
    if (d.terms.empty()) throw ShapeError("recombine: empty decomposition");
    DiscreteMatrixMeasure out{d.terms.front().measure.N, d.terms.front().measure.m, {}};
    std::map<std::string, std::size_t> index;
    for (const auto& t : d.terms) {
        for (const auto& a : t.measure.atoms) {
            auto it = index.find(a.id);
            if (it == index.end()) {
                index.emplace(a.id, out.atoms.size());
                Atom b = a;
                b.weight = t.coefficient * a.weight;
                out.atoms.push_back(std::move(b));
            } else {
                out.atoms[it->second].weight += t.coefficient * a.weight;
            }
        }
    }
    return out;
}

double atomwise_distance(const DiscreteMatrixMeasure& a, const DiscreteMatrixMeasure& b) {
    double worst = 0.0;
    for (const auto& x : a.atoms) {
        const Atom* y = b.find(x.id);
        worst = std::max(worst, y ? spectral_norm(CMatrix(x.weight - y->weight)) : spectral_norm(x.weight));
    }
    for (const auto& y : b.atoms) {
        if (!a.find(y.id)) worst = std::max(worst, spectral_norm(y.weight));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Constructors

namespace {

void require_scalar_extreme(const DiscreteMatrixMeasure& mu, const MeasureConfig& cfg, const char* who) {
    if (mu.N != 1) throw ShapeError(std::string(who) + ": scalar measures must have N = 1");
    require_member(mu, cfg);
    if (!is_extreme(mu, cfg).is_extreme) {
        throw PreconditionError(std::string(who) + ": scalar measure is not extreme");
    }
}

DiscreteMatrixMeasure combine(std::span<const DiscreteMatrixMeasure> scalars, std::span<const CMatrix> weights) {
    const auto n = static_cast<int>(weights.front().rows());
    DiscreteMatrixMeasure out{n, scalars.front().m, {}};
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < scalars.size(); ++k) {
        for (const auto& a : scalars[k].atoms) {
            const CMatrix w = a.weight(0, 0).real() * weights[k];
            auto it = index.find(a.id);
            if (it == index.end()) {
                index.emplace(a.id, out.atoms.size());
                out.atoms.push_back(Atom{a.id, a.tag, a.phi, w});
            } else {
                Atom& b = out.atoms[it->second];
                if (!(b.phi == a.phi)) {
                    throw ShapeError("point id '" + a.id + "' carries different constraint values");
                }
                b.weight += w;
            }
        }
    }
    return out;
}

void check_common(std::span<const DiscreteMatrixMeasure> scalars, std::span<const CMatrix> weights, const char* who) {
    if (scalars.empty()) throw ShapeError(std::string(who) + ": no scalar measures");
    if (scalars.size() != weights.size()) throw ShapeError(std::string(who) + ": list lengths differ");
    const Eigen::Index n = weights.front().rows();
    for (const auto& w : weights) {
        if (w.rows() != n || w.cols() != n || n == 0) throw ShapeError(std::string(who) + ": weights must be N x N");
    }
    for (const auto& s : scalars) {
        if (s.m != scalars.front().m) throw ShapeError(std::string(who) + ": scalar measures disagree on m");
    }
}

}  // namespace

DiscreteMatrixMeasure build_special(std::span<const DiscreteMatrixMeasure> scalar_extremes,
                                    std::span<const CMatrix> weights, const MeasureConfig& cfg) {
    check_common(scalar_extremes, weights, "build_special");
    for (const auto& s : scalar_extremes) require_scalar_extreme(s, cfg, "build_special");
    const Eigen::Index n = weights.front().rows();
    CMatrix total = CMatrix::Zero(n, n);
    for (const auto& w : weights) {
        if ((w - w.adjoint()).norm() > cfg.tol()) throw PreconditionError("build_special: weight is not hermitian");
        if (min_eigenvalue(w) < -cfg.psd_rtol * spectral_norm(w)) {
            throw PreconditionError("build_special: weight is not positive semidefinite");
        }
        total += w;
    }
    if (spectral_norm(CMatrix(total - CMatrix::Identity(n, n))) > cfg.tol()) {
        throw PreconditionError("build_special: weights do not sum to the identity");
    }
    return combine(scalar_extremes, weights);
}

DiscreteMatrixMeasure build_spectral(std::span<const CMatrix> projections,
                                     std::span<const DiscreteMatrixMeasure> scalar_extremes,
                                     const MeasureConfig& cfg) {
    check_common(scalar_extremes, projections, "build_spectral");
    const Eigen::Index n = projections.front().rows();
    if (static_cast<Eigen::Index>(projections.size()) != n) {
        throw PreconditionError("build_spectral: need exactly N projections");
    }
    for (const auto& s : scalar_extremes) require_scalar_extreme(s, cfg, "build_spectral");
    CMatrix total = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k < projections.size(); ++k) {
        const CMatrix& p = projections[k];
        if ((p - p.adjoint()).norm() > cfg.tol() || (p * p - p).norm() > cfg.tol()) {
            throw PreconditionError("build_spectral: not an orthogonal projection");
        }
        if (std::abs(p.trace().real() - 1.0) > cfg.tol()) throw PreconditionError("build_spectral: projection is not rank one");
        for (std::size_t l = 0; l < k; ++l) {
            if ((p * projections[l]).norm() > cfg.tol()) {
                throw PreconditionError("build_spectral: projections are not pairwise orthogonal");
            }
        }
        total += p;
    }
    if (spectral_norm(CMatrix(total - CMatrix::Identity(n, n))) > cfg.tol()) {
        throw PreconditionError("build_spectral: projections do not sum to the identity");
    }
    return combine(scalar_extremes, projections);
}

std::vector<BoundaryMass> boundary_component_mass(const DiscreteMatrixMeasure& mu, std::span<const int> expected_tags,
                                                  const MeasureConfig& cfg) {
    mu.check_shape();
    std::map<int, CMatrix> sums;
    for (int t : expected_tags) sums.emplace(t, CMatrix::Zero(mu.N, mu.N));
    for (const auto& a : mu.atoms) {
        if (!a.tag) throw ShapeError("boundary_component_mass: atom '" + a.id + "' has no component tag");
        auto it = sums.try_emplace(*a.tag, CMatrix::Zero(mu.N, mu.N)).first;
        it->second += hermitian_part(a.weight);
    }
    std::vector<BoundaryMass> out;
    for (auto& [tag, mass] : sums) {
        Eigen::JacobiSVD<CMatrix> svd(mass);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        out.push_back(BoundaryMass{tag, mass, smin > cfg.tol()});
    }
    return out;
}

}  // namespace herglotz
