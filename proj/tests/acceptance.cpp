// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every random instance is seeded.

#include "herglotz/agler.hpp"
#include "herglotz/annulus.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/matrix_measure.hpp"
#include "herglotz/schur.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace herglotz;
using herglotz::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

// ---------------------------------------------------------------------------
// 1. conv0 equivalence

Outcome conv0_equivalence() {
    Outcome o;
    Rng rng(101);
    int instances = 0, mismatches = 0, library_mismatches = 0, extreme = 0;
    while (instances < 200) {
        const int m = rng.integer(0, 4);
        const int n = rng.integer(1, 8);
        RVector lambda(n);
        for (int j = 0; j < n; ++j) lambda(j) = rng.uniform(0.05, 1.0);
        lambda /= lambda.sum();
        RMatrix u(m, n);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) u(i, j) = rng.normal();
        }
        // Degenerate families: repeated columns and low-rank point sets.
        if (n >= 2 && rng.coin(0.25)) u.col(n - 1) = u.col(0);
        if (m >= 2 && rng.coin(0.25)) u.row(m - 1) = u.row(0) * rng.normal();
        // Project so that lambda represents zero.
        if (m > 0) u -= (u * lambda) * lambda.transpose() / lambda.squaredNorm();

        const auto c = herglotz::testing::oracle_conv0(u, lambda);
        const bool agree = c.unique_lambda == c.one_dim_relations && c.one_dim_relations == c.trivial_augmented;
        if (!agree) ++mismatches;

        std::vector<ConstraintVector> pts;
        std::vector<double> w;
        for (int j = 0; j < n; ++j) {
            pts.emplace_back(RVector(u.col(j)));
            w.push_back(lambda(j));
        }
        const bool lib = zero_interior_convex_hull(pts, w);
        if (lib != c.trivial_augmented) ++library_mismatches;
        if (lib) ++extreme;
        ++instances;
    }
    o.detail << instances << " instances, " << extreme << " unique, " << mismatches
             << " mismatches among the three conditions, " << library_mismatches << " library mismatches";
    o.require(mismatches == 0, "conditions disagree");
    o.require(library_mismatches == 0, "library disagrees");
    o.require(extreme > 0 && extreme < instances, "both verdicts represented");
    return o;
}

// ---------------------------------------------------------------------------
// 2. extremality oracle agreement

Outcome oracle_agreement() {
    Outcome o;
    Rng rng(202);
    int count = 0, disagreements = 0, extreme = 0;
    while (count < 100) {
        const int N = rng.integer(1, 3);
        const int m = rng.integer(0, 2);
        const int n = rng.integer(1, (m + 1) * N * N);
        DiscreteMatrixMeasure mu;
        if (!herglotz::testing::random_member(rng, N, m, n, rng.coin(), mu)) continue;
        const bool lib = is_extreme(mu).is_extreme;
        const bool ref = herglotz::testing::oracle_extreme(pruned(mu)).extreme;
        if (lib != ref) ++disagreements;
        if (lib) ++extreme;
        ++count;
    }
    o.detail << count << " members, " << extreme << " extreme, " << disagreements << " disagreements";
    o.require(disagreements == 0, "verdicts differ");
    return o;
}

// ---------------------------------------------------------------------------
// 3. support bound

Outcome support_bound() {
    Outcome o;
    Rng rng(303);
    int extreme = 0, over_bound = 0, large = 0, unsplit = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const int N = rng.integer(1, 2);
        const int m = rng.integer(0, 2);
        const int bound = (m + 1) * N * N;
        const int n = rng.integer(1, 2 * bound + 2);
        DiscreteMatrixMeasure mu;
        if (!herglotz::testing::random_member(rng, N, m, n, rng.coin(), mu)) continue;
        const auto r = is_extreme(mu);
        if (r.is_extreme) {
            ++extreme;
            if (r.support_count > bound) ++over_bound;
        }
        if (r.support_count > bound) {
            ++large;
            const auto d = choquet_decompose(mu);
            if (d.terms.size() < 2 || r.is_extreme) ++unsplit;
        }
    }
    o.detail << extreme << " extreme found, " << over_bound << " above (m+1)N^2; " << large
             << " larger members, " << unsplit << " not split";
    o.require(over_bound == 0, "extreme measure above the bound");
    o.require(unsplit == 0, "large member not split");
    o.require(large > 10, "enough large members");
    return o;
}

// ---------------------------------------------------------------------------
// 4. Choquet reconstruction

Outcome choquet_reconstruction() {
    Outcome o;
    Rng rng(404);
    int count = 0, bad_leaves = 0;
    double worst = 0.0;
    while (count < 50) {
        const int N = rng.integer(1, 2);
        const int m = rng.integer(0, 2);
        const int n = rng.integer(2, 3 * (m + 1) * N * N);
        DiscreteMatrixMeasure mu;
        if (!herglotz::testing::random_member(rng, N, m, n, rng.coin(), mu)) continue;
        const auto d = choquet_decompose(mu);
        worst = std::max(worst, atomwise_distance(recombine(d), mu));
        for (const auto& t : d.terms) {
            if (!is_extreme(t.measure).is_extreme) ++bad_leaves;
        }
        ++count;
    }
    o.detail << count << " members, max reconstruction error " << worst << ", " << bad_leaves << " non-extreme leaves";
    o.require(worst <= 1e-9, "reconstruction error");
    o.require(bad_leaves == 0, "non-extreme leaf");
    return o;
}

// ---------------------------------------------------------------------------
// 5. constructor theorems

DiscreteMatrixMeasure scalar_extreme(Rng& rng, int m, const std::string& prefix) {
    for (;;) {
        const auto pool = herglotz::testing::make_pool(rng, m, m + 1, prefix);
        DiscreteMatrixMeasure mu;
        if (herglotz::testing::random_scalar_extreme(rng, pool, mu)) return mu;
    }
}

// PSD L_k summing to I, with ranks given.
std::vector<CMatrix> resolution(Rng& rng, int N, const std::vector<int>& ranks) {
    std::vector<CMatrix> a;
    CMatrix s = CMatrix::Zero(N, N);
    for (int r : ranks) {
        a.push_back(herglotz::testing::random_psd(rng, N, r));
        s += a.back();
    }
    const CMatrix is = pd_inv_sqrt(s);
    for (auto& x : a) x = hermitian_part(CMatrix(is * x * is));
    return a;
}

Outcome constructors() {
    Outcome o;
    Rng rng(505);
    int spectral_ok = 0, special_ok = 0, con_ok = 0;
    for (int k = 0; k < 25; ++k) {
        const int N = rng.integer(2, 3);
        const int m = rng.integer(0, 2);
        const CMatrix u = herglotz::testing::random_unitary(rng, N);
        std::vector<CMatrix> proj;
        std::vector<DiscreteMatrixMeasure> mus;
        for (int i = 0; i < N; ++i) {
            proj.push_back(u.col(i) * u.col(i).adjoint());
            mus.push_back(scalar_extreme(rng, m, "s" + std::to_string(i) + "_"));
        }
        if (is_extreme(build_spectral(proj, mus)).is_extreme) ++spectral_ok;
    }
    for (int k = 0; k < 25; ++k) {
        // Rank-one L_k: N to N^2 generic lines are weakly independent.
        const int N = 2;
        const int m = rng.integer(0, 2);
        const int K = rng.integer(N, N * N);
        const auto ls = resolution(rng, N, std::vector<int>(static_cast<std::size_t>(K), 1));
        std::vector<Subspace> ranges;
        for (const auto& l : ls) ranges.push_back(Subspace::range_of(l));
        std::vector<DiscreteMatrixMeasure> mus;
        for (int i = 0; i < K; ++i) mus.push_back(scalar_extreme(rng, m, "d" + std::to_string(i) + "_"));
        if (weakly_independent(ranges) && is_extreme(build_special(mus, ls)).is_extreme) ++special_ok;
    }
    for (int k = 0; k < 25; ++k) {
        // Two full-rank L_k, or N^2 + 1 rank-one ones: never weakly independent.
        const int N = 2;
        const int m = rng.integer(0, 2);
        const bool full = rng.coin();
        const auto ls = full ? resolution(rng, N, {N, N}) : resolution(rng, N, std::vector<int>(N * N + 1, 1));
        std::vector<Subspace> ranges;
        for (const auto& l : ls) ranges.push_back(Subspace::range_of(l));
        std::vector<DiscreteMatrixMeasure> mus;
        for (std::size_t i = 0; i < ls.size(); ++i) mus.push_back(scalar_extreme(rng, m, "c" + std::to_string(i) + "_"));
        const auto mu = build_special(mus, ls);
        const auto r = is_extreme(mu);
        if (weakly_independent(ranges) || r.is_extreme || !r.witness) continue;
        try {
            const auto sp = split_along(mu, *r.witness);
            const bool parts = validate_membership(sp.plus).member && validate_membership(sp.minus).member;
            ChoquetDecomposition d{{{sp.lambda, sp.plus}, {1.0 - sp.lambda, sp.minus}}, 1};
            if (parts && atomwise_distance(recombine(d), mu) < 1e-10) ++con_ok;
        } catch (const std::exception&) {
        }
    }
    o.detail << "spectral " << spectral_ok << "/25 extreme, special " << special_ok << "/25 extreme, dependent "
             << con_ok << "/25 split by their witness";
    o.require(spectral_ok == 25 && special_ok == 25 && con_ok == 25, "constructor outcome");
    return o;
}

// ---------------------------------------------------------------------------
// 6. Arveson fixtures

Outcome arveson() {
    Outcome o;
    CMatrix e1(2, 1), e2(2, 1), e12(2, 1);
    e1 << 1.0, 0.0;
    e2 << 0.0, 1.0;
    e12 << 1.0, 1.0;
    const bool wi = weakly_independent(std::vector<Subspace>{Subspace::span(e1), Subspace::span(e2), Subspace::span(e12)});

    DiscreteMatrixMeasure tri{2, 0, {}};
    std::vector<CMatrix> vs;
    for (int k = 0; k < 3; ++k) {
        CMatrix v(2, 1);
        v << std::cos(2.0 * kPi * k / 3), std::sin(2.0 * kPi * k / 3);
        v *= std::sqrt(2.0 / 3.0);
        vs.push_back(v);
        tri.atoms.push_back(Atom{"t" + std::to_string(k), std::nullopt, ConstraintVector{}, v * v.adjoint()});
    }
    CMatrix sum = CMatrix::Zero(2, 2);
    for (const auto& a : tri.atoms) sum += a.weight;
    const double mass = (sum - CMatrix::Identity(2, 2)).norm();
    const bool ext = is_extreme(tri).is_extreme;
    // Spectral measures have pairwise orthogonal ranges and at most N atoms.
    bool orthogonal = true;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) orthogonal = orthogonal && std::abs((vs[i].adjoint() * vs[j])(0, 0)) < 1e-12;
    }
    const bool non_spectral = !orthogonal && tri.atoms.size() > 2;
    o.detail << "{e1, e2, e1+e2} weakly independent: " << (wi ? "yes" : "no") << "; triple mass error " << mass
             << ", extreme: " << (ext ? "yes" : "no") << ", non-spectral: " << (non_spectral ? "yes" : "no");
    o.require(wi && mass <= 1e-12 && ext && non_spectral, "fixture");
    return o;
}

// ---------------------------------------------------------------------------
// 7. annulus solver

Outcome annulus_solver() {
    Outcome o;
    const Annulus a;  // q = 0.5, t0 = sqrt(0.5), M = 64
    const int k = a.grid();
    double worst = 0.0;
    const std::vector<std::function<double(cplx)>> traces{
        [](cplx) { return 1.0; }, [](cplx z) { return std::log(std::abs(z)); }, [](cplx z) { return z.real(); }};
    double log_period = 0.0;
    for (std::size_t t = 0; t < traces.size(); ++t) {
        std::vector<double> outer, inner;
        for (int l = 0; l < k; ++l) {
            outer.push_back(traces[t](a.location(a.node(Component::Outer, l))));
            inner.push_back(traces[t](a.location(a.node(Component::Inner, l))));
        }
        const auto h = dirichlet_solve(FourierData::from_samples(outer, a.modes()),
                                       FourierData::from_samples(inner, a.modes()), a.q(), a.modes());
        if (t == 1) log_period = conjugate_period(h);
        for (int i = 1; i <= 20; ++i) {
            for (int j = 0; j < 20; ++j) {
                const cplx z = std::polar(a.q() + (1.0 - a.q()) * i / 21.0, 2.0 * kPi * j / 20);
                worst = std::max(worst, std::abs(h(z) - traces[t](z)));
            }
        }
    }
    double integral = 0.0;
    double spread = 0.0;
    for (Component c : {Component::Outer, Component::Inner}) {
        double lo = 1e300, hi = -1e300;
        for (int l = 0; l < k; ++l) {
            const BoundaryPoint x = a.node(c, l);
            const double p = phi_eval(a, x);
            integral += p * a.harmonic_density(x) / k;
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        spread = std::max(spread, hi - lo);
    }
    o.detail << "interior error " << worst << ", period(log|z|) - 2pi = " << log_period - 2.0 * kPi
             << ", integral of phi_1 " << integral << ", phi_1 angular spread " << spread;
    o.require(worst <= 1e-10, "interior error");
    o.require(std::abs(log_period - 2.0 * kPi) <= 1e-10, "period of log|z|");
    o.require(std::abs(integral) <= 1e-8, "integral of phi_1");
    o.require(spread <= 1e-10, "phi_1 angle invariance");
    return o;
}

// ---------------------------------------------------------------------------
// 8. extremal Herglotz / Schur functions

Outcome extremal_functions() {
    Outcome o;
    const Annulus a;
    Rng rng(808);
    double at_t0 = 0.0, s_at_t0 = 0.0, min_re = 1e300, boundary = 0.0, circles = 0.0;
    int extreme = 0;
    const int pairs = 10;
    const double r_out = 1.0 - 1.0 / (4.0 * a.modes());
    const double r_in = a.q() * (1.0 + 1.0 / (4.0 * a.modes()));
    for (int p = 0; p < pairs; ++p) {
        const ExtremalPair x = make_extremal_pair(a, rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi));
        at_t0 = std::max(at_t0, std::abs(extremal_herglotz(a, x, a.t0()) - 1.0));
        s_at_t0 = std::max(s_at_t0, std::abs(extremal_schur(a, x, a.t0())));
        for (int i = 1; i <= 20; ++i) {
            for (int j = 0; j < 20; ++j) {
                const cplx z = std::polar(a.q() + (1.0 - a.q()) * i / 21.0, 2.0 * kPi * j / 20 + 0.05);
                min_re = std::min(min_re, extremal_herglotz(a, x, z).real());
            }
        }
        for (int j = 0; j < 64; ++j) {
            const double th = 2.0 * kPi * (j + 0.5) / 64;
            for (Component c : {Component::Outer, Component::Inner}) {
                const BoundaryPoint z = BoundaryPoint::make(c, th);
                const cplx f = extremal_herglotz_boundary(a, x, z);
                boundary = std::max(boundary, std::abs(std::abs(cayley_scalar(f)) - 1.0));
            }
            for (double r : {r_out, r_in}) {
                const cplx s = extremal_schur(a, x, std::polar(r, th));
                circles = std::max(circles, std::abs(std::abs(s) - 1.0));
            }
        }
        if (is_extreme(extremal_measure(a, x)).is_extreme) ++extreme;
    }
    o.detail << pairs << " pairs: |f_x(t0) - 1| " << at_t0 << ", min Re f_x " << min_re
             << ", max ||s_x| - 1| on the boundary circles " << boundary << ", |s_x(t0)| " << s_at_t0 << ", extreme "
             << extreme << "/" << pairs << " (informational: max ||s_x| - 1| at radii 1 - 1/(4M) and q(1 + 1/(4M)) is "
             << circles << ")";
    o.require(at_t0 <= 1e-8, "f_x(t0)");
    o.require(min_re > 0.0, "Re f_x");
    o.require(boundary <= 1e-4, "boundary modulus");
    o.require(s_at_t0 <= 1e-8, "s_x(t0)");
    o.require(extreme == pairs, "pair extremality");
    return o;
}

// ---------------------------------------------------------------------------
// 9. identity residuals

Outcome identity_residuals() {
    Outcome o;
    const Annulus a;
    Rng rng(909);
    double fdef = 0.0, sdef = 0.0, useful = 0.0, sdefect = 0.0, lww = 0.0, trip = 0.0;
    auto point = [&] {
        return std::polar(rng.uniform(a.q() + 0.05, 0.95), rng.uniform(0.0, 2.0 * kPi));
    };
    for (int k = 0; k < 100; ++k) {
        // Matrix extremal Herglotz function: spectral combination of two
        // scalar extremal measures, atoms kept near the angle of t0.
        const CMatrix u = herglotz::testing::random_unitary(rng, 2);
        std::vector<CMatrix> proj{u.col(0) * u.col(0).adjoint(), u.col(1) * u.col(1).adjoint()};
        std::vector<DiscreteMatrixMeasure> mus;
        for (int i = 0; i < 2; ++i) {
            mus.push_back(extremal_measure(a, make_extremal_pair(a, rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))));
        }
        const auto mu = build_spectral(proj, mus);
        const cplx z = point(), w = point();
        const CMatrix fz = herglotz_from_measure(a, mu, z);
        const CMatrix fw = herglotz_from_measure(a, mu, w);
        fdef = std::max(fdef, f_defect_residual(fz, fw));
        sdef = std::max(sdef, s_defect_residual(fz, fw));
        useful = std::max(useful, useful_residual(fz));

        // Move S(t0) = 0 to a random contraction C and check the normalized
        // defect relation for S = L_C^-1[cayley(F)].
        const CMatrix c = herglotz::testing::random_contraction(rng, 2, rng.uniform(0.0, 0.9));
        const CMatrix sz = mobius_inverse(c, cayley_matrix(fz));
        const CMatrix sw = mobius_inverse(c, cayley_matrix(fw));
        const CMatrix st0 = mobius_inverse(c, cayley_matrix(herglotz_from_measure(a, mu, a.t0())));
        sdefect = std::max(sdefect, sdefect_residual(st0, sz, sw));

        const Eigen::Index n = rng.integer(1, 3);
        const CMatrix wm = herglotz::testing::random_contraction(rng, n, rng.uniform(0.0, 0.9));
        const CMatrix zm = herglotz::testing::random_contraction(rng, n, rng.uniform(0.0, 0.99));
        lww = std::max(lww, mobius_apply(wm, wm).norm());
        trip = std::max(trip, (mobius_inverse(wm, mobius_apply(wm, zm)) - zm).norm());
    }
    o.detail << "F-defect " << fdef << ", S-defect " << sdef << ", useful " << useful << ", normalized defect "
             << sdefect << ", |L_W[W]| " << lww << ", round trip " << trip;
    o.require(fdef <= 1e-10 && sdef <= 1e-10 && useful <= 1e-10, "Cayley identities");
    o.require(sdefect <= 1e-9, "normalized defect");
    o.require(lww <= 1e-11 && trip <= 1e-11, "ball automorphisms");
    return o;
}

// ---------------------------------------------------------------------------
// 10. Agler reconstruction

Outcome agler() {
    Outcome o;
    const Annulus a;
    const auto grid = default_zw_grid(a, 8);

    const ScalarFunction zero = [](cplx) { return cplx(0.0); };
    const auto r0 = agler_reconstruct(a, zero, agler_measure(a, zero), grid);

    const ExtremalPair x = make_extremal_pair(a, 0.4, 2.0);
    const ScalarFunction sx = [&](cplx z) { return extremal_schur(a, x, z); };
    const std::vector<AglerTerm> delta{AglerTerm{x, 1.0}};
    const auto r1 = agler_reconstruct(a, sx, delta, grid);

    const ScalarFunction lin = [&](cplx z) { return 0.2 * (z - a.t0()); };
    const auto r2 = agler_reconstruct(a, lin, agler_measure(a, lin), grid);

    o.detail << "s = 0: " << r0.max_residual << ", s = s_x: " << r1.max_residual << ", s = 0.2(z - t0): "
             << r2.max_residual << " (quadrature aliasing scale " << r2.aliasing_bound << ")";
    o.require(r0.max_residual <= 1e-6, "s = 0");
    o.require(r1.max_residual <= 1e-8, "s = s_x");
    o.require(r2.max_residual <= 1e-5, "s = 0.2(z - t0)");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"conv0 equivalence", conv0_equivalence},
        {"extremality oracle agreement", oracle_agreement},
        {"support bound", support_bound},
        {"Choquet reconstruction", choquet_reconstruction},
        {"constructor theorems", constructors},
        {"Arveson fixtures", arveson},
        {"annulus solver", annulus_solver},
        {"extremal Herglotz and Schur functions", extremal_functions},
        {"identity residuals", identity_residuals},
        {"Agler reconstruction", agler},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!out.pass) ++failures;
        std::printf("%s %2zu %s: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    out.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
