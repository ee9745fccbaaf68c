#include "herglotz/annulus.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/schur.hpp"

#include "support/annulus_oracle.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace herglotz;
using herglotz::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> samples(int k, const std::function<double(double)>& f) {
    std::vector<double> out;
    for (int l = 0; l < k; ++l) out.push_back(f(2.0 * kPi * l / k));
    return out;
}

LaurentHarmonic solve_traces(const Annulus& a, const std::function<double(cplx)>& u) {
    const int k = a.grid();
    const double q = a.q();
    const auto outer = samples(k, [&](double t) { return u(std::polar(1.0, t)); });
    const auto inner = samples(k, [&](double t) { return u(std::polar(q, t)); });
    return dirichlet_solve(FourierData::from_samples(outer, a.modes()), FourierData::from_samples(inner, a.modes()), q,
                           a.modes());
}

std::vector<cplx> interior_grid(const Annulus& a, int n) {
    std::vector<cplx> out;
    for (int i = 1; i <= n; ++i) {
        const double r = a.q() + (1.0 - a.q()) * i / (n + 1);
        for (int j = 0; j < n; ++j) out.push_back(std::polar(r, 2.0 * kPi * j / n + 0.1));
    }
    return out;
}

}  // namespace

TEST_SUITE("annulus") {

TEST_CASE("configuration is validated") {
    CHECK_THROWS_AS(Annulus(AnnulusConfig{1.0}), ShapeError);
    CHECK_THROWS_AS(Annulus(AnnulusConfig{0.5, cplx(0.4, 0.0)}), ShapeError);
    CHECK_THROWS_AS(Annulus(AnnulusConfig{0.5, cplx(0.7, 0.0), 4}), ShapeError);
    CHECK_NOTHROW(Annulus(AnnulusConfig{0.3, cplx(0.0, 0.6), 16, 32}));
}

TEST_CASE("kernel matches the separated Fourier series") {
    Rng rng(31);
    for (double q : {0.3, 0.5, 0.7}) {
        const Annulus a(AnnulusConfig{q, cplx(std::sqrt(q), 0.0)});
        for (int trial = 0; trial < 40; ++trial) {
            const bool inner = rng.coin();
            const BoundaryPoint x = BoundaryPoint::make(inner ? Component::Inner : Component::Outer,
                                                        rng.uniform(0.0, 2.0 * kPi));
            const cplx z = std::polar(rng.uniform(q + 0.02, 0.98), rng.uniform(0.0, 2.0 * kPi));
            const double ref = herglotz::testing::series_density(q, inner, x.angle, z);
            CHECK(std::abs(a.poisson_density(x, z) - ref) < 1e-11 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("harmonic measure at t0 is a probability measure") {
    const Annulus a;
    double outer = 0.0, inner = 0.0;
    for (int l = 0; l < a.grid(); ++l) {
        outer += a.harmonic_density(a.node(Component::Outer, l)) / a.grid();
        inner += a.harmonic_density(a.node(Component::Inner, l)) / a.grid();
    }
    CHECK(std::abs(outer + inner - 1.0) < 1e-12);
    CHECK(std::abs(outer - (1.0 - std::log(std::abs(a.t0())) / a.log_q())) < 1e-12);
    CHECK(a.poisson_kernel(a.t0(), a.node(Component::Inner, 3)) == doctest::Approx(1.0));
}

TEST_CASE("dirichlet_solve examples") {
    const double q = 0.5;
    const int M = 16;
    FourierData ones = FourierData::zeros(M);
    ones.coeffs[M] = 1.0;
    const auto h1 = dirichlet_solve(ones, ones, q, M);
    CHECK(h1.a0 == doctest::Approx(1.0));
    CHECK(std::abs(h1.b0) < 1e-15);
    CHECK(std::abs(conjugate_period(h1)) < 1e-15);

    FourierData zero = FourierData::zeros(M);
    FourierData lq = FourierData::zeros(M);
    lq.coeffs[M] = std::log(q);
    const auto hl = dirichlet_solve(zero, lq, q, M);
    CHECK(std::abs(hl.a0) < 1e-15);
    CHECK(hl.b0 == doctest::Approx(1.0));
    CHECK(conjugate_period(hl) == doctest::Approx(2.0 * kPi));

    FourierData co = FourierData::zeros(M), ci = FourierData::zeros(M);
    co.coeffs[M + 1] = co.coeffs[M - 1] = 0.5;
    ci.coeffs[M + 1] = ci.coeffs[M - 1] = 0.5 * q;
    const auto hr = dirichlet_solve(co, ci, q, M);
    CHECK(std::abs(hr.coefficient(1) - 1.0) < 1e-14);
    CHECK(std::abs(hr.coefficient(-1)) < 1e-14);
    CHECK(std::abs(conjugate_period(hr)) < 1e-15);

    // Non-real data are rejected.
    FourierData bad = FourierData::zeros(M);
    bad.coeffs[M + 2] = cplx(0.0, 1.0);
    CHECK_THROWS_AS(dirichlet_solve(bad, zero, q, M), ShapeError);
}

TEST_CASE("dirichlet_solve is exact on harmonic polynomials") {
    const Annulus a;
    const auto grid = interior_grid(a, 12);
    std::vector<std::function<double(cplx)>> fns{
        [](cplx) { return 1.0; },
        [](cplx z) { return std::log(std::abs(z)); },
    };
    for (int n = 1; n <= a.modes() / 2; ++n) {
        fns.push_back([n](cplx z) { return std::pow(z, n).real(); });
        fns.push_back([n](cplx z) { return std::pow(z, n).imag(); });
    }
    for (int n = 1; n <= 8; ++n) fns.push_back([n](cplx z) { return std::pow(z, -n).real(); });
    for (const auto& u : fns) {
        const auto h = solve_traces(a, u);
        double scale = 1.0;
        for (const cplx z : grid) scale = std::max(scale, std::abs(u(z)));
        double err = 0.0;
        for (const cplx z : grid) err = std::max(err, std::abs(h(z) - u(z)));
        CHECK(err <= 1e-10 * scale);
    }
}

TEST_CASE("sampled maximum principle") {
    const Annulus a;
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        // Smooth random traces: a constant plus three cos/sin modes per circle.
        std::vector<double> co(7), ci(7);
        for (auto& c : co) c = rng.normal() / 2.0;
        for (auto& c : ci) c = rng.normal() / 2.0;
        auto trace = [](const std::vector<double>& c, double t) {
            double s = c[0];
            for (int n = 1; n <= 3; ++n) s += c[2 * n - 1] * std::cos(n * t) + c[2 * n] * std::sin(n * t);
            return s;
        };
        const auto o = samples(a.grid(), [&](double t) { return trace(co, t); });
        const auto i = samples(a.grid(), [&](double t) { return trace(ci, t); });
        const auto h = dirichlet_solve(FourierData::from_samples(o, a.modes()), FourierData::from_samples(i, a.modes()),
                                       a.q(), a.modes());
        double lo = 1e300, hi = -1e300;
        for (double v : o) lo = std::min(lo, v), hi = std::max(hi, v);
        for (double v : i) lo = std::min(lo, v), hi = std::max(hi, v);
        for (const cplx z : interior_grid(a, 10)) {
            CHECK(h(z) >= lo - 1e-8);
            CHECK(h(z) <= hi + 1e-8);
        }
    }
}

TEST_CASE("poisson_matrix_row reproduces harmonic functions") {
    const Annulus a;
    const int k = a.grid();
    auto apply = [&](const RVector& row, const std::function<double(cplx)>& u) {
        double s = 0.0;
        for (int l = 0; l < k; ++l) {
            s += row(l) * u(a.location(a.node(Component::Outer, l)));
            s += row(k + l) * u(a.location(a.node(Component::Inner, l)));
        }
        return s;
    };
    const RVector r0 = poisson_matrix_row(a, a.t0());
    for (int l = 0; l < k; ++l) {
        CHECK(std::abs(r0(l) - a.harmonic_density(a.node(Component::Outer, l)) / k) < 1e-11);
        CHECK(std::abs(r0(k + l) - a.harmonic_density(a.node(Component::Inner, l)) / k) < 1e-11);
    }
    for (const cplx z : {a.t0(), cplx(0.6, 0.3), cplx(-0.8, -0.1), cplx(0.0, 0.95)}) {
        const RVector row = poisson_matrix_row(a, z);
        CHECK(std::abs(apply(row, [](cplx) { return 1.0; }) - 1.0) < 1e-12);
        CHECK(std::abs(apply(row, [](cplx w) { return w.real(); }) - z.real()) < 1e-12);
        CHECK(std::abs(apply(row, [](cplx w) { return std::log(std::abs(w)); }) - std::log(std::abs(z))) < 1e-12);
    }
    CHECK_THROWS_AS(poisson_matrix_row(a, 0.2), PreconditionError);
}

TEST_CASE("phi_1 against the conjugate-period quadrature oracle") {
    for (double q : {0.3, 0.5, 0.7}) {
        const Annulus a(AnnulusConfig{q, cplx(std::sqrt(q), 0.0)});
        double integral = 0.0;
        for (Component c : {Component::Outer, Component::Inner}) {
            const bool inner = c == Component::Inner;
            for (int l = 0; l < a.grid(); l += 37) {
                const BoundaryPoint x = a.node(c, l);
                const double hd = herglotz::testing::series_density(q, inner, x.angle, a.t0());
                const double ref = herglotz::testing::flux_period(
                    [&](cplx z) { return herglotz::testing::series_density(q, inner, x.angle, z) / hd; },
                    std::sqrt(q));
                const double phi = phi_eval(a, x);
                // The series evaluates hd to about 1e-14 absolute, which dominates
                // when the atom sits far from t0 and hd is tiny.
                CHECK(std::abs(phi - ref) < (1e-7 + 1e-14 / hd) * std::abs(ref));
                CHECK((inner ? phi < 0.0 : phi > 0.0));
            }
            for (int l = 0; l < a.grid(); ++l) {
                const BoundaryPoint x = a.node(c, l);
                integral += phi_eval(a, x) * a.harmonic_density(x) / a.grid();
            }
        }
        CHECK(std::abs(integral) < 1e-8);
    }
}

TEST_CASE("phi_1 is inversely proportional to the harmonic density") {
    // The conjugate period of z -> P_z(x) is the constant flux of the
    // density divided by its value at t0, so it varies with the angle
    // exactly as 1 / density(t0, x).
    const Annulus a;
    const BoundaryPoint near = BoundaryPoint::make(Component::Outer, std::arg(a.t0()));
    const BoundaryPoint far = BoundaryPoint::make(Component::Outer, std::arg(a.t0()) + kPi);
    CHECK(phi_eval(a, near) * a.harmonic_density(near) ==
          doctest::Approx(phi_eval(a, far) * a.harmonic_density(far)).epsilon(1e-13));
    CHECK(phi_eval(a, far) > phi_eval(a, near));
}

TEST_CASE("extremal pairs") {
    Rng rng(53);
    const Annulus a;
    for (int trial = 0; trial < 20; ++trial) {
        const ExtremalPair x = make_extremal_pair(a, rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi));
        CHECK(x.w0 > 0.0);
        CHECK(x.w1 > 0.0);
        CHECK(std::abs(x.w0 + x.w1 - 1.0) < 1e-14);
        // Oracle: w0 phi(x0) + w1 phi(x1) = 0 reduces to w0 / d0 = w1 / d1.
        const double d0 = herglotz::testing::series_density(a.q(), false, x.outer.angle, a.t0());
        const double d1 = herglotz::testing::series_density(a.q(), true, x.inner.angle, a.t0());
        CHECK(std::abs(x.w0 - d0 / (d0 + d1)) < 1e-11);

        const auto mu = extremal_measure(a, x);
        CHECK(validate_membership(mu).member);
        CHECK(is_extreme(mu).is_extreme);

        CHECK(std::abs(extremal_herglotz(a, x, a.t0()) - 1.0) < 1e-12);
        CHECK(std::abs(cayley_scalar(extremal_herglotz(a, x, a.t0()))) < 1e-12);

        // Re f_x against the series oracle, and positivity on an interior grid.
        for (const cplx z : interior_grid(a, 20)) {
            const cplx f = extremal_herglotz(a, x, z);
            CHECK(f.real() > 0.0);
            const double p0 = x.w0 * herglotz::testing::series_density(a.q(), false, x.outer.angle, z) / d0;
            const double p1 = x.w1 * herglotz::testing::series_density(a.q(), true, x.inner.angle, z) / d1;
            // Atoms far from t0 carry weights divided by tiny densities, which
            // amplify the absolute error of either density evaluation. The
            // series itself loses accuracy like eps / (1 - r)^2 near the rim.
            CHECK(std::abs(f.real() - (p0 + p1)) < 1e-9 * std::max(1.0, x.w0 / d0 + x.w1 / d1));
        }

        // Single-valued: continuous across the branch cut of Log z.
        for (double r : {0.55, 0.7, 0.9}) {
            const cplx above = extremal_herglotz(a, x, std::polar(r, kPi - 1e-13));
            const cplx below = extremal_herglotz(a, x, std::polar(r, -kPi + 1e-13));
            CHECK(std::abs(above - below) < 1e-8 * std::max(1.0, std::abs(above)));
        }

        // Modulus one on the boundary away from the atoms.
        for (Component c : {Component::Outer, Component::Inner}) {
            const BoundaryPoint z = BoundaryPoint::make(c, x.outer.angle + 0.123 + trial);
            const cplx f = extremal_herglotz_boundary(a, x, z);
            CHECK(std::abs(f.real()) < 1e-12 * std::max(1.0, std::abs(f)));
            CHECK(std::abs(std::abs(cayley_scalar(f)) - 1.0) < 1e-12);
        }

        // The measure route gives the same function.
        const cplx z = cplx(0.1, 0.8);
        const cplx fz = extremal_herglotz(a, x, z);
        CHECK(std::abs(herglotz_from_measure(a, mu, z)(0, 0) - fz) < 1e-12 * std::max(1.0, std::abs(fz)));
    }
    CHECK_THROWS_AS(extremal_herglotz(a, make_extremal_pair(a, 0.0, 0.0), 1.5), PreconditionError);
    CHECK_THROWS_AS(extremal_herglotz_boundary(a, make_extremal_pair(a, 0.0, 1.0),
                                               BoundaryPoint::make(Component::Inner, 1.0)),
                    PreconditionError);
}

TEST_CASE("boundary ids round trip") {
    const BoundaryPoint x = BoundaryPoint::make(Component::Inner, 2.0 * kPi / 3);
    const BoundaryPoint y = parse_boundary_id(boundary_id(x));
    CHECK(y.component == Component::Inner);
    CHECK(y.angle == x.angle);
    CHECK_THROWS_AS(parse_boundary_id("middle:1"), ShapeError);
    CHECK_THROWS_AS(parse_boundary_id("outer:1x"), ShapeError);
    CHECK(BoundaryPoint::make(Component::Outer, -kPi / 2).angle == doctest::Approx(1.5 * kPi));
}

}  // TEST_SUITE
