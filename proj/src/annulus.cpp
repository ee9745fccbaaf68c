#include "herglotz/annulus.hpp"

#include "herglotz/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace herglotz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

}  // namespace

BoundaryPoint BoundaryPoint::make(Component c, double angle) {
    if (!std::isfinite(angle)) throw ShapeError("BoundaryPoint: angle must be finite");
    return BoundaryPoint{c, wrap_angle(angle)};
}

// ---------------------------------------------------------------------------
// Annulus

Annulus::Annulus(const AnnulusConfig& cfg) : cfg_(cfg) {
    if (!(cfg.q > 0.0 && cfg.q < 1.0)) throw ShapeError("annulus: q must lie in (0, 1)");
    const double r = std::abs(cfg.t0);
    if (!(r > cfg.q && r < 1.0)) throw ShapeError("annulus: t0 must lie strictly inside the annulus");
    if (cfg.modes < 8) throw ShapeError("annulus: M must be at least 8");
    if (cfg.grid < 8) throw ShapeError("annulus: grid must have at least 8 nodes");
    log_q_ = std::log(cfg.q);
    // Image sums decay like q^(2j); stop once below double resolution.
    image_terms_ = static_cast<int>(std::ceil(std::log(1e-18) / (2.0 * log_q_))) + 2;
}

bool Annulus::contains(cplx z) const {
    const double r = std::abs(z);
    return r > cfg_.q && r < 1.0;
}

bool Annulus::in_closure(cplx z, double slack) const {
    const double r = std::abs(z);
    return r >= cfg_.q * (1.0 - slack) && r <= 1.0 + slack;
}

cplx Annulus::location(const BoundaryPoint& x) const {
    const double r = x.component == Component::Outer ? 1.0 : cfg_.q;
    return std::polar(r, x.angle);
}

BoundaryPoint Annulus::node(Component c, int l) const {
    return BoundaryPoint{c, kTwoPi * l / cfg_.grid};
}

cplx Annulus::herglotz_kernel(const BoundaryPoint& x, cplx z) const {
    if (!in_closure(z)) throw PreconditionError("herglotz_kernel: z outside the closed annulus");
    const cplx xi = z * std::polar(1.0, -x.angle);
    const cplx logz = std::log(z);
    const double q = cfg_.q;
    cplx s;
    if (x.component == Component::Outer) {
        s = 1.0 - logz / log_q_;
        double q2j = 1.0;  // q^(2j)
        for (int j = 0; j < image_terms_; ++j) {
            const cplx a = q2j * xi;
            const cplx b = (q2j * q * q) / xi;
            s += 2.0 * a / (1.0 - a) - 2.0 * b / (1.0 - b);
            q2j *= q * q;
        }
    } else {
        s = logz / log_q_;
        double q2j1 = q;  // q^(2j+1)
        for (int j = 0; j < image_terms_; ++j) {
            const cplx a = q2j1 / xi;
            const cplx b = q2j1 * xi;
            s += 2.0 * a / (1.0 - a) - 2.0 * b / (1.0 - b);
            q2j1 *= q * q;
        }
    }
    return s;
}

double Annulus::poisson_density(const BoundaryPoint& x, cplx z) const {
    return herglotz_kernel(x, z).real();
}

double Annulus::harmonic_density(const BoundaryPoint& x) const {
    return poisson_density(x, cfg_.t0);
}

double Annulus::poisson_kernel(cplx z, const BoundaryPoint& x) const {
    return poisson_density(x, z) / harmonic_density(x);
}

// ---------------------------------------------------------------------------
// Fourier data and the Dirichlet solver

cplx FourierData::operator[](int n) const {
    if (n < -M || n > M) return 0.0;
    return coeffs[static_cast<std::size_t>(n + M)];
}

FourierData FourierData::zeros(int M) {
    return FourierData{M, std::vector<cplx>(static_cast<std::size_t>(2 * M + 1), 0.0)};
}

FourierData FourierData::from_samples(std::span<const double> samples, int M) {
    const auto k = static_cast<int>(samples.size());
    if (k == 0) throw ShapeError("FourierData: no samples");
    FourierData d = zeros(M);
    // Modes at or beyond Nyquist alias and are left at zero.
    const int top = std::min(M, (k - 1) / 2);
    for (int n = -top; n <= top; ++n) {
        cplx acc = 0.0;
        for (int l = 0; l < k; ++l) acc += samples[static_cast<std::size_t>(l)] * std::polar(1.0, -kTwoPi * n * l / k);
        d.coeffs[static_cast<std::size_t>(n + M)] = acc / static_cast<double>(k);
    }
    return d;
}

cplx LaurentHarmonic::coefficient(int n) const {
    if (n == 0 || n < -M || n > M) return 0.0;
    return c[static_cast<std::size_t>(n + M)];
}

double LaurentHarmonic::operator()(cplx z) const {
    double h = a0 + b0 * std::log(std::abs(z));
    cplx zn = 1.0;
    cplx zin = 1.0;
    const cplx iz = 1.0 / z;
    for (int n = 1; n <= M; ++n) {
        zn *= z;
        zin *= iz;
        h += (coefficient(n) * zn).real() + (coefficient(-n) * zin).real();
    }
    return h;
}

LaurentHarmonic dirichlet_solve(const FourierData& outer, const FourierData& inner, double q, int M) {
    if (!(q > 0.0 && q < 1.0)) throw ShapeError("dirichlet_solve: q must lie in (0, 1)");
    if (M < 0) throw ShapeError("dirichlet_solve: negative truncation order");
    for (const FourierData* d : {&outer, &inner}) {
        if (static_cast<int>(d->coeffs.size()) != 2 * d->M + 1) throw ShapeError("dirichlet_solve: malformed data");
        for (int n = 0; n <= d->M; ++n) {
            if (std::abs((*d)[n] - std::conj((*d)[-n])) > 1e-12 * (1.0 + std::abs((*d)[n]))) {
                throw ShapeError("dirichlet_solve: boundary data are not real");
            }
        }
    }
    LaurentHarmonic h;
    h.M = M;
    h.c.assign(static_cast<std::size_t>(2 * M + 1), 0.0);
    const double lq = std::log(q);
    h.a0 = outer[0].real();
    h.b0 = (inner[0].real() - outer[0].real()) / lq;
    for (int n = 1; n <= M; ++n) {
        const cplx u = outer[n];
        const cplx v = inner[n];
        const double qn = std::pow(q, n);
        const double den = 1.0 - qn * qn;
        if (!(den > 0.0)) throw InternalError("dirichlet_solve: singular mode system");
        // a + b = 2u, a q^n + b q^-n = 2v with a = c_n, b = conj(c_-n).
        const cplx a = (2.0 * u - 2.0 * v * qn) / den;
        const cplx b = (2.0 * v * qn - 2.0 * u * qn * qn) / den;
        h.c[static_cast<std::size_t>(n + M)] = a;
        h.c[static_cast<std::size_t>(-n + M)] = std::conj(b);
    }
    return h;
}

double conjugate_period(const LaurentHarmonic& h) {
    return kTwoPi * h.b0;
}

RVector poisson_matrix_row(const Annulus& a, cplx z) {
    if (!a.contains(z)) throw PreconditionError("poisson_matrix_row: z outside the open annulus");
    const int k = a.grid();
    const int top = std::min(a.modes(), (k - 1) / 2);
    const double q = a.q();
    const double r = std::abs(z);
    const cplx zb_inv = 1.0 / std::conj(z);
    // Mode profiles of the Lagrange data on each circle.
    std::vector<cplx> eo(static_cast<std::size_t>(top + 1)), ei(static_cast<std::size_t>(top + 1));
    cplx zn = 1.0, zbn = 1.0;
    double qn = 1.0;
    for (int n = 1; n <= top; ++n) {
        zn *= z;
        zbn *= zb_inv;
        qn *= q;
        const double den = 1.0 - qn * qn;
        eo[static_cast<std::size_t>(n)] = (zn - qn * qn * zbn) / den;
        ei[static_cast<std::size_t>(n)] = qn * (zbn - zn) / den;
    }
    const double lr = std::log(r) / a.log_q();
    RVector row(2 * k);
    for (int l = 0; l < k; ++l) {
        const double th = kTwoPi * l / k;
        double so = 1.0 - lr;
        double si = lr;
        for (int n = 1; n <= top; ++n) {
            const cplx e = std::polar(1.0, -n * th);
            so += 2.0 * (e * eo[static_cast<std::size_t>(n)]).real();
            si += 2.0 * (e * ei[static_cast<std::size_t>(n)]).real();
        }
        row(l) = so / k;
        row(k + l) = si / k;
    }
    return row;
}

double phi_eval(const Annulus& a, const BoundaryPoint& x) {
    // z -> P_z(x) has log|z| coefficient -+1/log q divided by the harmonic
    // density at t0.
    const double b0 = (x.component == Component::Outer ? -1.0 : 1.0) / a.log_q();
    return kTwoPi * b0 / a.harmonic_density(x);
}

// ---------------------------------------------------------------------------
// Extremal pairs

std::pair<double, double> extremal_weights(const Annulus& a, const BoundaryPoint& x0, const BoundaryPoint& x1) {
    if (x0.component != Component::Outer || x1.component != Component::Inner) {
        throw ShapeError("extremal_weights: need one outer and one inner point");
    }
    const std::vector<ConstraintVector> u{ConstraintVector{phi_eval(a, x0)}, ConstraintVector{phi_eval(a, x1)}};
    if (!(u[0][0] > 0.0 && u[1][0] < 0.0)) throw InternalError("extremal_weights: phi does not change sign");
    const auto w = solve_convex_weights(u);
    if (!w) throw InternalError("extremal_weights: no positive solution");
    return {(*w)[0], (*w)[1]};
}

ExtremalPair make_extremal_pair(const Annulus& a, double outer_angle, double inner_angle) {
    ExtremalPair p;
    p.outer = BoundaryPoint::make(Component::Outer, outer_angle);
    p.inner = BoundaryPoint::make(Component::Inner, inner_angle);
    std::tie(p.w0, p.w1) = extremal_weights(a, p.outer, p.inner);
    return p;
}

std::string boundary_id(const BoundaryPoint& x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s:%.17g", x.component == Component::Outer ? "outer" : "inner", x.angle);
    return buf;
}

BoundaryPoint parse_boundary_id(const std::string& id) {
    const auto colon = id.find(':');
    if (colon == std::string::npos) throw ShapeError("boundary id '" + id + "' has no component prefix");
    const std::string head = id.substr(0, colon);
    Component c;
    if (head == "outer") {
        c = Component::Outer;
    } else if (head == "inner") {
        c = Component::Inner;
    } else {
        throw ShapeError("boundary id '" + id + "' has unknown component");
    }
    const std::string tail = id.substr(colon + 1);
    char* end = nullptr;
    const double angle = std::strtod(tail.c_str(), &end);
    if (tail.empty() || end != tail.c_str() + tail.size()) throw ShapeError("boundary id '" + id + "' has bad angle");
    return BoundaryPoint::make(c, angle);
}

DiscreteMatrixMeasure extremal_measure(const Annulus& a, const ExtremalPair& x) {
    DiscreteMatrixMeasure mu{1, 1, {}};
    mu.atoms.push_back(Atom{boundary_id(x.outer), 0, ConstraintVector{phi_eval(a, x.outer)},
                            CMatrix::Constant(1, 1, x.w0)});
    mu.atoms.push_back(Atom{boundary_id(x.inner), 1, ConstraintVector{phi_eval(a, x.inner)},
                            CMatrix::Constant(1, 1, x.w1)});
    return mu;
}

namespace {

cplx pair_sum(const Annulus& a, const ExtremalPair& x, cplx z) {
    return x.w0 * a.herglotz_kernel(x.outer, z) / a.harmonic_density(x.outer) +
           x.w1 * a.herglotz_kernel(x.inner, z) / a.harmonic_density(x.inner);
}

}  // namespace

cplx extremal_herglotz(const Annulus& a, const ExtremalPair& x, cplx z) {
    if (!a.contains(z)) throw PreconditionError("extremal_herglotz: z outside the open annulus");
    return pair_sum(a, x, z) - cplx(0.0, pair_sum(a, x, a.t0()).imag());
}

cplx extremal_herglotz_boundary(const Annulus& a, const ExtremalPair& x, const BoundaryPoint& zeta) {
    for (const BoundaryPoint* p : {&x.outer, &x.inner}) {
        if (p->component == zeta.component && std::abs(p->angle - zeta.angle) < 1e-12) {
            throw PreconditionError("extremal_herglotz_boundary: evaluation at an atom");
        }
    }
    return pair_sum(a, x, a.location(zeta)) - cplx(0.0, pair_sum(a, x, a.t0()).imag());
}

CMatrix herglotz_from_measure(const Annulus& a, const DiscreteMatrixMeasure& mu, cplx z) {
    if (!a.contains(z)) throw PreconditionError("herglotz_from_measure: z outside the open annulus");
    CMatrix f = CMatrix::Zero(mu.N, mu.N);
    for (const auto& atom : mu.atoms) {
        const BoundaryPoint x = parse_boundary_id(atom.id);
        const cplx g = a.herglotz_kernel(x, z) - cplx(0.0, a.herglotz_kernel(x, a.t0()).imag());
        f += atom.weight * (g / a.harmonic_density(x));
    }
    return f;
}

}  // namespace herglotz
