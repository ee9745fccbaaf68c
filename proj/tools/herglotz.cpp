// Command-line front end: measure checks, decompositions, annulus demos and
// the Agler residual check. JSON goes through write_json so repeated runs
// give byte-identical output.

#include "herglotz/agler.hpp"
#include "herglotz/annulus.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/json_io.hpp"
#include "herglotz/matrix_measure.hpp"
#include "herglotz/sampling.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace herglotz;

namespace {

struct Options {
    std::string verb;
    std::string input;
    std::string output;
    std::string config;
    std::uint64_t seed = 0;
    std::optional<double> tol;
    int max_depth = 10000;
    std::optional<double> q;
    std::optional<std::string> t0;
    std::optional<int> modes;
    std::optional<int> grid;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ShapeError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json read_input(const Options& o) {
    if (o.input.empty()) throw ShapeError("--input is required for '" + o.verb + "'");
    return parse_json(read_text(o.input));
}

void emit(const Options& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw ShapeError("cannot write '" + o.output + "'");
    out << text;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ShapeError(what + ": '" + s + "' is not a number");
    }
}

MeasureConfig measure_config(const Options& o) {
    MeasureConfig cfg;
    if (const char* env = std::getenv("HERGLOTZ_TOL")) cfg.geometry.tol = parse_number(env, "HERGLOTZ_TOL");
    if (o.tol) cfg.geometry.tol = *o.tol;
    if (!(cfg.geometry.tol > 0.0)) throw ShapeError("tolerance must be positive");
    return cfg;
}

double number_field(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number()) throw ShapeError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

// Config file first, then individual flags.
Annulus make_annulus(const Options& o) {
    AnnulusConfig cfg;
    if (!o.config.empty()) {
        const json j = parse_json(read_text(o.config));
        if (!j.is_object()) throw ShapeError("annulus config must be an object");
        if (j.contains("q")) cfg.q = number_field(j, "q");
        double re = cfg.t0.real(), im = cfg.t0.imag();
        if (j.contains("t0_re")) re = number_field(j, "t0_re");
        if (j.contains("t0_im")) im = number_field(j, "t0_im");
        cfg.t0 = cplx(re, im);
        if (j.contains("M")) {
            if (!j.at("M").is_number_integer()) throw ShapeError("field 'M' must be an integer");
            cfg.modes = j.at("M").get<int>();
        }
        if (j.contains("grid")) {
            if (!j.at("grid").is_number_integer()) throw ShapeError("field 'grid' must be an integer");
            cfg.grid = j.at("grid").get<int>();
        }
    }
    if (o.q) cfg.q = *o.q;
    if (o.t0) {
        // "re" or "re,im"
        const auto comma = o.t0->find(',');
        if (comma == std::string::npos) {
            cfg.t0 = cplx(parse_number(*o.t0, "--t0"), 0.0);
        } else {
            cfg.t0 = cplx(parse_number(o.t0->substr(0, comma), "--t0"), parse_number(o.t0->substr(comma + 1), "--t0"));
        }
    }
    if (o.modes) cfg.modes = *o.modes;
    if (o.grid) cfg.grid = *o.grid;
    return Annulus(cfg);
}

json config_to_json(const Annulus& a) {
    json j = json::object();
    j["q"] = a.q();
    j["t0_re"] = a.t0().real();
    j["t0_im"] = a.t0().imag();
    j["M"] = a.modes();
    j["grid"] = a.grid();
    return j;
}

json complex_to_json(cplx z) {
    json j = json::object();
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

cplx complex_from_json(const json& j) {
    if (!j.is_object()) throw ShapeError("complex value must be an object with 're' and 'im'");
    return cplx(number_field(j, "re"), number_field(j, "im"));
}

json sample_to_json(const std::vector<cplx>& points, const std::vector<cplx>& values) {
    json pts = json::array(), vals = json::array();
    for (cplx z : points) pts.push_back(complex_to_json(z));
    for (cplx v : values) vals.push_back(complex_to_json(v));
    json j = json::object();
    j["points"] = std::move(pts);
    j["values"] = std::move(vals);
    return j;
}

CMatrix matrix_field(const json& j, Eigen::Index n) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
        throw ShapeError("matrix must be an object with 're' and 'im'");
    }
    return matrix_from_json(j.at("re"), j.at("im"), n, n);
}

const json& array_field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
        throw ShapeError(std::string("field '") + key + "' must be an array");
    }
    return j.at(key);
}

std::vector<DiscreteMatrixMeasure> measures_field(const json& j) {
    std::vector<DiscreteMatrixMeasure> out;
    for (const auto& m : array_field(j, "measures")) out.push_back(measure_from_json(m));
    return out;
}

std::vector<CMatrix> matrices_field(const json& j, const char* key) {
    const json& arr = array_field(j, key);
    if (arr.empty()) throw ShapeError(std::string("field '") + key + "' is empty");
    const json& first = arr.front();
    if (!first.is_object() || !first.contains("re") || !first.at("re").is_array()) {
        throw ShapeError(std::string("entries of '") + key + "' must be matrices");
    }
    const auto n = static_cast<Eigen::Index>(first.at("re").size());
    std::vector<CMatrix> out;
    for (const auto& m : arr) out.push_back(matrix_field(m, n));
    return out;
}

// A measure, or a decomposition that is recombined first.
DiscreteMatrixMeasure measure_or_decomposition(const json& j) {
    if (j.is_object() && j.contains("terms")) return recombine(decomposition_from_json(j));
    return measure_from_json(j);
}

void report_nonmember(const MembershipReport& r) {
    std::ostringstream os;
    os.precision(3);
    os << "not a member: mass residual " << r.mass_residual;
    if (!r.psd_ok) os << ", negative weight eigenvalue";
    for (std::size_t i = 0; i < r.constraint_residuals.size(); ++i) {
        os << ", constraint " << (i + 1) << " residual " << r.constraint_residuals[i];
    }
    std::cerr << os.str() << "\n";
}

// ---------------------------------------------------------------------------
// Verbs

int cmd_validate(const Options& o) {
    const DiscreteMatrixMeasure mu = measure_or_decomposition(read_input(o));
    const MembershipReport r = validate_membership(mu, measure_config(o));
    emit(o, write_json(membership_to_json(r)));
    if (!r.member) {
        report_nonmember(r);
        return 2;
    }
    return 0;
}

int cmd_extreme(const Options& o) {
    const DiscreteMatrixMeasure mu = measure_from_json(read_input(o));
    const MeasureConfig cfg = measure_config(o);
    const MembershipReport m = validate_membership(mu, cfg);
    if (!m.member) {
        emit(o, write_json(membership_to_json(m)));
        report_nonmember(m);
        return 2;
    }
    emit(o, write_json(extremality_to_json(is_extreme(mu, cfg), mu)));
    return 0;
}

int cmd_decompose(const Options& o) {
    const DiscreteMatrixMeasure mu = measure_from_json(read_input(o));
    emit(o, write_json(decomposition_to_json(choquet_decompose(mu, o.max_depth, measure_config(o)))));
    return 0;
}

// {"measures": [...], "weights": [{"re": .., "im": ..}, ...]}
int cmd_build_special(const Options& o) {
    const json j = read_input(o);
    const auto mus = measures_field(j);
    const auto weights = matrices_field(j, "weights");
    emit(o, write_json(measure_to_json(build_special(mus, weights, measure_config(o)))));
    return 0;
}

// {"projections": [{"re": .., "im": ..}, ...], "measures": [...]}
int cmd_build_spectral(const Options& o) {
    const json j = read_input(o);
    const auto projections = matrices_field(j, "projections");
    const auto mus = measures_field(j);
    emit(o, write_json(measure_to_json(build_spectral(projections, mus, measure_config(o)))));
    return 0;
}

int cmd_annulus_phi(const Options& o) {
    const Annulus a = make_annulus(o);
    json out = json::object();
    out["config"] = config_to_json(a);
    for (Component c : {Component::Outer, Component::Inner}) {
        json angles = json::array(), phi = json::array(), density = json::array();
        for (int l = 0; l < a.grid(); ++l) {
            const BoundaryPoint x = a.node(c, l);
            angles.push_back(x.angle);
            phi.push_back(phi_eval(a, x));
            density.push_back(a.harmonic_density(x));
        }
        json table = json::object();
        table["angle"] = std::move(angles);
        table["phi"] = std::move(phi);
        table["harmonic_density"] = std::move(density);
        out[c == Component::Outer ? "outer" : "inner"] = std::move(table);
    }
    emit(o, write_json(out));
    return 0;
}

// Optional input {"outer_angle": .., "inner_angle": .., "points": [...]};
// missing angles are drawn from the seed, missing points default to the
// Agler grid.
int cmd_annulus_extremal(const Options& o) {
    const Annulus a = make_annulus(o);
    json in = json::object();
    if (!o.input.empty()) in = read_input(o);
    if (!in.is_object()) throw ShapeError("annulus-extremal input must be an object");
    sampling::Rng rng(o.seed);
    const double two_pi = 2.0 * std::numbers::pi;
    const double t_out = rng.uniform(0.0, two_pi);
    const double t_in = rng.uniform(0.0, two_pi);
    const double outer = in.contains("outer_angle") ? number_field(in, "outer_angle") : t_out;
    const double inner = in.contains("inner_angle") ? number_field(in, "inner_angle") : t_in;
    std::vector<cplx> points;
    if (in.contains("points")) {
        for (const auto& p : array_field(in, "points")) points.push_back(complex_from_json(p));
    } else {
        points = default_zw_grid(a);
    }
    for (cplx z : points) {
        if (!a.contains(z)) throw PreconditionError("sample point outside the open annulus");
    }

    const ExtremalPair x = make_extremal_pair(a, outer, inner);
    std::vector<cplx> f, s;
    for (cplx z : points) {
        f.push_back(extremal_herglotz(a, x, z));
        s.push_back(extremal_schur(a, x, z));
    }
    json pair = json::object();
    pair["outer"] = boundary_id(x.outer);
    pair["inner"] = boundary_id(x.inner);
    pair["w0"] = x.w0;
    pair["w1"] = x.w1;
    json out = json::object();
    out["config"] = config_to_json(a);
    out["pair"] = std::move(pair);
    out["measure"] = measure_to_json(extremal_measure(a, x));
    out["herglotz"] = sample_to_json(points, f);
    out["schur"] = sample_to_json(points, s);
    emit(o, write_json(out));
    return 0;
}

std::string format_point(cplx z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

// Optional input selects s:
//   {"kind": "zero"}
//   {"kind": "linear", "c_re": .., "c_im": ..}      s = c (z - t0), default c = 0.2
//   {"kind": "extremal", "outer_angle": .., "inner_angle": ..}
// The extremal case uses nu = delta_x: |s_x| = 1 on the boundary, so its
// boundary measure is not available.
int cmd_agler_check(const Options& o) {
    const Annulus a = make_annulus(o);
    json in = json::object();
    if (!o.input.empty()) in = read_input(o);
    if (!in.is_object()) throw ShapeError("agler-check input must be an object");
    const std::string kind = in.contains("kind") ? in.at("kind").get<std::string>() : "linear";

    ScalarFunction s;
    std::vector<AglerTerm> nu;
    if (kind == "zero") {
        s = [](cplx) { return cplx(0.0); };
        nu = agler_measure(a, s, measure_config(o), o.max_depth);
    } else if (kind == "linear") {
        const cplx c(in.contains("c_re") ? number_field(in, "c_re") : 0.2, in.contains("c_im") ? number_field(in, "c_im") : 0.0);
        const cplx t0 = a.t0();
        s = [c, t0](cplx z) { return c * (z - t0); };
        nu = agler_measure(a, s, measure_config(o), o.max_depth);
    } else if (kind == "extremal") {
        const ExtremalPair x = make_extremal_pair(a, in.contains("outer_angle") ? number_field(in, "outer_angle") : 0.0,
                                                  in.contains("inner_angle") ? number_field(in, "inner_angle") : 0.0);
        s = [a, x](cplx z) { return extremal_schur(a, x, z); };
        nu = {AglerTerm{x, 1.0}};
    } else {
        throw ShapeError("unknown kind '" + kind + "' (expected zero, linear or extremal)");
    }

    const auto grid = default_zw_grid(a);
    const AglerResult r = agler_reconstruct(a, s, nu, grid);
    std::ostringstream os;
    os << "z\\w";
    for (cplx w : grid) os << "," << format_point(w);
    os << "\n";
    char buf[40];
    for (Eigen::Index i = 0; i < r.residual.rows(); ++i) {
        os << format_point(grid[static_cast<std::size_t>(i)]);
        for (Eigen::Index k = 0; k < r.residual.cols(); ++k) {
            std::snprintf(buf, sizeof buf, ",%.17g", r.residual(i, k));
            os << buf;
        }
        os << "\n";
    }
    emit(o, os.str());
    std::cerr << "terms " << nu.size() << ", max residual " << r.max_residual << ", aliasing scale "
              << r.aliasing_bound << "\n";
    return 0;
}

// Random members, decomposed; one row per extreme leaf with its support
// count and rank pattern. Exploratory only.
int cmd_sweep(const Options& o) {
    const MeasureConfig cfg = measure_config(o);
    sampling::Rng rng(o.seed);
    json rows = json::array();
    int sample = 0;
    while (sample < 40) {
        const int N = rng.integer(1, 2);
        const int m = rng.integer(0, 2);
        const int n = rng.integer(2, 3 * (m + 1) * N * N);
        DiscreteMatrixMeasure mu;
        if (!sampling::random_member(rng, N, m, n, rng.coin(), mu)) continue;
        const auto d = choquet_decompose(mu, o.max_depth, cfg);
        for (const auto& t : d.terms) {
            const DiscreteMatrixMeasure leaf = pruned(t.measure, cfg);
            const ExtremalityReport e = is_extreme(leaf, cfg);
            std::vector<int> ranks;
            for (const auto& at : leaf.atoms) {
                ranks.push_back(static_cast<int>(psd_range_basis(at.weight, cfg.geometry.rank_rtol).cols()));
            }
            std::sort(ranks.rbegin(), ranks.rend());
            json row = json::object();
            row["sample"] = sample;
            row["N"] = N;
            row["m"] = m;
            row["n"] = e.support_count;
            row["bound"] = e.support_bound;
            row["is_extreme"] = e.is_extreme;
            row["ranks"] = ranks;
            row["coefficient"] = t.coefficient;
            rows.push_back(std::move(row));
        }
        ++sample;
    }
    json out = json::object();
    out["seed"] = o.seed;
    out["rows"] = std::move(rows);
    emit(o, write_json(out));
    return 0;
}

int dispatch(const Options& o) {
    if (o.verb == "validate") return cmd_validate(o);
    if (o.verb == "extreme") return cmd_extreme(o);
    if (o.verb == "decompose") return cmd_decompose(o);
    if (o.verb == "build-special") return cmd_build_special(o);
    if (o.verb == "build-spectral") return cmd_build_spectral(o);
    if (o.verb == "annulus-phi") return cmd_annulus_phi(o);
    if (o.verb == "annulus-extremal") return cmd_annulus_extremal(o);
    if (o.verb == "agler-check") return cmd_agler_check(o);
    if (o.verb == "sweep") return cmd_sweep(o);
    throw ShapeError("unknown verb '" + o.verb + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extremal constrained matrix measures and annulus Herglotz functions"};
    Options o;
    app.add_option("verb", o.verb, "Command to run")
        ->required()
        ->check(CLI::IsMember({"validate", "extreme", "decompose", "build-special", "build-spectral", "annulus-phi",
                               "annulus-extremal", "agler-check", "sweep"}));
    app.add_option("--input", o.input, "Input JSON file");
    app.add_option("--output", o.output, "Output file (default: stdout)");
    app.add_option("--config", o.config, "Annulus config JSON {q, t0_re, t0_im, M, grid}");
    app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
    app.add_option("--tol", o.tol, "Residual tolerance (overrides HERGLOTZ_TOL)");
    app.add_option("--max-depth", o.max_depth, "Decomposition depth guard")->capture_default_str();
    app.add_option("--q", o.q, "Inner radius of the annulus");
    app.add_option("--t0", o.t0, "Base point, 're' or 're,im'");
    app.add_option("--modes", o.modes, "Laurent modes M");
    app.add_option("--grid", o.grid, "Quadrature nodes per circle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return dispatch(o);
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ToleranceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
