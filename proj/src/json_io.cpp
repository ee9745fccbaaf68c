#include "herglotz/json_io.hpp"

#include "herglotz/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace herglotz {

namespace {

void write_number(std::ostringstream& os, double v) {
    if (!std::isfinite(v)) {
        os << "null";
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

void write_value(std::ostringstream& os, const json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << inner << json(it.key()).dump() << ": ";
                write_value(os, it.value(), indent + 1);
            }
            os << "\n" << pad << "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto& e : v) flat = flat && !e.is_structured();
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) os << ", ";
                    write_value(os, v[i], indent + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ",\n";
                os << inner;
                write_value(os, v[i], indent + 1);
            }
            os << "\n" << pad << "]";
            return;
        }
        case json::value_t::number_float:
            write_number(os, v.get<double>());
            return;
        default:
            os << v.dump();
            return;
    }
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ShapeError(std::string("missing field '") + key + "'");
    return j.at(key);
}

int int_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) throw ShapeError(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

double as_double(const json& v, const char* what) {
    if (!v.is_number()) throw ShapeError(std::string(what) + " must be a number");
    return v.get<double>();
}

}  // namespace

std::string write_json(const json& value) {
    std::ostringstream os;
    write_value(os, value, 0);
    os << "\n";
    return os.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ShapeError(std::string("invalid JSON: ") + e.what());
    }
}

json matrix_to_json_re(const CMatrix& a) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k).real());
        rows.push_back(std::move(row));
    }
    return rows;
}

json matrix_to_json_im(const CMatrix& a) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k).imag());
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& re, const json& im, Eigen::Index rows, Eigen::Index cols) {
    auto check = [&](const json& a, const char* what) {
        if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != rows) {
            throw ShapeError(std::string(what) + " must have " + std::to_string(rows) + " rows");
        }
        for (const auto& r : a) {
            if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != cols) {
                throw ShapeError(std::string(what) + " rows must have " + std::to_string(cols) + " entries");
            }
        }
    };
    check(re, "weight_re");
    check(im, "weight_im");
    CMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index k = 0; k < cols; ++k) {
            const auto iu = static_cast<std::size_t>(i);
            const auto ku = static_cast<std::size_t>(k);
            out(i, k) = cplx(as_double(re[iu][ku], "weight entry"), as_double(im[iu][ku], "weight entry"));
        }
    }
    if (!out.allFinite()) throw ShapeError("weight entries must be finite");
    return out;
}

DiscreteMatrixMeasure measure_from_json(const json& j) {
    DiscreteMatrixMeasure mu;
    mu.N = int_field(j, "N");
    mu.m = int_field(j, "m");
    if (mu.N < 1 || mu.m < 0) throw ShapeError("N must be >= 1 and m >= 0");
    const json& atoms = field(j, "atoms");
    if (!atoms.is_array()) throw ShapeError("'atoms' must be an array");
    for (const auto& a : atoms) {
        Atom atom;
        const json& id = field(a, "id");
        if (!id.is_string()) throw ShapeError("atom 'id' must be a string");
        atom.id = id.get<std::string>();
        if (a.contains("tag") && !a.at("tag").is_null()) {
            if (!a.at("tag").is_number_integer()) throw ShapeError("atom 'tag' must be an integer or null");
            atom.tag = a.at("tag").get<int>();
        }
        const json& phi = field(a, "phi");
        if (!phi.is_array() || static_cast<int>(phi.size()) != mu.m) {
            throw ShapeError("atom '" + atom.id + "': 'phi' must have m entries");
        }
        RVector p(mu.m);
        for (int i = 0; i < mu.m; ++i) p(i) = as_double(phi[static_cast<std::size_t>(i)], "phi entry");
        atom.phi = ConstraintVector(p);
        atom.weight = matrix_from_json(field(a, "weight_re"), field(a, "weight_im"), mu.N, mu.N);
        mu.atoms.push_back(std::move(atom));
    }
    mu.check_shape();
    mu.symmetrize();
    return mu;
}

json measure_to_json(const DiscreteMatrixMeasure& mu) {
    json atoms = json::array();
    for (const auto& a : mu.atoms) {
        json phi = json::array();
        for (Eigen::Index i = 0; i < a.phi.size(); ++i) phi.push_back(a.phi[i]);
        json o = json::object();
        o["id"] = a.id;
        o["tag"] = a.tag ? json(*a.tag) : json(nullptr);
        o["phi"] = std::move(phi);
        o["weight_re"] = matrix_to_json_re(a.weight);
        o["weight_im"] = matrix_to_json_im(a.weight);
        atoms.push_back(std::move(o));
    }
    json out = json::object();
    out["N"] = mu.N;
    out["m"] = mu.m;
    out["atoms"] = std::move(atoms);
    return out;
}

json membership_to_json(const MembershipReport& r) {
    json out = json::object();
    out["member"] = r.member;
    out["psd_ok"] = r.psd_ok;
    out["mass_residual"] = r.mass_residual;
    out["constraint_residuals"] = r.constraint_residuals;
    out["psd_residuals"] = r.psd_residuals;
    return out;
}

json extremality_to_json(const ExtremalityReport& r, const DiscreteMatrixMeasure& mu) {
    json out = json::object();
    out["is_extreme"] = r.is_extreme;
    out["support_count"] = r.support_count;
    out["support_bound"] = r.support_bound;
    out["bound_ok"] = r.bound_ok;
    out["perturbation_dim"] = r.perturbation_dim ? json(*r.perturbation_dim) : json(nullptr);
    if (r.witness) {
        json blocks = json::array();
        for (std::size_t j = 0; j < r.witness->blocks.size(); ++j) {
            json b = json::object();
            b["id"] = mu.atoms[j].id;
            b["re"] = matrix_to_json_re(r.witness->blocks[j]);
            b["im"] = matrix_to_json_im(r.witness->blocks[j]);
            blocks.push_back(std::move(b));
        }
        json w = json::object();
        w["norm"] = r.witness->norm();
        w["blocks"] = std::move(blocks);
        out["witness"] = std::move(w);
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

json decomposition_to_json(const ChoquetDecomposition& d) {
    json terms = json::array();
    for (const auto& t : d.terms) {
        json o = json::object();
        o["coefficient"] = t.coefficient;
        o["measure"] = measure_to_json(t.measure);
        terms.push_back(std::move(o));
    }
    json out = json::object();
    out["depth"] = d.depth;
    out["terms"] = std::move(terms);
    return out;
}

ChoquetDecomposition decomposition_from_json(const json& j) {
    ChoquetDecomposition d;
    d.depth = int_field(j, "depth");
    const json& terms = field(j, "terms");
    if (!terms.is_array() || terms.empty()) throw ShapeError("'terms' must be a non-empty array");
    for (const auto& t : terms) {
        d.terms.push_back(ChoquetTerm{as_double(field(t, "coefficient"), "coefficient"),
                                      measure_from_json(field(t, "measure"))});
    }
    return d;
}

}  // namespace herglotz
