#pragma once

// JSON (de)serialization for measures, reports and function samples.
// Output goes through write_json, which prints every floating-point number
// with 17 significant digits so identical inputs give byte-identical files.

#include "herglotz/matrix_measure.hpp"

#include <json.hpp>

#include <string>

namespace herglotz {

using json = nlohmann::json;

/// Deterministic pretty printer: 2-space indent, sorted keys, doubles as %.17g.
std::string write_json(const json& value);

/// Parse text; throws ShapeError on syntax errors.
json parse_json(const std::string& text);

DiscreteMatrixMeasure measure_from_json(const json& j);
json measure_to_json(const DiscreteMatrixMeasure& mu);

json matrix_to_json_re(const CMatrix& a);
json matrix_to_json_im(const CMatrix& a);
CMatrix matrix_from_json(const json& re, const json& im, Eigen::Index rows, Eigen::Index cols);

json membership_to_json(const MembershipReport& r);
json extremality_to_json(const ExtremalityReport& r, const DiscreteMatrixMeasure& mu);
json decomposition_to_json(const ChoquetDecomposition& d);
ChoquetDecomposition decomposition_from_json(const json& j);

}  // namespace herglotz
