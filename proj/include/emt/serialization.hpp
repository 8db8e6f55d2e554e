#pragma once

// JSON and text formatting for assemblages and reports.
//
// Geometry objects carry a "type" discriminator plus one numeric member per
// parameter, flat (the spiral material's sigma1/sigma2/phi sit next to the
// other fields). Angle members also accept strings such as "pi/4".
// Everything here is locale-independent.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "emt/closed_form.hpp"
#include "emt/geometry.hpp"
#include "emt/oracle.hpp"

namespace emt::io {

using Json = nlohmann::json;

/// Named numeric parameters of an assemblage, in schema order. The
/// pointers alias into `a`.
std::vector<std::pair<std::string_view, double*>> fields(Assemblage& a);

Json to_json(const Assemblage& a);

/// Structural decoding only (types, names, presence); no invariant checks.
/// Throws Error(Parse).
Assemblage assemblage_from_json(const Json& j);

/// Parses JSON text. Throws Error(Parse).
Json parse_json(std::string_view text);

/// "pi", "-pi/2", "2*pi/3", "3pi/4", "0.25" or a plain number.
double parse_angle(std::string_view text);
double angle_from_json(const Json& j);

/// Shortest round-trip representation, '.' decimal separator always.
std::string format_double(double x);

Json to_json(const closed_form::RotationResult& r);
Json to_json(const oracle::OracleReport& r);

}  // namespace emt::io
