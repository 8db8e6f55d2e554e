#include "emt/serialization.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

namespace emt::io {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

using Field = std::pair<std::string_view, double*>;

std::optional<Assemblage> blank(std::string_view type) {
  static const std::array<Assemblage, 11> all{
      SpiralWithCore{}, CoatedCircles{}, Schulgasser{}, OrangeWithCore{}, OrangeWithShell{},
      BasicSpiral{},    SpiralWithShell{}, Wheel{},     Star{},           Hub{},
      SpikyBall{},
  };
  for (const auto& a : all)
    if (type_name(a) == type) return a;
  return std::nullopt;
}

[[noreturn]] void parse_error(const std::string& message) {
  throw Error(ErrorCode::Parse, message);
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<Field> fields(Assemblage& a) {
  return std::visit(
      Overloaded{
          [](SpiralWithCore& g) -> std::vector<Field> {
            return {{"sigma_i", &g.sigma_i}, {"sigma1", &g.spiral.sigma1},
                    {"sigma2", &g.spiral.sigma2}, {"phi", &g.spiral.phi}, {"r0", &g.r0}};
          },
          [](CoatedCircles& g) -> std::vector<Field> {
            return {{"sigma_i", &g.sigma_i}, {"sigma1", &g.sigma1}, {"r0", &g.r0}};
          },
          [](Schulgasser& g) -> std::vector<Field> {
            return {{"sigma1", &g.sigma1}, {"sigma2", &g.sigma2}};
          },
          [](OrangeWithCore& g) -> std::vector<Field> {
            return {{"sigma_i", &g.sigma_i}, {"sigma1", &g.sigma1}, {"sigma2", &g.sigma2},
                    {"r0", &g.r0}};
          },
          [](OrangeWithShell& g) -> std::vector<Field> {
            return {{"sigma1", &g.sigma1}, {"sigma_r", &g.sigma_r},
                    {"sigma_theta", &g.sigma_theta}, {"r0", &g.r0}};
          },
          [](BasicSpiral& g) -> std::vector<Field> {
            return {{"sigma1", &g.sigma1}, {"sigma2", &g.sigma2}, {"phi", &g.phi}};
          },
          [](SpiralWithShell& g) -> std::vector<Field> {
            return {{"sigma1_shell", &g.sigma1_shell}, {"sigma1", &g.spiral.sigma1},
                    {"sigma2", &g.spiral.sigma2}, {"phi", &g.spiral.phi}, {"r0", &g.r0}};
          },
          [](Wheel& g) -> std::vector<Field> {
            return {{"sigma_i", &g.sigma_i}, {"sigma1", &g.sigma1}, {"sigma2", &g.sigma2},
                    {"r0", &g.r0}, {"r1", &g.r1}};
          },
          [](Star& g) -> std::vector<Field> {
            return {{"sigma_i", &g.sigma_i}, {"sigma", &g.sigma}, {"mu", &g.mu}, {"r0", &g.r0}};
          },
          [](Hub& g) -> std::vector<Field> {
            return {{"sigma_i", &g.sigma_i}, {"sigma", &g.sigma}, {"mu", &g.mu},
                    {"rho0", &g.rho0}};
          },
          [](SpikyBall& g) -> std::vector<Field> {
            return {{"sigma_i", &g.sigma_i}, {"sigma", &g.sigma}, {"mu", &g.mu},
                    {"rho0", &g.rho0}, {"n", &g.n}};
          },
      },
      a);
}

Json to_json(const Assemblage& a) {
  Assemblage copy = a;
  Json j = Json::object();
  j["type"] = std::string(type_name(a));
  for (const auto& [name, value] : fields(copy)) j[std::string(name)] = *value;
  return j;
}

Assemblage assemblage_from_json(const Json& j) {
  if (!j.is_object()) parse_error("geometry must be a JSON object");
  const auto type = j.find("type");
  if (type == j.end() || !type->is_string()) parse_error("geometry needs a string \"type\"");
  auto a = blank(type->get<std::string>());
  if (!a) parse_error("unknown geometry type '" + type->get<std::string>() + "'");

  auto slots = fields(*a);
  for (const auto& [key, value] : j.items()) {
    if (key == "type") continue;
    const auto it = std::find_if(slots.begin(), slots.end(),
                                 [&](const Field& f) { return f.first == key; });
    if (it == slots.end()) parse_error("unknown field '" + key + "' for " + type->get<std::string>());
  }
  for (auto& [name, slot] : slots) {
    const auto it = j.find(std::string(name));
    if (it == j.end()) parse_error("missing field '" + std::string(name) + "'");
    if (name == "phi")
      *slot = angle_from_json(*it);
    else if (it->is_number())
      *slot = it->get<double>();
    else
      parse_error("field '" + std::string(name) + "' must be a number");
  }
  return *a;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_error(e.what());
  }
}

double parse_angle(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  std::string_view s = trim(text);
  if (s.empty()) parse_error("empty angle");
  if (const auto v = parse_number(s)) return *v;

  double sign = 1.0;
  if (s.front() == '-' || s.front() == '+') {
    if (s.front() == '-') sign = -1.0;
    s = trim(s.substr(1));
  }
  const auto pi_at = s.find("pi");
  if (pi_at == std::string_view::npos) parse_error("cannot read angle '" + std::string(text) + "'");

  double factor = 1.0;
  std::string_view coef = trim(s.substr(0, pi_at));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  if (!coef.empty()) {
    const auto v = parse_number(coef);
    if (!v) parse_error("cannot read angle '" + std::string(text) + "'");
    factor = *v;
  }
  std::string_view rest = trim(s.substr(pi_at + 2));
  if (!rest.empty()) {
    if (rest.front() != '/') parse_error("cannot read angle '" + std::string(text) + "'");
    const auto v = parse_number(trim(rest.substr(1)));
    if (!v || *v == 0.0) parse_error("cannot read angle '" + std::string(text) + "'");
    factor /= *v;
  }
  return sign * factor * std::numbers::pi;
}

double angle_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_angle(j.get<std::string>());
  parse_error("angle must be a number or a string such as \"pi/4\"");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

Json to_json(const closed_form::RotationResult& r) {
  return Json{{"upsilon", r.upsilon},
              {"psi", r.psi},
              {"magnitude", r.magnitude},
              {"upsilon_signed", r.upsilon_signed},
              {"psi_signed", r.psi_signed}};
}

Json to_json(const oracle::OracleReport& r) {
  Json j{{"geometry_type", r.geometry_type},
         {"method", std::string(oracle::to_string(r.method))},
         {"tol", r.tol},
         {"sigma_star_closed", r.sigma_star_closed},
         {"sigma_star_numeric", r.sigma_star_numeric},
         {"rel_err", r.rel_err},
         {"imag_residual", r.imag_residual}};
  Json jumps = Json::array();
  for (const auto& jr : r.jump_residuals)
    jumps.push_back({{"radius", jr.radius}, {"potential", jr.potential}, {"current", jr.current}});
  j["jump_residuals"] = jumps;
  j["farfield_norm"] = r.farfield_norm ? Json(*r.farfield_norm) : Json(nullptr);
  j["grid_spec"] = r.grid_spec ? Json{{"grid_n", r.grid_spec->grid_n},
                                      {"box_half_width", r.grid_spec->box_half_width}}
                               : Json(nullptr);
  if (r.wheel_printed) {
    const auto& w = *r.wheel_printed;
    j["wheel_printed_formula"] = {{"matched", w.matched},
                                  {"printed_r1", w.printed_r1},
                                  {"printed_r0", w.printed_r0},
                                  {"rel_dev_r1", w.rel_dev_r1},
                                  {"rel_dev_r0", w.rel_dev_r0}};
  }
  return j;
}

}  // namespace emt::io
