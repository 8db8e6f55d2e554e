#include "emt/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>

#include "emt/closed_form.hpp"
#include "emt/field_solver.hpp"
#include "emt/optimize.hpp"
#include "emt/oracle.hpp"
#include "emt/serialization.hpp"
#include "emt/svg.hpp"

namespace emt::cli {

namespace {

using io::Json;

constexpr double kDefaultTol = 1e-8;

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  std::string output_path;
};

std::string read_source(const std::string& source, std::istream& in) {
  if (!source.empty() && source.front() == '{') return source;
  if (source == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream file(source);
  if (!file) throw Error(ErrorCode::Usage, "cannot open '" + source + "'");
  return std::string(std::istreambuf_iterator<char>(file), {});
}

Assemblage load_geometry(const std::string& source, std::istream& in) {
  return validate(io::assemblage_from_json(io::parse_json(read_source(source, in))));
}

double default_tolerance() {
  const char* env = std::getenv("EMT_TOL");
  if (!env || !*env) return kDefaultTol;
  double tol = 0.0;
  const std::string_view text(env);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), tol);
  if (ec != std::errc{} || end != text.data() + text.size() || !(tol > 0.0))
    throw Error(ErrorCode::Usage, "EMT_TOL must be a positive number");
  return tol;
}

void emit(Context& ctx, const std::string& payload) {
  if (ctx.output_path.empty()) {
    ctx.out << payload;
    return;
  }
  std::ofstream file(ctx.output_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Usage, "cannot write '" + ctx.output_path + "'");
  file << payload;
}

void emit_json(Context& ctx, const Json& j) { emit(ctx, j.dump(2) + "\n"); }

void report_error(std::ostream& err, const Error& e) {
  Json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    Json list = Json::array();
    for (const auto& item : v->violations())
      list.push_back({{"code", std::string(to_string(item.code))},
                      {"field", item.field},
                      {"message", item.message}});
    j["violations"] = list;
  }
  err << j.dump() << "\n";
}

// Numerical failures of an otherwise valid request count as a failed
// verification rather than bad input.
int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonRealAdmittance:
    case ErrorCode::StiffnessFailure:
    case ErrorCode::LinearSolveFailure:
    case ErrorCode::SolverSingular:
      return 1;
    default:
      return 2;
  }
}

int cmd_effective(Context& ctx, const std::string& source) {
  const Assemblage a = load_geometry(source, ctx.in);
  const auto e = closed_form::effective_conductivity(a);
  emit_json(ctx, Json{{"geometry", io::to_json(a)},
                      {"sigma_star", e.sigma_star},
                      {"formula_name", std::string(e.formula_name)}});
  return 0;
}

int cmd_rotation(Context& ctx, const std::string& source) {
  const Assemblage a = load_geometry(source, ctx.in);
  closed_form::RotationResult r{};
  std::string method;
  if (const auto* s = std::get_if<SpiralWithCore>(&a)) {
    r = closed_form::rotation_angle(s->sigma_i, s->spiral.sigma1, s->spiral.sigma2,
                                    s->spiral.phi, s->r0);
    method = "closed_form";
  } else {
    if (dimension(a) != 2)
      throw Error(ErrorCode::MethodGeometryMismatch, "rotation is defined for planar assemblages");
    r = field::nucleus_field(field::solve(a));
    method = "field_solver";
  }
  Json j = io::to_json(r);
  j["geometry"] = io::to_json(a);
  j["method"] = method;
  emit_json(ctx, j);
  return 0;
}

struct VerifyArgs {
  std::string source;
  std::string method;
  std::optional<double> tol;
  int grid = 256;
  double box = 3.0;
  std::optional<double> threshold;
};

int cmd_verify(Context& ctx, const VerifyArgs& args) {
  const Assemblage a = load_geometry(args.source, ctx.in);
  const oracle::Method method =
      args.method.empty() ? (dimension(a) == 3 ? oracle::Method::Ode3d : oracle::Method::Ode)
                          : oracle::method_from_string(args.method);
  const double tol = args.tol.value_or(default_tolerance());
  oracle::FdOptions fd;
  fd.grid_n = args.grid;
  fd.box_half_width = args.box;
  const auto report = oracle::verify(a, method, tol, fd);

  const bool is_fd = method == oracle::Method::Fd;
  const double threshold = args.threshold.value_or(is_fd ? 1e-2 : 1e-6);
  bool pass = report.rel_err <= threshold;
  if (is_fd && report.farfield_norm) pass = pass && *report.farfield_norm <= 2e-2;

  Json j = io::to_json(report);
  j["threshold"] = threshold;
  j["pass"] = pass;
  emit_json(ctx, j);
  return pass ? 0 : 1;
}

struct OptimizeArgs {
  double k1 = 0.0;
  double k2 = 0.0;
  std::optional<double> r0;
  std::optional<std::string> target_angle;
};

int cmd_optimize(Context& ctx, const OptimizeArgs& args) {
  if (args.r0.has_value() == args.target_angle.has_value())
    throw Error(ErrorCode::Usage, "give exactly one of --r0 and --target-angle");
  for (double k : {args.k1, args.k2})
    if (!(k > 0.0) || !std::isfinite(k))
      throw Error(ErrorCode::NonPositiveConductivity, "k1 and k2 must be positive");

  if (args.target_angle) {
    const double target = io::parse_angle(*args.target_angle);
    const double r0 = closed_form::radius_for_rotation(args.k1, args.k2, target);
    const LaminateEigen e = laminate_eigen({args.k1, args.k2, 0.5});
    emit_json(ctx, Json{{"k1", args.k1},
                        {"k2", args.k2},
                        {"target_angle", target},
                        {"r0", r0},
                        {"m1", 0.5},
                        {"sigma1", e.sigma1},
                        {"sigma2", e.sigma2},
                        {"phi", closed_form::optimal_phi(e.sigma1, e.sigma2)}});
    return 0;
  }

  const double r0 = *args.r0;
  // k1, k2 read as the spiral eigenvalues themselves.
  const auto direct = optimize::maximize_rotation_numeric(args.k1, args.k2, r0);
  // k1, k2 read as laminate constituents, fraction optimized.
  const auto laminate = optimize::maximize_rotation_over_fractions(args.k1, args.k2, r0);
  const LaminateEigen e = laminate_eigen({args.k1, args.k2, laminate.m1_hat});
  emit_json(ctx,
            Json{{"k1", args.k1},
                 {"k2", args.k2},
                 {"r0", r0},
                 {"eigenvalue_design",
                  {{"sigma1", args.k1},
                   {"sigma2", args.k2},
                   {"phi_opt", closed_form::optimal_phi(args.k1, args.k2)},
                   {"phi_hat", direct.phi_hat},
                   {"upsilon_max", closed_form::max_rotation(args.k1, args.k2, r0)},
                   {"upsilon_hat", direct.upsilon_hat},
                   {"flat", direct.flat}}},
                 {"laminate_design",
                  {{"m1_hat", laminate.m1_hat},
                   {"sigma1", e.sigma1},
                   {"sigma2", e.sigma2},
                   {"phi_hat", laminate.phi_hat},
                   {"upsilon_max", closed_form::max_rotation_laminate(args.k1, args.k2, r0).upsilon_max},
                   {"upsilon_hat", laminate.upsilon_hat},
                   {"flat", laminate.flat}}}});
  return 0;
}

double number_or_angle(const Json& j, const std::string& name) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return io::parse_angle(j.get<std::string>());
  throw Error(ErrorCode::Parse, "'" + name + "' must be a number");
}

int cmd_sweep(Context& ctx, const std::string& source) {
  const Json j = io::parse_json(read_source(source, ctx.in));
  if (!j.is_object()) throw Error(ErrorCode::Parse, "sweep spec must be a JSON object");
  for (const char* key : {"geometry", "parameter", "range", "steps", "observable"})
    if (!j.contains(key)) throw Error(ErrorCode::Parse, std::string("sweep spec needs '") + key + "'");
  const Json& range = j["range"];
  if (!range.is_array() || range.size() != 2)
    throw Error(ErrorCode::Parse, "'range' must be [lo, hi]");
  if (!j["parameter"].is_string() || !j["observable"].is_string() ||
      !j["steps"].is_number_integer())
    throw Error(ErrorCode::Parse, "malformed sweep spec");

  const optimize::SweepSpec spec{io::assemblage_from_json(j["geometry"]),
                                 j["parameter"].get<std::string>(),
                                 number_or_angle(range[0], "range"),
                                 number_or_angle(range[1], "range"),
                                 j["steps"].get<int>(),
                                 optimize::observable_from_string(j["observable"].get<std::string>())};
  emit(ctx, optimize::to_csv(optimize::sweep(spec)));
  return 0;
}

struct FieldArgs {
  std::string source;
  int nr = 11;
  int ntheta = 16;
  std::string svg_path;
};

int cmd_field(Context& ctx, const FieldArgs& args) {
  if (args.nr < 2 || args.ntheta < 4)
    throw Error(ErrorCode::Usage, "field sampling needs --nr >= 2 and --ntheta >= 4");
  const Assemblage a = load_geometry(args.source, ctx.in);
  const auto s = field::solve(a);

  std::string csv = "r,theta,u,j_r,j_theta\n";
  auto row = [&](double r, double theta) {
    const auto j = field::eval_current(s, r, theta);
    csv += io::format_double(r) + "," + io::format_double(theta) + "," +
           io::format_double(field::eval_potential(s, r, theta)) + "," +
           io::format_double(j.j_r) + "," + io::format_double(j.j_theta) + "\n";
  };
  auto theta_at = [&](int k) { return 2.0 * std::numbers::pi * k / args.ntheta; };
  for (int i = 0; i < args.nr; ++i) {
    const double r = static_cast<double>(i) / (args.nr - 1);
    for (int k = 0; k < args.ntheta; ++k) row(r, theta_at(k));
  }
  // One ring outside the inclusion, where the field must be the applied one.
  for (int k = 0; k < args.ntheta; ++k) row(1.25, theta_at(k));

  if (!args.svg_path.empty()) {
    std::ofstream file(args.svg_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::Usage, "cannot write '" + args.svg_path + "'");
    file << svg::field_plot(s);
  }
  emit(ctx, csv);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Effective conductivity, field rotation and oracle checks for radially "
               "symmetric composite inclusions"};
  app.set_version_flag("--version", std::string("emt ") + kVersion);
  app.require_subcommand(1);

  Context ctx{in, out, err, {}};
  std::string geometry;

  auto* effective = app.add_subcommand("effective", "closed-form effective conductivity");
  effective->add_option("geometry", geometry, "inline JSON, file path or '-' for stdin")->required();
  effective->add_option("-o,--output", ctx.output_path, "write the result here");

  auto* rotation = app.add_subcommand("rotation", "rotation of the nucleus field");
  rotation->add_option("geometry", geometry, "inline JSON, file path or '-'")->required();
  rotation->add_option("-o,--output", ctx.output_path, "write the result here");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "check the closed form against a numerical oracle");
  verify->add_option("geometry", verify_args.source, "inline JSON, file path or '-'")->required();
  verify->add_option("--method", verify_args.method, "ode | ode3d | fd")
      ->check(CLI::IsMember({"ode", "ode3d", "fd"}));
  verify->add_option("--tol", verify_args.tol, "shooting tolerance (default $EMT_TOL or 1e-8)");
  verify->add_option("--grid", verify_args.grid, "fd cells per side");
  verify->add_option("--box", verify_args.box, "fd box half width");
  verify->add_option("--threshold", verify_args.threshold, "largest acceptable rel_err");
  verify->add_option("-o,--output", ctx.output_path, "write the report here");

  OptimizeArgs opt_args;
  auto* opt = app.add_subcommand("optimize", "rotation-maximizing spiral design");
  opt->add_option("--k1", opt_args.k1, "first conductivity")->required();
  opt->add_option("--k2", opt_args.k2, "second conductivity")->required();
  opt->add_option("--r0", opt_args.r0, "core radius");
  opt->add_option("--target-angle", opt_args.target_angle, "wanted rotation, e.g. pi");
  opt->add_option("-o,--output", ctx.output_path, "write the result here");

  auto* sweep = app.add_subcommand("sweep", "tabulate an observable against one parameter");
  sweep->add_option("spec", geometry, "sweep spec: inline JSON, file path or '-'")->required();
  sweep->add_option("-o,--output", ctx.output_path, "write the CSV here");

  FieldArgs field_args;
  auto* fieldc = app.add_subcommand("field", "sample potential and current on a polar grid");
  fieldc->add_option("geometry", field_args.source, "inline JSON, file path or '-'")->required();
  fieldc->add_option("--nr", field_args.nr, "radii in [0, 1]");
  fieldc->add_option("--ntheta", field_args.ntheta, "angles per radius");
  fieldc->add_option("--svg", field_args.svg_path, "also write an SVG plot here");
  fieldc->add_option("-o,--output", ctx.output_path, "write the CSV here");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "emt " << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << Json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (effective->parsed()) return cmd_effective(ctx, geometry);
    if (rotation->parsed()) return cmd_rotation(ctx, geometry);
    if (verify->parsed()) return cmd_verify(ctx, verify_args);
    if (opt->parsed()) return cmd_optimize(ctx, opt_args);
    if (sweep->parsed()) return cmd_sweep(ctx, geometry);
    if (fieldc->parsed()) return cmd_field(ctx, field_args);
  } catch (const Error& e) {
    report_error(err, e);
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << Json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace emt::cli
