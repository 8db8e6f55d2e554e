#include "emt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "emt/closed_form.hpp"
#include "emt/field_solver.hpp"
#include "emt/serialization.hpp"

namespace emt::optimize {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorCode::NonPositiveConductivity, std::string(name) + " must be positive");
}

void require_radius(double r0) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw Error(ErrorCode::RadiusOutOfRange, "r0 must lie in (0, 1)");
}

}  // namespace

GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double tol) {
  constexpr int scan = 64;
  std::vector<double> xs(scan + 1), ys(scan + 1);
  for (int i = 0; i <= scan; ++i) {
    xs[i] = lo + (hi - lo) * i / scan;
    ys[i] = f(xs[i]);
  }
  const int best = static_cast<int>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  int peaks = 0;
  for (int i = 1; i < scan; ++i)
    if (ys[i] > ys[i - 1] && ys[i] >= ys[i + 1]) ++peaks;

  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, scan)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; it < 200 && b - a > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  double value = f(x);
  if (ys[best] > value) {
    x = xs[best];
    value = ys[best];
  }
  return GoldenResult{x, value, it, peaks <= 1};
}

RotationOptimum maximize_rotation_numeric(double sigma1, double sigma2, double r0) {
  require_positive(sigma1, "sigma1");
  require_positive(sigma2, "sigma2");
  require_radius(r0);
  if (sigma1 == sigma2) return {closed_form::optimal_phi(sigma1, sigma2), 0.0, true};

  auto upsilon = [&](double phi) {
    return std::abs(closed_form::signed_rotation(sigma1, sigma2, phi, r0));
  };
  const auto g = golden_section_max(upsilon, 0.0, std::numbers::pi / 2);
  return {g.x, g.value, false};
}

FractionOptimum maximize_rotation_over_fractions(double k1, double k2, double r0) {
  require_positive(k1, "k1");
  require_positive(k2, "k2");
  require_radius(r0);
  if (k1 == k2) return {0.5, closed_form::optimal_phi(k1, k2), 0.0, true};

  auto best_rotation = [&](double m1) {
    const LaminateEigen e = laminate_eigen({k1, k2, m1});
    return closed_form::max_rotation(e.sigma1, e.sigma2, r0);
  };
  const auto g = golden_section_max(best_rotation, 0.0, 1.0);
  const LaminateEigen e = laminate_eigen({k1, k2, g.x});
  return {g.x, closed_form::optimal_phi(e.sigma1, e.sigma2), g.value, false};
}

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::SigmaStar: return "sigma_star";
    case Observable::Upsilon: return "upsilon";
    case Observable::Psi: return "psi";
    case Observable::Magnitude: return "magnitude";
  }
  return "sigma_star";
}

Observable observable_from_string(std::string_view name) {
  for (Observable o : {Observable::SigmaStar, Observable::Upsilon, Observable::Psi,
                       Observable::Magnitude})
    if (to_string(o) == name) return o;
  throw Error(ErrorCode::Usage, "unknown observable '" + std::string(name) + "'");
}

namespace {

double observe(const Assemblage& a, Observable o) {
  if (o == Observable::SigmaStar) return closed_form::effective_conductivity(a).sigma_star;
  closed_form::RotationResult r{};
  if (const auto* s = std::get_if<SpiralWithCore>(&a))
    r = closed_form::rotation_angle(s->sigma_i, s->spiral.sigma1, s->spiral.sigma2,
                                    s->spiral.phi, s->r0);
  else
    r = field::nucleus_field(field::solve(a));
  switch (o) {
    case Observable::Upsilon: return r.upsilon;
    case Observable::Psi: return r.psi;
    default: return r.magnitude;
  }
}

}  // namespace

SweepTable sweep(const SweepSpec& spec) {
  if (spec.steps < 2) throw Error(ErrorCode::RangeViolatesInvariant, "a sweep needs >= 2 steps");
  if (!(spec.lo < spec.hi))
    throw Error(ErrorCode::RangeViolatesInvariant, "sweep range needs lo < hi");

  Assemblage probe = spec.geometry;
  const auto names = io::fields(probe);
  if (std::none_of(names.begin(), names.end(),
                   [&](const auto& f) { return f.first == spec.parameter; }))
    throw Error(ErrorCode::InvalidParameterPath,
                "'" + spec.parameter + "' is not a field of " + std::string(type_name(probe)));

  SweepTable table{spec.parameter, std::string(to_string(spec.observable)), {}, {}};
  for (int i = 0; i < spec.steps; ++i) {
    const double x = std::lerp(spec.lo, spec.hi, static_cast<double>(i) / (spec.steps - 1));
    Assemblage a = spec.geometry;
    for (auto& [name, slot] : io::fields(a))
      if (name == spec.parameter) *slot = x;
    if (!violations(a).empty())
      throw Error(ErrorCode::RangeViolatesInvariant,
                  spec.parameter + " = " + io::format_double(x) + " violates the geometry invariants");
    const double y = observe(a, spec.observable);
    if (!std::isfinite(y))
      throw Error(ErrorCode::RangeViolatesInvariant,
                  "observable is not finite at " + spec.parameter + " = " + io::format_double(x));
    table.x.push_back(x);
    table.y.push_back(y);
  }
  return table;
}

std::string to_csv(const SweepTable& table) {
  std::string out = table.parameter + "," + table.observable + "\n";
  for (std::size_t i = 0; i < table.x.size(); ++i)
    out += io::format_double(table.x[i]) + "," + io::format_double(table.y[i]) + "\n";
  return out;
}

}  // namespace emt::optimize
