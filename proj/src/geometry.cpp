#include "emt/geometry.hpp"

#include <cmath>
#include <string>

namespace emt {

namespace {

class Checker {
 public:
  void conductivity(std::string_view field, double value) {
    if (!finite(field, value)) return;
    if (value <= 0.0)
      add(ErrorCode::NonPositiveConductivity, field, "must be > 0");
  }

  void radius(std::string_view field, double value) {
    if (!finite(field, value)) return;
    if (value <= 0.0 || value >= 1.0)
      add(ErrorCode::RadiusOutOfRange, field, "must lie in (0, 1)");
  }

  void fraction(std::string_view field, double value) {
    if (!finite(field, value)) return;
    if (value < 0.0 || value > 1.0)
      add(ErrorCode::FractionOutOfRange, field, "must lie in [0, 1]");
  }

  void angle(std::string_view field, double value) {
    if (!finite(field, value)) return;
    if (value <= -std::numbers::pi / 2 || value > std::numbers::pi / 2)
      add(ErrorCode::AngleOutOfRange, field, "must lie in (-pi/2, pi/2]");
  }

  void spiral(const SpiralMaterial& m) {
    conductivity("sigma1", m.sigma1);
    conductivity("sigma2", m.sigma2);
    angle("phi", m.phi);
  }

  void add(ErrorCode code, std::string_view field, std::string message) {
    found_.push_back({code, std::string(field), std::move(message)});
  }

  std::vector<Violation> take() { return std::move(found_); }

 private:
  bool finite(std::string_view field, double value) {
    if (std::isfinite(value)) return true;
    add(ErrorCode::NonFinite, field, "must be finite");
    return false;
  }

  std::vector<Violation> found_;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string_view type_name(const Assemblage& a) {
  return std::visit(
      Overloaded{
          [](const SpiralWithCore&) { return std::string_view("spiral_with_core"); },
          [](const CoatedCircles&) { return std::string_view("coated_circles"); },
          [](const Schulgasser&) { return std::string_view("schulgasser"); },
          [](const OrangeWithCore&) { return std::string_view("orange_with_core"); },
          [](const OrangeWithShell&) { return std::string_view("orange_with_shell"); },
          [](const BasicSpiral&) { return std::string_view("basic_spiral"); },
          [](const SpiralWithShell&) { return std::string_view("spiral_with_shell"); },
          [](const Wheel&) { return std::string_view("wheel"); },
          [](const Star&) { return std::string_view("star"); },
          [](const Hub&) { return std::string_view("hub"); },
          [](const SpikyBall&) { return std::string_view("spiky_ball"); },
      },
      a);
}

int dimension(const Assemblage& a) {
  return std::holds_alternative<Hub>(a) || std::holds_alternative<SpikyBall>(a) ? 3 : 2;
}

PolarTensor spiral_tensor(const SpiralMaterial& m) {
  const double c = std::cos(m.phi);
  const double s = std::sin(m.phi);
  return PolarTensor{
      m.sigma1 * c * c + m.sigma2 * s * s,
      (m.sigma1 - m.sigma2) * c * s,
      m.sigma1 * s * s + m.sigma2 * c * c,
  };
}

LaminateEigen laminate_eigen(const LaminateSpec& spec) {
  if (!(spec.k1 > 0.0) || !(spec.k2 > 0.0))
    throw Error(ErrorCode::NonPositiveConductivity,
                "laminate constituents must be > 0; use the insulated-limit formulas");
  if (!(spec.m1 >= 0.0 && spec.m1 <= 1.0))
    throw Error(ErrorCode::FractionOutOfRange, "laminate fraction m1 must lie in [0, 1]");
  const double m2 = spec.m2();
  return LaminateEigen{
      spec.m1 * spec.k1 + m2 * spec.k2,
      1.0 / (spec.m1 / spec.k1 + m2 / spec.k2),
  };
}

std::vector<Violation> violations(const Assemblage& a) {
  Checker check;
  std::visit(
      Overloaded{
          [&](const SpiralWithCore& g) {
            check.conductivity("sigma_i", g.sigma_i);
            check.spiral(g.spiral);
            check.radius("r0", g.r0);
          },
          [&](const CoatedCircles& g) {
            check.conductivity("sigma_i", g.sigma_i);
            check.conductivity("sigma1", g.sigma1);
            check.radius("r0", g.r0);
          },
          [&](const Schulgasser& g) {
            check.conductivity("sigma1", g.sigma1);
            check.conductivity("sigma2", g.sigma2);
          },
          [&](const OrangeWithCore& g) {
            check.conductivity("sigma_i", g.sigma_i);
            check.conductivity("sigma1", g.sigma1);
            check.conductivity("sigma2", g.sigma2);
            check.radius("r0", g.r0);
          },
          [&](const OrangeWithShell& g) {
            check.conductivity("sigma1", g.sigma1);
            check.conductivity("sigma_r", g.sigma_r);
            check.conductivity("sigma_theta", g.sigma_theta);
            check.radius("r0", g.r0);
          },
          [&](const BasicSpiral& g) {
            check.spiral(SpiralMaterial{g.sigma1, g.sigma2, g.phi});
          },
          [&](const SpiralWithShell& g) {
            check.conductivity("sigma1_shell", g.sigma1_shell);
            check.spiral(g.spiral);
            check.radius("r0", g.r0);
          },
          [&](const Wheel& g) {
            check.conductivity("sigma_i", g.sigma_i);
            check.conductivity("sigma1", g.sigma1);
            check.conductivity("sigma2", g.sigma2);
            check.radius("r0", g.r0);
            check.radius("r1", g.r1);
            if (std::isfinite(g.r0) && std::isfinite(g.r1) && !(g.r0 < g.r1))
              check.add(ErrorCode::RadiusOrdering, "r1", "wheel requires r0 < r1");
          },
          [&](const Star& g) {
            check.conductivity("sigma_i", g.sigma_i);
            check.conductivity("sigma", g.sigma);
            check.fraction("mu", g.mu);
            check.radius("r0", g.r0);
          },
          [&](const Hub& g) {
            check.conductivity("sigma_i", g.sigma_i);
            check.conductivity("sigma", g.sigma);
            check.fraction("mu", g.mu);
            check.radius("rho0", g.rho0);
          },
          [&](const SpikyBall& g) {
            check.conductivity("sigma_i", g.sigma_i);
            check.conductivity("sigma", g.sigma);
            check.fraction("mu", g.mu);
            check.radius("rho0", g.rho0);
            if (!std::isfinite(g.n))
              check.add(ErrorCode::NonFinite, "n", "must be finite");
            else if (g.n <= 1.0)
              check.add(ErrorCode::ExponentOutOfRange, "n", "spiky ball requires n > 1");
          },
      },
      a);
  return check.take();
}

const Assemblage& validate(const Assemblage& a) {
  auto found = violations(a);
  if (!found.empty()) throw ValidationError(std::move(found));
  return a;
}

double canonical_spiral_angle(double phi) {
  double r = std::remainder(phi, std::numbers::pi);  // [-pi/2, pi/2]
  if (r <= -std::numbers::pi / 2) r += std::numbers::pi;
  return r;
}

}  // namespace emt
