#include "emt/closed_form.hpp"

#include <cmath>
#include <numbers>

namespace emt::closed_form {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double reduce_angle(double angle) {
  double r = std::remainder(angle, 2.0 * std::numbers::pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

double spiral_core_sigma_star(double sigma_i, double sigma1, double sigma2, double phi,
                              double r0) {
  const double s2 = std::sin(phi) * std::sin(phi);
  const double denom = s2 * sigma1 - s2 * sigma2 - sigma1;
  if (denom == 0.0)
    throw Error(ErrorCode::DegenerateDenominator, "spiral exponent denominator vanishes");
  const double root = std::sqrt(sigma1 * sigma2);
  const double gamma = 2.0 * root / denom;
  // Numerator and denominator divided through by r0^gamma (gamma < 0), so
  // that q = r0^-gamma stays in (0, 1] for any core radius.
  const double q = std::pow(r0, -gamma);
  return (sigma2 * sigma1 * (1.0 - q) + sigma_i * root * (1.0 + q)) /
         (sigma_i * (1.0 - q) + root * (1.0 + q));
}

double hs_coated_circles(double sigma_i, double sigma1, double r0) {
  const double m = r0 * r0;
  const double sum = sigma_i + sigma1;
  const double diff = sigma_i - sigma1;
  return sigma1 * (sum + m * diff) / (sum - m * diff);
}

double schulgasser(double sigma1, double sigma2) { return std::sqrt(sigma1 * sigma2); }

double orange_with_core(double sigma_i, double sigma1, double sigma2, double r0) {
  const double kappa = std::sqrt(sigma2 / sigma1);
  const double p = std::pow(r0, 2.0 * kappa);
  return sigma1 * (sigma_i * kappa * (1.0 + p) + sigma2 * (1.0 - p)) /
         (sigma1 * kappa * (1.0 + p) + sigma_i * (1.0 - p));
}

double orange_with_shell(double sigma1, double sigma_r, double sigma_theta, double r0) {
  const double g = std::sqrt(sigma_theta * sigma_r);
  const double m = r0 * r0;
  return sigma1 * (g * (m + 1.0) + sigma1 * (1.0 - m)) / (g * (1.0 - m) + sigma1 * (m + 1.0));
}

double basic_spiral(double sigma1, double sigma2, double /*phi*/) {
  return std::sqrt(sigma1 * sigma2);
}

double spiral_with_shell(double sigma1_shell, double sigma1, double sigma2, double r0) {
  // The spiral disk homogenizes to sqrt(sigma1 sigma2), exactly like the
  // radial laminate, so the orange-with-shell formula applies verbatim.
  return orange_with_shell(sigma1_shell, sigma1, sigma2, r0);
}

double insulated_shell_limit(double sigma_shell, double r0) {
  const double m = r0 * r0;
  return sigma_shell * (1.0 - m) / (1.0 + m);
}

double insulated_spiral_core_limit(double sigma_i, double sigma_r, double phi, double r0) {
  if (r0 <= 0.0) return 0.0;
  const double c2 = std::cos(phi) * std::cos(phi);
  const double radial = sigma_r * c2;
  if (radial == 0.0) return 0.0;
  return sigma_i * radial / (radial - sigma_i * std::log(r0));
}

double wheel(double sigma_i, double sigma1, double sigma2, double r0, double r1) {
  if (!(r0 > 0.0 && r0 < r1 && r1 <= 1.0))
    throw Error(ErrorCode::RadiusOrdering, "wheel requires 0 < r0 < r1 <= 1");
  // Constant current per spoke: the core plus spoke annulus acts, seen from
  // r1, like an isotropic disk of this conductivity.
  const double inner = sigma_i * sigma1 / (sigma1 + sigma_i * (r1 - r0));
  return hs_coated_circles(inner, sigma2, r1);
}

WheelPrintedCheck wheel_printed_check(double sigma_i, double sigma1, double sigma2, double r0,
                                      double r1) {
  const double matched = wheel(sigma_i, sigma1, sigma2, r0, r1);
  const double a = r1 * r1 * sigma1 * sigma_i + r1 * r1 * r0 * sigma2 * sigma_i -
                   r1 * r1 * sigma1 * sigma2 - r1 * r1 * r1 * sigma2 * sigma_i;
  auto printed = [&](double ri) {
    const double b =
        ri * sigma_i * sigma2 + sigma2 * sigma1 + sigma1 * sigma_i - r0 * sigma2 * sigma_i;
    return sigma2 * (a + b) / (b - a);
  };
  const double p1 = printed(r1);
  const double p0 = printed(r0);
  return WheelPrintedCheck{matched, p1, p0, std::abs(p1 - matched) / std::abs(matched),
                           std::abs(p0 - matched) / std::abs(matched)};
}

double star(double sigma_i, double sigma1, double r0) {
  return sigma_i * sigma1 / (sigma1 + sigma_i * (1.0 - r0));
}

StarFraction star_fraction(double sigma, double mu, double r0) {
  const double m = r0 * r0 + 2.0 * mu * r0 * (1.0 - r0);
  return StarFraction{m, star(sigma, sigma * mu * r0, r0)};
}

double hub(double sigma_i, double sigma, double mu, double rho0) {
  return sigma_i * sigma * rho0 * rho0 * mu / (sigma_i * (1.0 - rho0) + sigma * mu * rho0);
}

double hub_volume_fraction(double mu, double rho0) {
  return rho0 * rho0 * rho0 + 3.0 * mu * rho0 * rho0 * (1.0 - rho0);
}

double spiky_ball(double sigma_i, double sigma, double mu, double rho0, double n) {
  if (!(n > 1.0)) throw Error(ErrorCode::ExponentOutOfRange, "spiky ball requires n > 1");
  const double pn1 = std::pow(rho0, n - 1.0);
  return sigma_i * sigma * std::pow(rho0, n) * mu * (n - 1.0) /
         (sigma_i * (1.0 - pn1) + sigma * mu * pn1 * (n - 1.0));
}

HarmonicConstants harmonic_decomposition(const Assemblage& a) {
  return std::visit(
      Overloaded{
          [](const Star& g) {
            return HarmonicConstants{(1.0 - g.r0) / (g.mu * g.r0), 1.0};
          },
          [](const Hub& g) {
            return HarmonicConstants{(1.0 - g.rho0) / (g.mu * g.rho0 * g.rho0), 1.0 / g.rho0};
          },
          [](const SpikyBall& g) {
            return HarmonicConstants{
                (1.0 - std::pow(g.rho0, g.n - 1.0)) / (g.mu * (g.n - 1.0) * std::pow(g.rho0, g.n)),
                1.0 / g.rho0};
          },
          [](const auto&) -> HarmonicConstants {
            throw Error(ErrorCode::MethodGeometryMismatch,
                        "harmonic decomposition applies to star, hub and spiky_ball only");
          },
      },
      a);
}

double signed_rotation(double sigma1, double sigma2, double phi, double r0) {
  const PolarTensor k = spiral_tensor({sigma1, sigma2, phi});
  return k.k_rtheta / k.k_rr * std::log(r0);
}

RotationResult rotation_angle(double sigma_i, double sigma1, double sigma2, double phi,
                              double r0) {
  const PolarTensor k = spiral_tensor({sigma1, sigma2, phi});
  const double root = std::sqrt(sigma1 * sigma2);
  const double alpha = root / k.k_rr;
  const double upsilon_signed = k.k_rtheta / k.k_rr * std::log(r0);
  // Nucleus amplitude for an exterior potential r cos(theta).
  const double magnitude = 2.0 * root * std::pow(r0, alpha - 1.0) /
                           ((root + sigma_i) + std::pow(r0, 2.0 * alpha) * (root - sigma_i));
  const double upsilon = std::abs(upsilon_signed);
  return RotationResult{upsilon, reduce_angle(upsilon), magnitude, upsilon_signed,
                        reduce_angle(upsilon_signed)};
}

double optimal_phi(double sigma1, double sigma2) { return std::atan(std::sqrt(sigma1 / sigma2)); }

double max_rotation(double sigma1, double sigma2, double r0) {
  return -0.5 * std::log(r0) * std::abs(sigma1 / sigma2 - 1.0) * std::sqrt(sigma2 / sigma1);
}

LaminateRotation max_rotation_laminate(double k1, double k2, double r0) {
  const double d = k1 - k2;
  const double upsilon = -0.25 * std::log(r0) * d * d / ((k1 + k2) * std::sqrt(k1 * k2));
  return LaminateRotation{0.5, upsilon, k1 == k2};
}

double radius_for_rotation(double k1, double k2, double upsilon_target) {
  if (k1 == k2)
    throw Error(ErrorCode::EqualConductivities,
                "equal laminate constituents produce no rotation");
  if (!(upsilon_target >= 0.0))
    throw Error(ErrorCode::RangeViolatesInvariant, "target rotation must be >= 0");
  const double d = k1 - k2;
  return std::exp(-4.0 * upsilon_target * std::sqrt(k1 * k2) * (k1 + k2) / (d * d));
}

Effective effective_conductivity(const Assemblage& a) {
  return std::visit(
      Overloaded{
          [](const SpiralWithCore& g) {
            return Effective{spiral_core_sigma_star(g.sigma_i, g.spiral.sigma1, g.spiral.sigma2,
                                                    g.spiral.phi, g.r0),
                             "k_*"};
          },
          [](const CoatedCircles& g) {
            return Effective{hs_coated_circles(g.sigma_i, g.sigma1, g.r0), "k_hs"};
          },
          [](const Schulgasser& g) { return Effective{schulgasser(g.sigma1, g.sigma2), "k_sch"}; },
          [](const OrangeWithCore& g) {
            return Effective{orange_with_core(g.sigma_i, g.sigma1, g.sigma2, g.r0), "k_c"};
          },
          [](const OrangeWithShell& g) {
            return Effective{orange_with_shell(g.sigma1, g.sigma_r, g.sigma_theta, g.r0), "k_s"};
          },
          [](const BasicSpiral& g) {
            return Effective{basic_spiral(g.sigma1, g.sigma2, g.phi), "k_sp"};
          },
          [](const SpiralWithShell& g) {
            return Effective{
                spiral_with_shell(g.sigma1_shell, g.spiral.sigma1, g.spiral.sigma2, g.r0), "k_s"};
          },
          [](const Wheel& g) {
            return Effective{wheel(g.sigma_i, g.sigma1, g.sigma2, g.r0, g.r1), "k_wheel"};
          },
          [](const Star& g) {
            return Effective{star(g.sigma_i, g.spoke_coefficient(), g.r0), "k_st"};
          },
          [](const Hub& g) { return Effective{hub(g.sigma_i, g.sigma, g.mu, g.rho0), "k_hub"}; },
          [](const SpikyBall& g) {
            return Effective{spiky_ball(g.sigma_i, g.sigma, g.mu, g.rho0, g.n), "k_sb"};
          },
      },
      a);
}

}  // namespace emt::closed_form
