#pragma once

// Closed-form effective conductivities and rotation formulas for every
// assemblage. All functions are pure; none of them solve anything
// numerically.

#include <string_view>

#include "emt/geometry.hpp"

namespace emt::closed_form {

/// Rotation of the uniform nucleus field relative to the applied field.
struct RotationResult {
  double upsilon;         // rotation magnitude, unbounded, >= 0
  double psi;             // upsilon reduced into (-pi, pi]
  double magnitude;       // |field| in the nucleus for a unit applied field
  double upsilon_signed;  // counterclockwise rotation, unbounded
  double psi_signed;      // upsilon_signed reduced into (-pi, pi]
};

/// Reduces an angle into (-pi, pi].
double reduce_angle(double angle);

double spiral_core_sigma_star(double sigma_i, double sigma1, double sigma2, double phi,
                              double r0);
double hs_coated_circles(double sigma_i, double sigma1, double r0);
double schulgasser(double sigma1, double sigma2);
double orange_with_core(double sigma_i, double sigma1, double sigma2, double r0);
double orange_with_shell(double sigma1, double sigma_r, double sigma_theta, double r0);
double basic_spiral(double sigma1, double sigma2, double phi);
double spiral_with_shell(double sigma1_shell, double sigma1, double sigma2, double r0);

/// Spiral-with-shell whose laminate has an insulating phase: an annulus
/// around an insulated nucleus.
double insulated_shell_limit(double sigma_shell, double r0);

/// Spiral-with-core in the limit sigma2 -> 0; sigma_r is the remaining
/// (radial at phi = 0) eigenvalue.
double insulated_spiral_core_limit(double sigma_i, double sigma_r, double phi, double r0);

/// Wheel conductivity from exact layer matching. Accepts 0 < r0 < r1 <= 1.
double wheel(double sigma_i, double sigma1, double sigma2, double r0, double r1);

/// Compares the matched wheel value with the printed A/B coefficient
/// formula under both readings of its ambiguous radius symbol.
struct WheelPrintedCheck {
  double matched;
  double printed_r1;  // ambiguous radius read as r1
  double printed_r0;  // ambiguous radius read as r0
  double rel_dev_r1;
  double rel_dev_r0;
};
WheelPrintedCheck wheel_printed_check(double sigma_i, double sigma1, double sigma2, double r0,
                                      double r1);

double star(double sigma_i, double sigma1, double r0);

struct StarFraction {
  double m;  // volume fraction of conducting material
  double k;
};
StarFraction star_fraction(double sigma, double mu, double r0);

double hub(double sigma_i, double sigma, double mu, double rho0);
double hub_volume_fraction(double mu, double rho0);
double spiky_ball(double sigma_i, double sigma, double mu, double rho0, double n);

/// Constants of the series form 1/k = a/sigma + b/sigma_i.
struct HarmonicConstants {
  double a;
  double b;
};
/// Defined for Star, Hub and SpikyBall; throws MethodGeometryMismatch
/// otherwise.
HarmonicConstants harmonic_decomposition(const Assemblage& a);

/// Signed nucleus rotation (K_rtheta / K_rr) ln r0 of the spiral annulus.
double signed_rotation(double sigma1, double sigma2, double phi, double r0);

RotationResult rotation_angle(double sigma_i, double sigma1, double sigma2, double phi,
                              double r0);

double optimal_phi(double sigma1, double sigma2);
double max_rotation(double sigma1, double sigma2, double r0);

struct LaminateRotation {
  double m1_opt;
  double upsilon_max;
  bool degenerate;  // k1 == k2: every fraction is optimal, rotation is zero
};
LaminateRotation max_rotation_laminate(double k1, double k2, double r0);

/// Core radius at which the optimal equal-fraction laminate spiral rotates
/// the nucleus field by `upsilon_target`.
double radius_for_rotation(double k1, double k2, double upsilon_target);

struct Effective {
  double sigma_star;
  std::string_view formula_name;
};
Effective effective_conductivity(const Assemblage& a);

}  // namespace emt::closed_form
