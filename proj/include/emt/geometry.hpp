#pragma once

// Materials, conductivity tensors and the radially symmetric assemblages.
//
// All quantities are dimensionless. Radii are normalized so that the
// structured inclusion has outer radius 1; conductivities only ever enter
// through ratios.

#include <numbers>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "emt/error.hpp"

namespace emt {

struct IsotropicMaterial {
  double sigma;
};

/// Anisotropic material whose eigendirections make a constant angle `phi`
/// with the radius (eigendirections trace logarithmic spirals).
/// phi = 0 is a radial laminate.
struct SpiralMaterial {
  double sigma1;
  double sigma2;
  double phi;
};

/// Symmetric 2x2 conductivity tensor expressed in the local (r, theta) frame.
struct PolarTensor {
  double k_rr;
  double k_rtheta;
  double k_thetatheta;

  double det() const { return k_rr * k_thetatheta - k_rtheta * k_rtheta; }
  double trace() const { return k_rr + k_thetatheta; }
};

struct LaminateSpec {
  double k1;
  double k2;
  double m1;

  double m2() const { return 1.0 - m1; }
};

struct LaminateEigen {
  double sigma1;  // arithmetic mean, conductivity along the layers
  double sigma2;  // harmonic mean, conductivity across the layers
};

// ---------------------------------------------------------------------------
// Assemblage variants. Field names match the JSON schema one to one.

struct SpiralWithCore {
  double sigma_i;
  SpiralMaterial spiral;
  double r0;
};

struct CoatedCircles {
  double sigma_i;
  double sigma1;
  double r0;
};

struct Schulgasser {
  double sigma1;  // radial conductivity
  double sigma2;  // circumferential conductivity
};

struct OrangeWithCore {
  double sigma_i;
  double sigma1;
  double sigma2;
  double r0;
};

struct OrangeWithShell {
  double sigma1;  // isotropic shell
  double sigma_r;
  double sigma_theta;
  double r0;
};

struct BasicSpiral {
  double sigma1;
  double sigma2;
  double phi;
};

struct SpiralWithShell {
  double sigma1_shell;
  SpiralMaterial spiral;
  double r0;
};

/// Core, spoke annulus r0 < r < r1 with K = diag(sigma1 / r, 0), isotropic
/// shell sigma2 out to r = 1.
struct Wheel {
  double sigma_i;
  double sigma1;
  double sigma2;
  double r0;
  double r1;

  /// Spokes of material `sigma` covering the fraction `mu` of the
  /// circumference at r0, i.e. sigma1 = sigma * mu * r0.
  static Wheel from_spoke_material(double sigma_i, double sigma, double mu,
                                   double sigma2, double r0, double r1) {
    return Wheel{sigma_i, sigma * mu * r0, sigma2, r0, r1};
  }
};

struct Star {
  double sigma_i;
  double sigma;
  double mu;
  double r0;

  double spoke_coefficient() const { return sigma * mu * r0; }
};

struct Hub {
  double sigma_i;
  double sigma;
  double mu;
  double rho0;
};

struct SpikyBall {
  double sigma_i;
  double sigma;
  double mu;
  double rho0;
  double n;
};

using Assemblage =
    std::variant<SpiralWithCore, CoatedCircles, Schulgasser, OrangeWithCore,
                 OrangeWithShell, BasicSpiral, SpiralWithShell, Wheel, Star,
                 Hub, SpikyBall>;

/// snake_case discriminator used by the JSON schema.
std::string_view type_name(const Assemblage& a);

/// 2 for planar assemblages, 3 for Hub and SpikyBall.
int dimension(const Assemblage& a);

PolarTensor spiral_tensor(const SpiralMaterial& m);

/// Eigenvalues of a two-phase laminate. Throws NonPositiveConductivity for
/// k1 or k2 <= 0 and FractionOutOfRange for m1 outside [0, 1].
LaminateEigen laminate_eigen(const LaminateSpec& spec);

std::vector<Violation> violations(const Assemblage& a);

/// Returns `a` unchanged when every invariant holds, otherwise throws a
/// ValidationError listing all violations.
const Assemblage& validate(const Assemblage& a);

/// Maps an angle onto the canonical range (-pi/2, pi/2]. Eigenvector
/// directions repeat with period pi.
double canonical_spiral_angle(double phi);

}  // namespace emt
