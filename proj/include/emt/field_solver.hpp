#pragma once

// Exact fields of a single cloaked inclusion for the one angular mode a
// uniform applied field excites (n = 1 in the plane, l = 1 in space).
//
// Inside every layer the potential is u = U(r) cos(theta) + V(r) sin(theta)
// (V = 0 in space). The pair is carried as the complex amplitude
// W(r) = U + iV, and W = c1 f1(r) + c2 f2(r) over the layer's two-function
// solution basis:
//
//   isotropic, plane      {r, 1/r}
//   constant tensor       {r^(+alpha + i b), r^(-alpha + i b)},  b = K_rtheta / K_rr
//   spoke, plane          {r, 1}               K = diag(sigma1 / r, 0)
//   isotropic, space      {rho, rho^-2}
//   spoke, space          {rho^(n-1), 1}       K = coef / rho^n on the radial axis
//
// Layers are matched on W and the radial flux J = K_rr W' - i K_rtheta W / r,
// which carries the continuity of u, j.n and e.t at once. The exterior is
// fixed to u = r cos(theta) and sigma* is the resulting real admittance J/W
// at r = 1.

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "emt/closed_form.hpp"
#include "emt/geometry.hpp"

namespace emt::field {

using Complex = std::complex<double>;

enum class Dimension { Plane, Space };

/// Exponents of the constant-tensor annulus solutions
/// U + iV = r^(+-alpha) exp(i beta(r)) with beta(r) = beta_coef ln r.
struct ModeExponents {
  double alpha;
  double beta_coef;

  double beta(double r) const;
};

ModeExponents mode_exponents(const PolarTensor& k);

struct IsotropicLayer {
  double sigma;
};
struct TensorLayer {
  PolarTensor k;
};
/// Radial-only conductivity K_rr = coef / r^exponent (spoke material).
struct SpokeLayer {
  double coef;
  double exponent;
};
using LayerMaterial = std::variant<IsotropicLayer, TensorLayer, SpokeLayer>;

struct LayerSpec {
  LayerMaterial material;
  double r_outer;
};

/// Concentric layers from the centre outwards; the first one is the core
/// (it starts at r = 0) and the last one ends at r = 1.
struct LayerChain {
  Dimension dim = Dimension::Plane;
  std::vector<LayerSpec> layers;
};

struct SolvedLayer {
  LayerMaterial material;
  double r_inner;
  double r_outer;
  Complex c1;
  Complex c2;
};

/// Real annulus coefficients of the constant-tensor solution:
/// U + iV = (C1 + iC2) r^alpha e^(i beta) + (C3 + iC4) r^-alpha e^(i beta).
struct AnnulusCoefficients {
  double c1, c2, c3, c4;
  ModeExponents exponents;
};

struct FieldSolution {
  std::optional<Assemblage> geometry;
  Dimension dim = Dimension::Plane;
  double sigma_star = 0.0;
  double a_core = 0.0;  // nucleus potential A r cos + B r sin (core amplitude c1)
  double b_core = 0.0;
  std::optional<AnnulusCoefficients> annulus;
  std::vector<SolvedLayer> layers;
  double imag_residual = 0.0;  // |Im| of the exterior admittance before normalisation
};

/// U + iV, its radial derivative, the radial flux J_u + iJ_v and the
/// circumferential flux coefficient, all for one side of an interface.
struct RadialState {
  Complex w;
  Complex dw;
  Complex j;
  Complex j_theta;
};

enum class Side { Inner, Outer };

struct CurrentSample {
  double j_r;
  double j_theta;
};

struct JumpResidual {
  double radius;
  double potential;  // |[W]|
  double current;    // |[J]|
};

LayerChain chain_for(const Assemblage& a);

/// Reduced three-condition solve of the spiral-with-core problem.
FieldSolution solve_spiral_core(const SpiralWithCore& a);

/// Layer-by-layer transfer solve. Despite the name, constant-tensor and
/// spoke layers are supported as well as isotropic ones.
FieldSolution solve_piecewise_isotropic_chain(const LayerChain& chain);

/// Dispatches to solve_spiral_core or the chain solver.
FieldSolution solve(const Assemblage& a);

RadialState radial_state(const FieldSolution& s, double r, Side side = Side::Inner);
PolarTensor tensor_at(const FieldSolution& s, double r, Side side = Side::Inner);

double eval_potential(const FieldSolution& s, double r, double theta);
CurrentSample eval_current(const FieldSolution& s, double r, double theta);

/// Residuals of [W] and [J] at every interface including r = 1.
std::vector<JumpResidual> jump_residuals(const FieldSolution& s);
double max_jump_residual(const FieldSolution& s);

closed_form::RotationResult nucleus_field(const FieldSolution& s);

}  // namespace emt::field
