#pragma once

// Independent numerical checks of the closed forms.
//
//  * ode_effective_conductivity / _3d: adaptive Runge-Kutta shooting of the
//    first-order flux system of the single excited angular mode, from the
//    nucleus outwards. Nothing in here uses the exponents or basis functions
//    of the exact solver.
//  * fd_cloaking_check: piecewise-linear finite elements on a uniform
//    Cartesian grid whose triangles are cut along the material circles, for
//    div(K grad u) = 0 with one inclusion embedded in its closed-form
//    effective medium. Measures how far the exterior potential departs from
//    the applied x1.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emt/field_solver.hpp"
#include "emt/geometry.hpp"

namespace emt::oracle {

using TensorProfile = std::function<PolarTensor(double r)>;

struct ProfileSegment {
  double r_begin;
  double r_end;
  TensorProfile k;
};

/// Piecewise tensor K(r) on (r_core, 1]. With an isotropic core the
/// shooting starts at r_core from the regular nucleus solution; without one
/// the first segment must be a constant tensor starting at 0.
struct RadialProfile {
  field::Dimension dim = field::Dimension::Plane;
  std::optional<double> core_sigma;
  double r_core = 0.0;
  std::vector<ProfileSegment> segments;
};

RadialProfile profile_for(const Assemblage& a);

struct OdeResult {
  double sigma_star;
  double imag_residual;
  std::size_t steps;
};

OdeResult ode_effective_conductivity(const RadialProfile& p, double tol);
OdeResult ode_effective_conductivity_3d(const RadialProfile& p, double tol);

struct FdOptions {
  int grid_n = 256;              // cells per side
  double box_half_width = 3.0;   // domain [-L, L]^2
  double sigma_star_scale = 1.0; // exterior = scale * closed-form sigma*
  bool estimate_sigma = true;    // one extra solve to locate the cloaking sigma
  double solver_tol = 1e-10;     // relative CG residual
};

struct FdResult {
  double farfield_norm;
  double sigma_star_exterior;
  std::optional<double> sigma_star_numeric;
  int iterations;
  double solver_residual;
};

FdResult fd_solve(const Assemblage& a, const FdOptions& options);

enum class Method { Ode, Ode3d, Fd };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct GridSpec {
  int grid_n;
  double box_half_width;
};

struct OracleReport {
  std::string geometry_type;
  Method method = Method::Ode;
  double tol = 0.0;
  double sigma_star_closed = 0.0;
  double sigma_star_numeric = 0.0;
  double rel_err = 0.0;
  double imag_residual = 0.0;
  std::vector<field::JumpResidual> jump_residuals;
  std::optional<double> farfield_norm;
  std::optional<GridSpec> grid_spec;
  std::optional<closed_form::WheelPrintedCheck> wheel_printed;
};

OracleReport fd_cloaking_check(const Assemblage& a, const FdOptions& options = {});

OracleReport verify(const Assemblage& a, Method method, double tol,
                    const FdOptions& fd_options = {});

struct ConvergenceRow {
  int grid_n;
  double farfield_norm;
  double rel_err;
};

std::vector<ConvergenceRow> fd_convergence_study(const Assemblage& a, std::span<const int> grids,
                                                 FdOptions base = {});

/// Least-squares slope of -log(error) against log(grid_n).
double observed_order(std::span<const ConvergenceRow> rows);

}  // namespace emt::oracle
