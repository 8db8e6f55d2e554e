#include "emt/oracle.hpp"

#include <cmath>
#include <numeric>

#include "emt/closed_form.hpp"

namespace emt::oracle {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Ode: return "ode";
    case Method::Ode3d: return "ode3d";
    case Method::Fd: return "fd";
  }
  return "ode";
}

Method method_from_string(std::string_view name) {
  if (name == "ode") return Method::Ode;
  if (name == "ode3d") return Method::Ode3d;
  if (name == "fd") return Method::Fd;
  throw Error(ErrorCode::Usage, "unknown method '" + std::string(name) + "'");
}

namespace {

double relative_error(double closed, double numeric) {
  return std::abs(closed - numeric) / std::abs(closed);
}

OracleReport base_report(const Assemblage& a, Method method, double tol) {
  OracleReport r;
  r.geometry_type = std::string(type_name(a));
  r.method = method;
  r.tol = tol;
  r.sigma_star_closed = closed_form::effective_conductivity(a).sigma_star;
  r.jump_residuals = field::jump_residuals(field::solve(a));
  if (const auto* w = std::get_if<Wheel>(&a))
    r.wheel_printed = closed_form::wheel_printed_check(w->sigma_i, w->sigma1, w->sigma2, w->r0, w->r1);
  return r;
}

}  // namespace

OracleReport fd_cloaking_check(const Assemblage& a, const FdOptions& options) {
  const FdResult fd = fd_solve(a, options);
  OracleReport r = base_report(a, Method::Fd, options.solver_tol);
  r.sigma_star_numeric = fd.sigma_star_numeric.value_or(fd.sigma_star_exterior);
  r.rel_err = relative_error(r.sigma_star_closed, r.sigma_star_numeric);
  r.farfield_norm = fd.farfield_norm;
  r.grid_spec = GridSpec{options.grid_n, options.box_half_width};
  return r;
}

OracleReport verify(const Assemblage& a, Method method, double tol, const FdOptions& fd_options) {
  validate(a);
  const int dim = dimension(a);
  if ((method == Method::Ode3d) != (dim == 3))
    throw Error(ErrorCode::MethodGeometryMismatch,
                std::string(to_string(method)) + " cannot check a " + std::to_string(dim) +
                    "D geometry");
  if (method == Method::Fd) return fd_cloaking_check(a, fd_options);

  OracleReport r = base_report(a, method, tol);
  const RadialProfile p = profile_for(a);
  const OdeResult ode = method == Method::Ode ? ode_effective_conductivity(p, tol)
                                               : ode_effective_conductivity_3d(p, tol);
  r.sigma_star_numeric = ode.sigma_star;
  r.imag_residual = ode.imag_residual;
  r.rel_err = relative_error(r.sigma_star_closed, r.sigma_star_numeric);
  return r;
}

std::vector<ConvergenceRow> fd_convergence_study(const Assemblage& a, std::span<const int> grids,
                                                 FdOptions base) {
  std::vector<ConvergenceRow> rows;
  for (int n : grids) {
    base.grid_n = n;
    const OracleReport r = fd_cloaking_check(a, base);
    rows.push_back({n, *r.farfield_norm, r.rel_err});
  }
  return rows;
}

double observed_order(std::span<const ConvergenceRow> rows) {
  if (rows.size() < 2) return std::nan("");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : rows) {
    const double x = std::log(static_cast<double>(row.grid_n));
    const double y = -std::log(row.farfield_norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace emt::oracle
