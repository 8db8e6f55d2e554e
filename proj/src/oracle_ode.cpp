#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <complex>

#include "emt/oracle.hpp"

namespace emt::oracle {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kMaxStep = 0.02;

template <class State, class System>
std::size_t integrate_segment(System system, State& y, double r_begin, double r_end,
                              double tol) {
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
  const double length = r_end - r_begin;
  double r = r_begin;
  double dr = std::min(1e-3, 0.01 * length);
  std::size_t steps = 0;
  while (r < r_end) {
    // The error estimate alone lets a smooth segment go in a handful of
    // steps; a step cap keeps the result independent of tol.
    dr = std::min({dr, kMaxStep, r_end - r});
    const auto result = stepper.try_step(system, y, r, dr);
    if (result == odeint::success) {
      ++steps;
      if (r_end - r <= 1e-15 * r_end) r = r_end;
    } else if (dr < 1e-14 * length) {
      throw Error(ErrorCode::StiffnessFailure, "radial shooting step size underflow");
    }
    if (steps > 2'000'000)
      throw Error(ErrorCode::StiffnessFailure, "radial shooting exceeded the step budget");
  }
  return steps;
}

void check_tolerance(double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-4))
    throw Error(ErrorCode::Usage, "oracle tolerance must lie in [1e-12, 1e-4]");
}

}  // namespace

RadialProfile profile_for(const Assemblage& a) {
  auto constant = [](PolarTensor k) { return [k](double) { return k; }; };
  auto isotropic = [](double s) { return [s](double) { return PolarTensor{s, 0.0, s}; }; };
  auto spoke = [](double coef, double n) {
    return [coef, n](double r) { return PolarTensor{coef / std::pow(r, n), 0.0, 0.0}; };
  };
  using field::Dimension;
  RadialProfile p;
  if (const auto* g = std::get_if<SpiralWithCore>(&a)) {
    p = {Dimension::Plane, g->sigma_i, g->r0, {{g->r0, 1.0, constant(spiral_tensor(g->spiral))}}};
  } else if (const auto* g = std::get_if<CoatedCircles>(&a)) {
    p = {Dimension::Plane, g->sigma_i, g->r0, {{g->r0, 1.0, isotropic(g->sigma1)}}};
  } else if (const auto* g = std::get_if<Schulgasser>(&a)) {
    p = {Dimension::Plane, std::nullopt, 0.0,
         {{0.0, 1.0, constant(PolarTensor{g->sigma1, 0.0, g->sigma2})}}};
  } else if (const auto* g = std::get_if<OrangeWithCore>(&a)) {
    p = {Dimension::Plane, g->sigma_i, g->r0,
         {{g->r0, 1.0, constant(PolarTensor{g->sigma1, 0.0, g->sigma2})}}};
  } else if (const auto* g = std::get_if<OrangeWithShell>(&a)) {
    p = {Dimension::Plane, std::nullopt, 0.0,
         {{0.0, g->r0, constant(PolarTensor{g->sigma_r, 0.0, g->sigma_theta})},
          {g->r0, 1.0, isotropic(g->sigma1)}}};
  } else if (const auto* g = std::get_if<BasicSpiral>(&a)) {
    p = {Dimension::Plane, std::nullopt, 0.0,
         {{0.0, 1.0, constant(spiral_tensor({g->sigma1, g->sigma2, g->phi}))}}};
  } else if (const auto* g = std::get_if<SpiralWithShell>(&a)) {
    p = {Dimension::Plane, std::nullopt, 0.0,
         {{0.0, g->r0, constant(spiral_tensor(g->spiral))}, {g->r0, 1.0, isotropic(g->sigma1_shell)}}};
  } else if (const auto* g = std::get_if<Wheel>(&a)) {
    p = {Dimension::Plane, g->sigma_i, g->r0,
         {{g->r0, g->r1, spoke(g->sigma1, 1.0)}, {g->r1, 1.0, isotropic(g->sigma2)}}};
  } else if (const auto* g = std::get_if<Star>(&a)) {
    p = {Dimension::Plane, g->sigma_i, g->r0, {{g->r0, 1.0, spoke(g->sigma * g->mu * g->r0, 1.0)}}};
  } else if (const auto* g = std::get_if<Hub>(&a)) {
    p = {Dimension::Space, g->sigma_i, g->rho0,
         {{g->rho0, 1.0, spoke(g->sigma * g->mu * g->rho0 * g->rho0, 2.0)}}};
  } else if (const auto* g = std::get_if<SpikyBall>(&a)) {
    p = {Dimension::Space, g->sigma_i, g->rho0,
         {{g->rho0, 1.0, spoke(g->sigma * g->mu * std::pow(g->rho0, g->n), g->n)}}};
  }
  return p;
}

OdeResult ode_effective_conductivity(const RadialProfile& p, double tol) {
  check_tolerance(tol);
  if (p.dim != field::Dimension::Plane)
    throw Error(ErrorCode::MethodGeometryMismatch, "planar shooting needs a planar profile");
  if (p.segments.empty()) throw Error(ErrorCode::EmptyLayerList, "profile has no segments");

  using State = std::array<double, 4>;  // U, V, r J_u, r J_v
  State y{};
  double r_start = p.r_core;
  if (p.core_sigma) {
    y = {p.r_core, 0.0, *p.core_sigma * p.r_core, 0.0};
  } else {
    // Regular local solution W = r^lambda of the constant tensor at the
    // centre: K_rr l^2 - 2i K_rtheta l - K_thetatheta = 0, root with Re > 0.
    const ProfileSegment& first = p.segments.front();
    const PolarTensor k = first.k(0.5 * (first.r_begin + first.r_end));
    using C = std::complex<double>;
    const C b{0.0, -2.0 * k.k_rtheta};
    const C disc = std::sqrt(b * b + 4.0 * k.k_rr * k.k_thetatheta);
    C lambda = (-b + disc) / (2.0 * k.k_rr);
    if (lambda.real() < 0.0) lambda = (-b - disc) / (2.0 * k.k_rr);
    r_start = 1e-4 * first.r_end;
    const C w = std::exp(lambda * std::log(r_start));
    const C j = (k.k_rr * lambda - C{0.0, 1.0} * k.k_rtheta) * w / r_start;
    y = {w.real(), w.imag(), r_start * j.real(), r_start * j.imag()};
  }

  std::size_t steps = 0;
  for (const auto& seg : p.segments) {
    const TensorProfile& kfun = seg.k;
    auto system = [&kfun](const State& z, State& dz, double r) {
      const PolarTensor k = kfun(r);
      const double ju = z[2] / r;
      const double jv = z[3] / r;
      const double du = (ju - k.k_rtheta * z[1] / r) / k.k_rr;
      const double dv = (jv + k.k_rtheta * z[0] / r) / k.k_rr;
      dz[0] = du;
      dz[1] = dv;
      dz[2] = -(k.k_rtheta * dv - k.k_thetatheta * z[0] / r);
      dz[3] = k.k_rtheta * du + k.k_thetatheta * z[1] / r;
    };
    if (!(seg.k(0.5 * (std::max(seg.r_begin, r_start) + seg.r_end)).k_rr > 0.0))
      throw Error(ErrorCode::SingularTensor, "radial conductivity must be positive");
    steps += integrate_segment(system, y, std::max(seg.r_begin, r_start), seg.r_end, tol);
  }

  const std::complex<double> w{y[0], y[1]};
  const std::complex<double> j{y[2], y[3]};
  const std::complex<double> admittance = j / w;
  const double imag = std::abs(admittance.imag());
  if (imag > 100.0 * tol * std::max(1.0, std::abs(admittance)))
    throw Error(ErrorCode::NonRealAdmittance,
                "exterior admittance is not real: the inclusion cannot be cloaked");
  return OdeResult{admittance.real(), imag, steps};
}

OdeResult ode_effective_conductivity_3d(const RadialProfile& p, double tol) {
  check_tolerance(tol);
  if (p.dim != field::Dimension::Space)
    throw Error(ErrorCode::MethodGeometryMismatch, "spherical shooting needs a 3D profile");
  if (!p.core_sigma || p.segments.empty())
    throw Error(ErrorCode::EmptyLayerList, "3D profile needs an isotropic core and segments");

  using State = std::array<double, 2>;  // U, rho^2 J
  State y{p.r_core, *p.core_sigma * p.r_core * p.r_core};
  std::size_t steps = 0;
  for (const auto& seg : p.segments) {
    const TensorProfile& kfun = seg.k;
    auto system = [&kfun](const State& z, State& dz, double r) {
      const PolarTensor k = kfun(r);
      dz[0] = z[1] / (r * r * k.k_rr);
      dz[1] = 2.0 * k.k_thetatheta * z[0];
    };
    if (!(seg.k(0.5 * (seg.r_begin + seg.r_end)).k_rr > 0.0))
      throw Error(ErrorCode::SingularTensor, "radial conductivity must be positive");
    steps += integrate_segment(system, y, seg.r_begin, seg.r_end, tol);
  }
  return OdeResult{y[1] / y[0], 0.0, steps};
}

}  // namespace emt::oracle
