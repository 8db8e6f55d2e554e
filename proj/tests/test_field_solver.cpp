#include <doctest.h>

#include <cmath>
#include <numbers>

#include "emt/closed_form.hpp"
#include "emt/field_solver.hpp"
#include "support.hpp"

using namespace emt;
using namespace emt::field;
using doctest::Approx;
using testing::rel_diff;

namespace {

constexpr double pi = std::numbers::pi;

// Dissipation over the unit disk for a unit applied field. The angular
// integral is done analytically: the mean of Re(a e^-it) Re(b e^-it) is
// Re(a conj b) / 2.
double dissipation(const FieldSolution& s) {
  static const double gx[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double gw[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                              0.4786286704993665, 0.2369268850561891};
  double total = 0.0;
  for (const auto& layer : s.layers) {
    // A tensor core behaves like r^alpha at the centre, so the core is cut
    // into geometrically shrinking pieces instead.
    constexpr int pieces = 400;
    const bool core = layer.r_inner == 0.0;
    for (int p = 0; p < pieces; ++p) {
      const double a = core ? layer.r_outer * std::pow(0.85, p + 1)
                            : layer.r_inner + p * (layer.r_outer - layer.r_inner) / pieces;
      const double b = core ? layer.r_outer * std::pow(0.85, p)
                            : layer.r_inner + (p + 1) * (layer.r_outer - layer.r_inner) / pieces;
      const double h = b - a;
      const double mid = 0.5 * (a + b);
      for (int q = 0; q < 5; ++q) {
        const double r = mid + 0.5 * h * gx[q];
        const RadialState st = radial_state(s, r);
        const Complex er = st.dw;
        const Complex et = Complex(0, -1) * st.w / r;
        const double density = (st.j * std::conj(er)).real() + (st.j_theta * std::conj(et)).real();
        total += 0.5 * h * gw[q] * pi * r * density;
      }
    }
  }
  return total;
}

}  // namespace

TEST_CASE("mode exponents") {
  auto ex = mode_exponents({3, 0, 3});
  CHECK(ex.alpha == Approx(1).epsilon(1e-15));
  CHECK(ex.beta_coef == 0);

  ex = mode_exponents(spiral_tensor({9, 4, 0}));
  CHECK(ex.alpha == Approx(std::sqrt(4.0 / 9)).epsilon(1e-15));
  CHECK(ex.beta_coef == 0);

  ex = mode_exponents(spiral_tensor({9, 1, pi / 4}));
  CHECK(ex.alpha == Approx(0.6).epsilon(1e-14));
  CHECK(ex.beta_coef == Approx(0.8).epsilon(1e-14));

  CHECK_THROWS_AS(mode_exponents({0, 0, 1}), Error);
}

TEST_CASE("exponents solve the characteristic equation of the flux balance") {
  testing::Draw draw(31);
  for (int i = 0; i < 500; ++i) {
    const auto k = spiral_tensor({draw.sigma(), draw.sigma(), draw.angle()});
    const auto ex = mode_exponents(k);
    for (double sign : {1.0, -1.0}) {
      const Complex lambda{sign * ex.alpha, ex.beta_coef};
      // W = r^lambda in (r J)' = i J_theta.
      const Complex residual = k.k_rr * lambda * lambda - 2.0 * Complex(0, 1) * k.k_rtheta * lambda -
                               k.k_thetatheta;
      CHECK(std::abs(residual) <= 1e-12 * (k.k_rr + k.k_thetatheta));
    }
  }
}

TEST_CASE("solved sigma matches the closed form for every geometry") {
  testing::Draw draw(32);
  for (int i = 0; i < 1100; ++i) {
    const Assemblage a = draw.assemblage(i % testing::kGeometryCount);
    const FieldSolution s = solve(a);
    INFO(type_name(a));
    CHECK(rel_diff(s.sigma_star, closed_form::effective_conductivity(a).sigma_star) <= 1e-10);
    CHECK(max_jump_residual(s) <= 1e-10);
    CHECK(s.imag_residual <= 1e-10);
  }
}

TEST_CASE("exterior potential is exactly the applied field") {
  testing::Draw draw(33);
  for (int i = 0; i < 110; ++i) {
    const FieldSolution s = solve(draw.assemblage(i % testing::kGeometryCount));
    for (int k = 0; k < 20; ++k) {
      const double r = draw.uniform(1.0 + 1e-9, 5.0);
      const double t = draw.uniform(-pi, pi);
      CHECK(eval_potential(s, r, t) == r * std::cos(t));
    }
    const auto j = eval_current(s, 1.0 + 1e-12, 0.3);
    CHECK(j.j_r == Approx(s.sigma_star * std::cos(0.3)).epsilon(1e-12));
  }
}

TEST_CASE("potential is continuous across interfaces") {
  const FieldSolution s = solve(Wheel{1.5, 0.7, 2.0, 0.35, 0.7});
  for (const double r : {0.35, 0.7, 1.0})
    for (const double t : {0.0, 0.9, 2.1}) {
      const double a = eval_potential(s, r - 1e-9, t);
      const double b = eval_potential(s, r + 1e-9, t);
      CHECK(std::abs(a - b) <= 1e-7);
    }
}

TEST_CASE("coated circles potential matches the classical harmonic solution") {
  const double si = 2, s1 = 5, r0 = 0.5;
  const FieldSolution s = solve(CoatedCircles{si, s1, r0});
  // Annulus: a r + b / r with a + b = 1 and the interior amplitude d r.
  const double m = r0 * r0;
  const double d = 2 * s1 / ((s1 + si) + m * (s1 - si));
  const double b = d * m * (s1 - si) / (2 * s1);
  const double a = 1 - b;
  for (double r : {0.1, 0.3, 0.6, 0.8, 0.99}) {
    const double expected = r < r0 ? d * r : a * r + b / r;
    CHECK(eval_potential(s, r, 0) == Approx(expected).epsilon(1e-13));
  }
  const auto nf = nucleus_field(s);
  CHECK(nf.psi == 0);
  CHECK(nf.magnitude == Approx(d).epsilon(1e-13));
  CHECK(nf.magnitude == Approx(1.2903225806451613).epsilon(1e-13));
}

TEST_CASE("spiral nucleus field") {
  const FieldSolution s = solve(SpiralWithCore{1, {9, 1, pi / 4}, 0.5});
  CHECK(s.a_core == Approx(1.3819204105334766).epsilon(1e-13));
  CHECK(s.b_core == Approx(-0.8558764816735539).epsilon(1e-13));
  const auto nf = nucleus_field(s);
  CHECK(nf.psi_signed == Approx(-0.5545177444479565).epsilon(1e-13));
  CHECK(nf.magnitude == Approx(1.6254933321705487).epsilon(1e-13));

  const double beta = s.annulus->exponents.beta(0.5);
  CHECK(s.b_core / s.a_core == Approx(std::tan(beta)).epsilon(1e-13));
  CHECK(nucleus_field(solve(SpiralWithCore{1, {9, 1, 0}, 0.5})).psi == 0);
  CHECK(nucleus_field(solve(SpiralWithCore{1, {4, 4, 0.6}, 0.5})).psi == 0);
}

TEST_CASE("nucleus rotation agrees with the closed form modulo two pi") {
  testing::Draw draw(34);
  for (int i = 0; i < 300; ++i) {
    const double si = draw.sigma(), s1 = draw.sigma() * 20, s2 = draw.sigma(), phi = draw.angle();
    const double r0 = draw.uniform(1e-3, 0.95);
    const auto nf = nucleus_field(solve(SpiralWithCore{si, {s1, s2, phi}, r0}));
    const auto cf = closed_form::rotation_angle(si, s1, s2, phi, r0);
    CHECK(std::abs(std::remainder(nf.psi_signed - cf.upsilon_signed, 2 * pi)) <= 1e-10);
    CHECK(rel_diff(nf.magnitude, cf.magnitude) <= 1e-10);
  }
}

TEST_CASE("opposite field example") {
  const auto lam = laminate_eigen({1, 100, 0.5});
  const double phi0 = closed_form::optimal_phi(lam.sigma1, lam.sigma2);
  const auto nf = nucleus_field(solve(SpiralWithCore{1, {lam.sigma1, lam.sigma2, phi0}, 0.274}));
  CHECK(nf.psi_signed == Approx(-3.140752702622383).epsilon(1e-12));
  CHECK(std::abs(nf.psi - pi) <= 0.01);
}

TEST_CASE("annulus ratios equal tan beta") {
  testing::Draw draw(35);
  for (int g = 0; g < 20; ++g) {
    const SpiralWithCore a{draw.sigma(), {draw.sigma(), draw.sigma(), draw.angle()}, draw.radius()};
    const FieldSolution s = solve(a);
    const auto ex = s.annulus->exponents;
    for (int i = 0; i < 100; ++i) {
      const double r = a.r0 + (1 - a.r0) * (i + 0.5) / 100;
      const RadialState st = radial_state(s, r);
      const double beta = ex.beta(r);
      const double u = st.w.real(), v = st.w.imag();
      const double ju = st.j.real(), jv = st.j.imag();
      if (std::abs(std::cos(beta)) > 1e-12 && std::abs(u) > 1e-8) {
        CHECK(std::abs(v / u - std::tan(beta)) <= 1e-10 * std::max(1.0, std::abs(std::tan(beta))));
        CHECK(std::abs(jv / ju - std::tan(beta)) <= 1e-10 * std::max(1.0, std::abs(std::tan(beta))));
      }
    }
  }
}

TEST_CASE("chain solver reproduces the layered closed forms") {
  LayerChain hs{Dimension::Plane, {{IsotropicLayer{1}, 0.5}, {IsotropicLayer{5}, 1.0}}};
  CHECK(solve_piecewise_isotropic_chain(hs).sigma_star == Approx(25.0 / 7).epsilon(1e-14));

  LayerChain st{Dimension::Plane, {{IsotropicLayer{1}, 0.5}, {SpokeLayer{2, 1}, 1.0}}};
  CHECK(solve_piecewise_isotropic_chain(st).sigma_star == Approx(0.8).epsilon(1e-14));

  // 3D spoke shell: K_rr = sigma mu rho0^2 / rho^2.
  LayerChain hub{Dimension::Space,
                 {{IsotropicLayer{2}, 0.6}, {SpokeLayer{5 * 0.4 * 0.36, 2}, 1.0}}};
  CHECK(solve_piecewise_isotropic_chain(hub).sigma_star == Approx(0.72).epsilon(1e-13));

  CHECK_THROWS_AS(solve_piecewise_isotropic_chain(LayerChain{}), Error);
  LayerChain bad{Dimension::Plane, {{IsotropicLayer{1}, 0.7}, {IsotropicLayer{2}, 0.5}}};
  CHECK_THROWS_AS(solve_piecewise_isotropic_chain(bad), Error);
}

TEST_CASE("dissipation equals sigma star times the disk area") {
  testing::Draw draw(36);
  for (int i = 0; i < 90; ++i) {
    const Assemblage a = draw.assemblage(i % 9);  // the planar ones
    const FieldSolution s = solve(a);
    INFO(type_name(a));
    CHECK(rel_diff(dissipation(s), pi * s.sigma_star) <= 1e-8);
  }
}

TEST_CASE("star spokes carry twice the nucleus current density") {
  for (double r0 : {0.2, 0.5, 0.8})
    for (double sigma : {0.5, 3.0}) {
      const double mu = 0.5;
      const FieldSolution s = solve(Star{sigma, sigma, mu, r0});
      const double nucleus = sigma * std::hypot(s.a_core, s.b_core);
      // Homogenized radial flux just outside the core, spread over the
      // fraction mu of the circumference that is spoke material.
      const double spoke = eval_current(s, r0 + 1e-12, 0).j_r / mu;
      CHECK(spoke * spoke == Approx(4 * nucleus * nucleus).epsilon(1e-9));
    }
}

TEST_CASE("field at the centre") {
  const FieldSolution s = solve(CoatedCircles{2, 5, 0.5});
  CHECK(eval_potential(s, 0, 0.4) == 0);
  const auto j = eval_current(s, 0, 0);
  CHECK(j.j_r == Approx(2 * s.a_core).epsilon(1e-14));
  const FieldSolution b = solve(BasicSpiral{4, 1, 0.3});
  CHECK(std::isfinite(eval_potential(b, 0, 0.1)));
}
