// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "emt/closed_form.hpp"
#include "emt/field_solver.hpp"
#include "emt/optimize.hpp"
#include "emt/oracle.hpp"
#include "emt/serialization.hpp"
#include "support.hpp"

using namespace emt;
using testing::rel_diff;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// 1. Opposite field for the k1 = 1, k2 = 100 equal-fraction laminate.
Outcome opposite_field() {
  const double r0 = closed_form::radius_for_rotation(1, 100, pi);
  const auto e = laminate_eigen({1, 100, 0.5});
  const double phi0 = closed_form::optimal_phi(e.sigma1, e.sigma2);
  const auto rot = closed_form::rotation_angle(1, e.sigma1, e.sigma2, phi0, 0.274);
  const auto nf = field::nucleus_field(field::solve(SpiralWithCore{1, {e.sigma1, e.sigma2, phi0}, 0.274}));
  const double closed_gap = std::abs(rot.psi - pi);
  const double field_gap = std::abs(std::remainder(nf.psi_signed - pi, 2 * pi));
  const bool pass = std::abs(r0 - 0.274) <= 1e-3 && closed_gap <= 0.01 && field_gap <= 0.01;
  return {pass, "r0 = " + io::format_double(r0) + ", |psi - pi| = " + fmt(closed_gap) +
                    " (closed form), " + fmt(field_gap) + " (field solve)"};
}

// 2. Reduction web.
Outcome reduction_web() {
  testing::Draw draw(2);
  double worst_exact = 0, worst_core = 0, worst_wheel = 0;
  for (int i = 0; i < 1000; ++i) {
    const double si = draw.sigma(), s1 = draw.sigma(), s2 = draw.sigma();
    const double phi = draw.angle(), r0 = draw.radius(), mu = draw.fraction();
    worst_exact = std::max(
        {worst_exact,
         rel_diff(closed_form::spiral_core_sigma_star(si, s1, s1, phi, r0),
                  closed_form::hs_coated_circles(si, s1, r0)),
         rel_diff(closed_form::spiral_core_sigma_star(si, s1, s2, 0, r0),
                  closed_form::orange_with_core(si, s1, s2, r0)),
         rel_diff(closed_form::basic_spiral(s1, s2, phi), closed_form::schulgasser(s1, s2)),
         rel_diff(closed_form::spiky_ball(si, s2, mu, r0, 2), closed_form::hub(si, s2, mu, r0))});
    // The core term decays like r0^(2 alpha), so the vanishing-core limit is
    // taken where that term has dropped to 1e-12.
    const double alpha = field::mode_exponents(spiral_tensor({s1, s2, phi})).alpha;
    const double tiny = std::min(1e-12, std::pow(1e-12, 0.5 / alpha));
    worst_core = std::max(worst_core, rel_diff(closed_form::spiral_core_sigma_star(si, s1, s2, phi, tiny),
                                               closed_form::schulgasser(s1, s2)));
    worst_wheel = std::max(worst_wheel, rel_diff(closed_form::wheel(si, s1, s2, r0, 1 - 1e-10),
                                                 closed_form::star(si, s1, r0)));
  }
  const bool pass = worst_exact <= 1e-12 && worst_core <= 1e-6 && worst_wheel <= 1e-8;
  return {pass, "identities " + fmt(worst_exact) + ", r0->0 " + fmt(worst_core) + ", r1->1 " +
                    fmt(worst_wheel)};
}

// 3. Radial oracle against every closed form.
Outcome oracle_agreement() {
  testing::Draw draw(3);
  double worst = 0, worst_imag = 0;
  std::string worst_type;
  int runs = 0;
  for (int kind = 0; kind < testing::kGeometryCount; ++kind)
    for (int i = 0; i < 100; ++i) {
      const Assemblage a = draw.assemblage(kind);
      const auto method = dimension(a) == 3 ? oracle::Method::Ode3d : oracle::Method::Ode;
      const auto r = oracle::verify(a, method, 1e-10);
      if (r.rel_err > worst) {
        worst = r.rel_err;
        worst_type = std::string(type_name(a));
      }
      if (std::holds_alternative<SpiralWithCore>(a) || std::holds_alternative<BasicSpiral>(a) ||
          std::holds_alternative<SpiralWithShell>(a))
        worst_imag = std::max(worst_imag, r.imag_residual);
      ++runs;
    }
  return {worst <= 1e-6 && worst_imag <= 1e-8,
          std::to_string(runs) + " draws, max rel_err " + fmt(worst) + " (" + worst_type +
              "), spiral imag residual " + fmt(worst_imag)};
}

// 4. Star and hub fractions; hub is not the coated-spheres value.
Outcome star_and_hub() {
  double worst_star = 0, worst_hub = 0;
  for (int i = 1; i <= 9; ++i) {
    const double m = 0.1 * i;
    for (double sigma : {0.5, 1.0, 3.0}) {
      worst_star = std::max(worst_star, rel_diff(closed_form::star_fraction(sigma, 0.5, m).k,
                                                 sigma * m / (2 - m)));
      worst_hub = std::max(worst_hub, rel_diff(closed_form::hub(sigma, sigma, 1.0 / 3, std::sqrt(m)),
                                               sigma * m / (3 - 2 * std::sqrt(m))));
    }
  }
  // Coated spheres at conducting fraction 1/4: conducting shell around an
  // insulating core.
  const double m = 0.25;
  oracle::RadialProfile p;
  p.dim = field::Dimension::Space;
  p.core_sigma = 0.0;
  p.r_core = std::cbrt(1 - m);
  p.segments.push_back({p.r_core, 1.0, [](double) { return PolarTensor{1, 0, 1}; }});
  const double coated = oracle::ode_effective_conductivity_3d(p, 1e-10).sigma_star;
  const double hub = closed_form::hub(1, 1, 1.0 / 3, std::sqrt(m));
  const double gap = std::abs(coated - hub) / hub;
  return {worst_star <= 1e-12 && worst_hub <= 1e-12 && gap > 0.05,
          "star " + fmt(worst_star) + ", hub " + fmt(worst_hub) + ", hub " + io::format_double(hub) +
              " vs coated spheres " + io::format_double(coated) + " (" + fmt(100 * gap) + "% apart)"};
}

// 5. Fitted-mesh cloaking check with refinement and a negative control.
Outcome fd_cloaking() {
  const Assemblage a = CoatedCircles{1, 5, 0.5};
  const std::array<int, 3> grids{128, 256, 512};
  const auto rows = oracle::fd_convergence_study(a, grids);
  const double order = oracle::observed_order(rows);
  oracle::FdOptions wrong;
  wrong.grid_n = 512;
  wrong.sigma_star_scale = 1.5;
  wrong.estimate_sigma = false;
  const double control = oracle::fd_solve(a, wrong).farfield_norm;
  const double fine = rows.back().farfield_norm;
  std::string detail = "farfield";
  for (const auto& r : rows) detail += " " + std::to_string(r.grid_n) + ":" + fmt(r.farfield_norm);
  detail += ", order " + fmt(order) + ", x1.5 control " + fmt(control);
  return {fine <= 2e-2 && order >= 1.8 && control >= 5e-2, detail};
}

// 6. Numeric optimizers against the closed-form optima.
Outcome optimizer_agreement() {
  testing::Draw draw(6);
  double worst_phi = 0, worst_m = 0;
  for (int i = 0; i < 100; ++i) {
    const double k1 = draw.sigma();
    double k2 = draw.sigma();
    if (rel_diff(k1, k2) < 1e-2) k2 *= 2;
    const double r0 = draw.radius();
    const auto a = optimize::maximize_rotation_numeric(k1, k2, r0);
    worst_phi = std::max(worst_phi, std::abs(a.phi_hat - closed_form::optimal_phi(k1, k2)));
    const auto b = optimize::maximize_rotation_over_fractions(k1, k2, r0);
    worst_m = std::max(worst_m, std::abs(b.m1_hat - 0.5));
  }
  return {worst_phi <= 1e-6 && worst_m <= 1e-6,
          "max |phi - phi0| " + fmt(worst_phi) + ", max |m1 - 1/2| " + fmt(worst_m)};
}

// 7. Ratio identity, interface jumps and the exterior potential.
Outcome field_identities() {
  testing::Draw draw(7);
  double worst_ratio = 0, worst_jump = 0;
  bool exterior_exact = true;
  for (int g = 0; g < 50; ++g) {
    const SpiralWithCore a{draw.sigma(), {draw.sigma(), draw.sigma(), draw.angle()}, draw.radius()};
    const auto s = field::solve(a);
    const auto ex = s.annulus->exponents;
    for (int i = 0; i < 100; ++i) {
      const double r = a.r0 + (1 - a.r0) * (i + 0.5) / 100;
      const auto st = field::radial_state(s, r);
      const double beta = ex.beta(r);
      if (std::abs(std::cos(beta)) < 1e-12 || std::abs(st.w.real()) <= 1e-8) continue;
      const double t = std::tan(beta);
      worst_ratio = std::max({worst_ratio, std::abs(st.w.imag() / st.w.real() - t),
                              std::abs(st.j.imag() / st.j.real() - t)});
    }
    worst_jump = std::max(worst_jump, field::max_jump_residual(s));
    for (int k = 0; k < 50; ++k) {
      const double r = draw.uniform(1.0 + 1e-12, 10.0), th = draw.uniform(-pi, pi);
      exterior_exact = exterior_exact && field::eval_potential(s, r, th) == r * std::cos(th);
    }
  }
  return {worst_ratio <= 1e-10 && worst_jump <= 1e-10 && exterior_exact,
          "ratio " + fmt(worst_ratio) + ", jumps " + fmt(worst_jump) + ", exterior " +
              (exterior_exact ? "exact" : "NOT exact")};
}

// 8. Series structure 1/k = a/sigma + b/sigma_i.
Outcome harmonic_structure() {
  const std::array<Assemblage, 3> shapes{Star{1, 1, 0.45, 0.55}, Hub{1, 1, 0.3, 0.6},
                                         SpikyBall{1, 1, 0.6, 0.4, 3}};
  double worst = 0;
  for (const auto& shape : shapes) {
    const auto hc = closed_form::harmonic_decomposition(shape);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const double s = std::pow(10.0, -1 + 0.5 * i), si = std::pow(10.0, -1 + 0.5 * j);
        Assemblage a = shape;
        for (auto& [name, v] : io::fields(a)) {
          if (name == "sigma") *v = s;
          if (name == "sigma_i") *v = si;
        }
        const double k = closed_form::effective_conductivity(a).sigma_star;
        worst = std::max(worst, rel_diff(1.0 / (hc.a / s + hc.b / si), k));
      }
  }
  return {worst <= 1e-12, "max rel deviation " + fmt(worst) + " over 3 x 25 points"};
}

}  // namespace

int main() {
  const std::array<std::pair<const char*, std::function<Outcome()>>, 8> criteria{{
      {"opposite-field radius", opposite_field},
      {"reduction web", reduction_web},
      {"radial oracle agreement", oracle_agreement},
      {"star and hub fractions", star_and_hub},
      {"fd cloaking convergence", fd_cloaking},
      {"optimizer agreement", optimizer_agreement},
      {"field identities", field_identities},
      {"harmonic-mean structure", harmonic_structure},
  }};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
