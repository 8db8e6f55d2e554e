#include <doctest.h>

#include <cmath>
#include <numbers>

#include "emt/closed_form.hpp"
#include "emt/optimize.hpp"
#include "support.hpp"

using namespace emt;
using namespace emt::optimize;
using doctest::Approx;
using testing::rel_diff;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("golden section finds an interior maximum") {
  const auto g = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0, 1);
  CHECK(g.x == Approx(0.3).epsilon(1e-9));
  CHECK(g.unimodal);
  CHECK(g.iterations <= 200);

  const auto edge = golden_section_max([](double x) { return x; }, 0, 2);
  CHECK(edge.x == Approx(2).epsilon(1e-9));

  const auto bumpy = golden_section_max([](double x) { return std::sin(20 * x); }, 0, 1);
  CHECK_FALSE(bumpy.unimodal);
}

TEST_CASE("rotation maximization over the angle") {
  auto o = maximize_rotation_numeric(4, 1, std::exp(-2.0));
  CHECK(std::abs(o.phi_hat - std::atan(2.0)) <= 1e-6);
  CHECK(o.upsilon_hat == Approx(1.5).epsilon(1e-12));
  CHECK_FALSE(o.flat);

  o = maximize_rotation_numeric(3, 3, 0.4);
  CHECK(o.flat);
  CHECK(o.upsilon_hat == 0);

  o = maximize_rotation_numeric(50.5, 1.9801980198019802, 0.274);
  CHECK(std::abs(o.upsilon_hat - pi) <= 0.01);

  CHECK_THROWS_AS(maximize_rotation_numeric(-1, 1, 0.5), Error);
  CHECK_THROWS_AS(maximize_rotation_numeric(1, 2, 1.5), Error);
}

TEST_CASE("rotation maximization over fractions") {
  auto o = maximize_rotation_over_fractions(1, 100, 0.274);
  CHECK(std::abs(o.m1_hat - 0.5) <= 1e-6);
  CHECK(std::abs(o.phi_hat - closed_form::optimal_phi(50.5, 1.9801980198019802)) <= 1e-6);
  CHECK(std::abs(o.upsilon_hat - pi) <= 0.01);

  o = maximize_rotation_over_fractions(2, 2, 0.4);
  CHECK(o.flat);
  CHECK(o.upsilon_hat == 0);

  o = maximize_rotation_over_fractions(1, 4, std::exp(-1.0));
  CHECK(std::abs(o.m1_hat - 0.5) <= 1e-6);
  CHECK(std::abs(o.phi_hat - std::atan(std::sqrt(2.5 / 1.6))) <= 1e-6);
  CHECK(o.upsilon_hat == Approx(0.225).epsilon(1e-12));
}

TEST_CASE("numeric optima match the closed forms over random draws") {
  testing::Draw draw(51);
  for (int i = 0; i < 100; ++i) {
    double k1 = draw.sigma(), k2 = draw.sigma();
    if (rel_diff(k1, k2) < 1e-2) k2 *= 2;
    const double r0 = draw.radius();
    const auto a = maximize_rotation_numeric(k1, k2, r0);
    CHECK(std::abs(a.phi_hat - closed_form::optimal_phi(k1, k2)) <= 1e-6);
    CHECK(rel_diff(a.upsilon_hat, closed_form::max_rotation(k1, k2, r0)) <= 1e-8);

    const auto b = maximize_rotation_over_fractions(k1, k2, r0);
    CHECK(std::abs(b.m1_hat - 0.5) <= 1e-6);
    CHECK(rel_diff(b.upsilon_hat, closed_form::max_rotation_laminate(k1, k2, r0).upsilon_max) <= 1e-8);
  }
}

TEST_CASE("sweep of coated circles") {
  SweepSpec spec{CoatedCircles{1, 5, 0.5}, "r0", 0.1, 0.9, 9, Observable::SigmaStar};
  const auto t = sweep(spec);
  REQUIRE(t.x.size() == 9);
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    CHECK(t.x[i] == Approx(0.1 + 0.1 * i).epsilon(1e-14));
    CHECK(t.y[i] == Approx(closed_form::hs_coated_circles(1, 5, t.x[i])).epsilon(1e-15));
    if (i > 0) CHECK(t.x[i] > t.x[i - 1]);
  }
  const std::string csv = to_csv(t);
  CHECK(csv.rfind("r0,sigma_star\n0.1,", 0) == 0);
  CHECK(to_csv(sweep(spec)) == csv);
}

TEST_CASE("sweep of the rotation peaks at the optimal angle") {
  SweepSpec spec{SpiralWithCore{1, {9, 1, 0.1}, 0.3}, "phi", 0.01, 1.55, 309, Observable::Upsilon};
  const auto t = sweep(spec);
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.y.size(); ++i)
    if (t.y[i] > t.y[best]) best = i;
  const double step = (1.55 - 0.01) / 308;
  CHECK(std::abs(t.x[best] - closed_form::optimal_phi(9, 1)) <= step);
}

TEST_CASE("sweep errors") {
  SweepSpec spec{CoatedCircles{1, 5, 0.5}, "r0", 0.1, 0.9, 1, Observable::SigmaStar};
  CHECK_THROWS_AS(sweep(spec), Error);
  spec.steps = 5;
  spec.parameter = "r1";
  try {
    sweep(spec);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParameterPath);
  }
  spec.parameter = "r0";
  spec.hi = 1.5;
  try {
    sweep(spec);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RangeViolatesInvariant);
  }
  spec.lo = 0.9;
  spec.hi = 0.1;
  CHECK_THROWS_AS(sweep(spec), Error);
}

TEST_CASE("sweep of a nucleus observable on a non-spiral geometry") {
  SweepSpec spec{CoatedCircles{2, 5, 0.5}, "sigma_i", 1, 3, 3, Observable::Magnitude};
  const auto t = sweep(spec);
  CHECK(t.y[0] > t.y[2]);
  spec.observable = Observable::Psi;
  for (double y : sweep(spec).y) CHECK(y == 0);
}

TEST_CASE("observable names") {
  CHECK(observable_from_string("psi") == Observable::Psi);
  CHECK(to_string(Observable::SigmaStar) == "sigma_star");
  CHECK_THROWS_AS(observable_from_string("energy"), Error);
}
