#pragma once
// Shared helpers for the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <random>

#include "emt/geometry.hpp"

namespace emt::testing {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

class Draw {
 public:
  explicit Draw(unsigned seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  // Conductivities spread over two decades.
  double sigma() { return std::exp(uniform(std::log(0.1), std::log(10.0))); }
  double radius() { return uniform(0.05, 0.95); }
  double angle() { return uniform(-1.5, 1.5); }
  double fraction() { return uniform(0.05, 1.0); }

  Assemblage assemblage(int kind) {
    switch (kind) {
      case 0: return SpiralWithCore{sigma(), {sigma(), sigma(), angle()}, radius()};
      case 1: return CoatedCircles{sigma(), sigma(), radius()};
      case 2: return Schulgasser{sigma(), sigma()};
      case 3: return OrangeWithCore{sigma(), sigma(), sigma(), radius()};
      case 4: return OrangeWithShell{sigma(), sigma(), sigma(), radius()};
      case 5: return BasicSpiral{sigma(), sigma(), angle()};
      case 6: return SpiralWithShell{sigma(), {sigma(), sigma(), angle()}, radius()};
      case 7: {
        const double a = radius();
        const double b = radius();
        if (a == b) return assemblage(kind);
        return Wheel{sigma(), sigma(), sigma(), std::min(a, b), std::max(a, b)};
      }
      case 8: return Star{sigma(), sigma(), fraction(), radius()};
      case 9: return Hub{sigma(), sigma(), fraction(), radius()};
      default: return SpikyBall{sigma(), sigma(), fraction(), radius(), uniform(1.2, 4.0)};
    }
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline constexpr int kGeometryCount = 11;

}  // namespace emt::testing
