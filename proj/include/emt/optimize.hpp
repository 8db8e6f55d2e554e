#pragma once

// Numeric search over the closed-form rotation landscape, and parameter
// sweeps of any assemblage field.

#include <functional>
#include <string>
#include <vector>

#include "emt/geometry.hpp"

namespace emt::optimize {

struct GoldenResult {
  double x;
  double value;
  int iterations;
  bool unimodal;  // the pre-scan saw a single interior peak
};

/// Maximizes f on [lo, hi]: a 64-point scan brackets the best sample, then
/// golden-section search runs to an interval of `tol` or 200 iterations.
GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double tol = 1e-10);

struct RotationOptimum {
  double phi_hat;
  double upsilon_hat;
  bool flat;  // sigma1 == sigma2: no rotation at any angle
};

/// Maximizes |rotation| over the spiral angle on (0, pi/2).
RotationOptimum maximize_rotation_numeric(double sigma1, double sigma2, double r0);

struct FractionOptimum {
  double m1_hat;
  double phi_hat;
  double upsilon_hat;
  bool flat;  // k1 == k2
};

/// Maximizes the rotation of a two-phase laminate spiral over the volume
/// fraction m1, taking the optimal angle for each fraction.
FractionOptimum maximize_rotation_over_fractions(double k1, double k2, double r0);

enum class Observable { SigmaStar, Upsilon, Psi, Magnitude };

std::string_view to_string(Observable o);
Observable observable_from_string(std::string_view name);

struct SweepSpec {
  Assemblage geometry;
  std::string parameter;  // a field name of the geometry's JSON form
  double lo;
  double hi;
  int steps;
  Observable observable;
};

struct SweepTable {
  std::string parameter;
  std::string observable;
  std::vector<double> x;
  std::vector<double> y;
};

/// Evaluates the observable at `steps` equally spaced values of the
/// parameter. Throws InvalidParameterPath for an unknown field and
/// RangeViolatesInvariant for steps < 2, lo >= hi or any invalid step.
SweepTable sweep(const SweepSpec& spec);

/// Header "<parameter>,<observable>", then one row per step.
std::string to_csv(const SweepTable& table);

}  // namespace emt::optimize
