#pragma once

#include <string>

#include "emt/field_solver.hpp"

namespace emt::svg {

/// Standalone SVG of one solved inclusion: equipotential lines, current
/// direction arrows on a polar sample grid, the material interfaces and,
/// for spiral materials, the eigendirection curves. Fixed 1000x1000 view
/// box covering |x| <= 1.5.
std::string field_plot(const field::FieldSolution& s);

}  // namespace emt::svg
