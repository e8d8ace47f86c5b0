#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace netfrac {

struct QuadratureOptions {
  double absolute_tolerance = 1e-10;
  std::size_t max_subintervals = std::size_t{1} << 20;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subintervals = 0;
};

/// Adaptive Simpson rule with Richardson correction on [a, b]. Points of
/// `breakpoints` inside (a, b) are forced as interval endpoints, so
/// integrands with jumps there converge quickly. Throws NumericError naming
/// the offending interval when the subinterval cap is hit.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints = {},
                                  const QuadratureOptions& options = {});

}  // namespace netfrac
