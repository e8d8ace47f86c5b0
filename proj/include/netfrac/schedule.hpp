#pragma once

#include <concepts>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace netfrac {

/// alpha(t) = value.
struct ConstantSchedule {
  double value = 1.0;
  friend bool operator==(const ConstantSchedule&, const ConstantSchedule&) = default;
};

/// alpha(t) = base + amplitude sin(angular_frequency t).
struct SineSchedule {
  double base = 0.5;
  double amplitude = 0.4;
  double angular_frequency = 1.0;
  friend bool operator==(const SineSchedule&, const SineSchedule&) = default;
};

/// alpha(t) = 1 - exp(-rate t).
struct ExpSaturatingSchedule {
  double rate = 10.0;
  friend bool operator==(const ExpSaturatingSchedule&, const ExpSaturatingSchedule&) = default;
};

/// Linear ramp lo -> hi on every period, jumping back to lo at multiples of
/// the period.
struct SawtoothSchedule {
  double lo = 0.05;
  double hi = 0.75;
  double period = 1.0;
  friend bool operator==(const SawtoothSchedule&, const SawtoothSchedule&) = default;
};

/// Continuous lo -> hi -> lo zigzag; the peak sits at mid-period.
struct TriangularSchedule {
  double lo = 0.05;
  double hi = 0.75;
  double period = 1.0;
  friend bool operator==(const TriangularSchedule&, const TriangularSchedule&) = default;
};

/// Not-a-knot cubic spline through (times[k], values[k]); outside the knot
/// range the end polynomials are extended.
class SplineSchedule {
 public:
  SplineSchedule(std::vector<double> times, std::vector<double> values);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator()(double t) const;

  friend bool operator==(const SplineSchedule& a, const SplineSchedule& b) {
    return a.times_ == b.times_ && a.values_ == b.values_;
  }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  // Per-interval cubic a + b s + c s^2 + d s^3 with s = t - times_[k].
  std::vector<double> b_, c_, d_;
};

using ScheduleFamily = std::variant<ConstantSchedule, SineSchedule, ExpSaturatingSchedule,
                                    SawtoothSchedule, TriangularSchedule, SplineSchedule>;

/// Time-to-exponent map alpha: [0, inf) -> (0, 1]. Evaluation clamps the raw
/// family value into [kMinAlpha, 1].
class AlphaSchedule {
 public:
  static constexpr double kMinAlpha = 1e-6;

  struct Sample {
    double alpha;
    bool clamped;
  };

  template <class F>
    requires std::constructible_from<ScheduleFamily, F>
  AlphaSchedule(F family) : family_(std::move(family)) {}  // NOLINT(google-explicit-constructor)

  const ScheduleFamily& family() const noexcept { return family_; }

  /// Unclamped family value.
  double raw(double t) const;
  Sample sample(double t) const;
  double operator()(double t) const { return sample(t).alpha; }

  /// Period for sine, sawtooth, and triangular schedules.
  std::optional<double> period() const;
  /// Points in (a, b) where the schedule is not smooth.
  std::vector<double> breakpoints(double a, double b) const;

  friend bool operator==(const AlphaSchedule&, const AlphaSchedule&) = default;

 private:
  ScheduleFamily family_;
};

/// Parses `const:<c>`, `sin:<base>,<amp>,<freq>`, `expsat:<rate>`,
/// `saw:<lo>,<hi>,<T>`, `tri:<lo>,<hi>,<T>` or `spline:<t0>=<v0>;<t1>=<v1>;...`.
/// Throws ContractError for malformed text or parameters that leave the
/// family outside [0, 1] (checked analytically and on 1000 probe points).
AlphaSchedule parse_schedule(std::string_view text);

/// Inverse of parse_schedule using shortest round-trip number formatting.
std::string render_schedule(const AlphaSchedule& s);

}  // namespace netfrac
