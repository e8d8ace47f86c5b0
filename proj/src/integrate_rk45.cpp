#include <algorithm>
#include <cmath>
#include <sstream>

#include "netfrac/dynamics.hpp"
#include "working_system.hpp"

namespace netfrac {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// Fifth-order minus embedded fourth-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Quartic continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafety = 0.9;
constexpr double kMinShrink = 0.2;
constexpr double kMaxGrowth = 10.0;
constexpr double kBeta = 0.04;  // PI controller memory
constexpr double kExpo = 0.2 - 0.75 * kBeta;

template <class Scalar>
Trajectory run(const DynamicsProblem& p, const IntegratorConfig& c) {
  using System = detail::WorkingSystem<Scalar>;
  using Vector = typename System::Vector;

  Trajectory traj;
  traj.model = p.model;
  System sys(p, traj.stats);
  const double horizon = p.horizon;
  const auto times = sample_times(horizon, c.samples);
  const double max_step = c.max_step.value_or(horizon / 10.0);
  double h = std::min(c.initial_step.value_or(std::min(1e-3, horizon / 100.0)), max_step);
  const double min_step = 1e-14 * horizon;

  Vector y = sys.enter(p.initial);
  traj.times.push_back(0.0);
  traj.states.push_back(p.initial);
  std::size_t next_sample = 1;

  const Eigen::Index n = y.size();
  Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), stage(n), y_new(n), err(n);
  sys.derivative(0.0, y, k1);

  double t = 0.0;
  double err_old = 1e-4;
  bool last_rejected = false;
  while (t < horizon) {
    if (h < min_step) {
      std::ostringstream msg;
      msg << "step size " << h << " underflowed at t = " << t << "; the problem may be stiff";
      throw StiffnessError(msg.str(), std::move(traj));
    }
    const bool final_step = t + h >= horizon;
    if (final_step) h = horizon - t;

    stage = y + h * a21 * k1;
    sys.derivative(t + c2 * h, stage, k2);
    stage = y + h * (a31 * k1 + a32 * k2);
    sys.derivative(t + c3 * h, stage, k3);
    stage = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    sys.derivative(t + c4 * h, stage, k4);
    stage = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    sys.derivative(t + c5 * h, stage, k5);
    stage = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const double t_new = final_step ? horizon : t + h;
    sys.derivative(t_new, stage, k6);
    y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    sys.derivative(t_new, y_new, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err_norm = detail::mixed_error_norm(err, y, y_new, c.rtol, c.atol);
    if (!std::isfinite(err_norm)) {
      throw NumericError("non-finite error estimate at t = " + std::to_string(t));
    }
    if (err_norm > 1.0) {
      ++traj.stats.rejected_steps;
      h *= std::max(kMinShrink, kSafety * std::pow(err_norm, -kExpo));
      last_rejected = true;
      continue;
    }

    ++traj.stats.accepted_steps;
    // Dense output for every sample inside (t, t_new].
    if (next_sample < times.size() && times[next_sample] <= t_new) {
      const Vector diff = y_new - y;
      const Vector bspl = h * k1 - diff;
      const Vector r4 = diff - h * k7 - bspl;
      const Vector r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      while (next_sample < times.size() && times[next_sample] <= t_new) {
        const double ts = times[next_sample];
        Vector ys;
        if (ts == t_new) {
          ys = y_new;
        } else {
          const double th = (ts - t) / h;
          const double th1 = 1.0 - th;
          ys = y + th * (diff + th1 * (bspl + th * (r4 + th1 * r5)));
        }
        traj.times.push_back(ts);
        traj.states.push_back(sys.leave(ys));
        ++next_sample;
      }
    }

    const double e = std::max(err_norm, 1e-10);
    double factor = kSafety * std::pow(e, -kExpo) * std::pow(err_old, kBeta);
    factor = std::clamp(factor, kMinShrink, kMaxGrowth);
    if (last_rejected) factor = std::min(factor, 1.0);
    err_old = std::max(err_norm, 1e-4);
    last_rejected = false;

    t = t_new;
    y = y_new;
    k1 = k7;
    h = std::min(h * factor, max_step);
  }
  return traj;
}

}  // namespace

Trajectory integrate_rk45(const DynamicsProblem& p, const IntegratorConfig& c) {
  p.validate();
  c.validate();
  if (p.model == Model::heat) return run<double>(p, c);
  return run<std::complex<double>>(p, c);
}

}  // namespace netfrac
