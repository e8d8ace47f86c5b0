#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "netfrac/dynamics.hpp"
#include "working_system.hpp"

namespace netfrac {

namespace {

constexpr int kMaxOrder = 5;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

// Klopfenstein-Shampine NDF coefficients; order 5 is plain BDF.
constexpr std::array<double, kMaxOrder + 1> kKappa = {0.0, -0.1850, -1.0 / 9, -0.0823, -0.0415, 0.0};

struct Coefficients {
  std::array<double, kMaxOrder + 2> gamma{};
  std::array<double, kMaxOrder + 2> alpha{};
  std::array<double, kMaxOrder + 2> error_const{};

  Coefficients() {
    for (int k = 1; k <= kMaxOrder + 1; ++k) gamma[k] = gamma[k - 1] + 1.0 / k;
    for (int k = 0; k <= kMaxOrder + 1; ++k) {
      const double kappa = k <= kMaxOrder ? kKappa[k] : 0.0;
      alpha[k] = (1.0 - kappa) * gamma[k];
      error_const[k] = kappa * gamma[k] + 1.0 / (k + 1);
    }
  }
};

// Maps backward differences at step h to those at step factor * h.
Eigen::MatrixXd difference_rescaling(int order, double factor) {
  auto r = [order](double f) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(order + 1, order + 1);
    m.row(0).setOnes();
    for (int i = 1; i <= order; ++i) {
      for (int j = 1; j <= order; ++j) m(i, j) = (i - 1 - f * j) / static_cast<double>(i);
    }
    for (int i = 1; i <= order; ++i) m.row(i) = m.row(i).cwiseProduct(m.row(i - 1));
    return m;
  };
  return r(factor) * r(1.0);
}

template <class Vector>
void rescale_differences(std::vector<Vector>& d, int order, double factor) {
  const Eigen::MatrixXd ru = difference_rescaling(order, factor);
  std::vector<Vector> updated(order + 1, Vector::Zero(d[0].size()));
  for (int j = 0; j <= order; ++j) {
    for (int k = 0; k <= order; ++k) {
      if (ru(k, j) != 0.0) updated[j] += ru(k, j) * d[k];
    }
  }
  for (int j = 0; j <= order; ++j) d[j] = std::move(updated[j]);
}

template <class Vector>
double scaled_norm(const Vector& v, const Vector& y, double rtol, double atol) {
  return detail::mixed_error_norm(v, y, y, rtol, atol);
}

template <class Scalar>
Trajectory run(const DynamicsProblem& p, const IntegratorConfig& c) {
  using System = detail::WorkingSystem<Scalar>;
  using Vector = typename System::Vector;
  static const Coefficients coef;

  Trajectory traj;
  traj.model = p.model;
  System sys(p, traj.stats);
  const double horizon = p.horizon;
  const auto times = sample_times(horizon, c.samples);
  const double max_step = c.max_step.value_or(horizon / 10.0);
  const double min_step = 1e-14 * horizon;
  double h = std::min(c.initial_step.value_or(std::min(1e-3, horizon / 100.0)), max_step);

  Vector y = sys.enter(p.initial);
  traj.times.push_back(0.0);
  traj.states.push_back(p.initial);
  std::size_t next_sample = 1;
  const Eigen::Index n = y.size();

  std::vector<Vector> d(kMaxOrder + 3, Vector::Zero(n));
  Vector f(n);
  sys.derivative(0.0, y, f);
  d[0] = y;
  d[1] = h * f;
  int order = 1;
  int equal_steps = 0;
  double t = 0.0;

  Vector y_predict(n), psi(n), correction(n), y_new(n);
  while (t < horizon) {
    if (h > max_step) {
      rescale_differences(d, order, max_step / h);
      h = max_step;
      equal_steps = 0;
    }

    double t_new = 0.0;
    Vector scale_ref;
    double error_norm = 0.0;
    while (true) {
      if (h < min_step) {
        std::ostringstream msg;
        msg << "BDF step size " << h << " fell below " << min_step << " at t = " << t
            << " (order " << order << ")";
        throw NumericError(msg.str());
      }
      t_new = t + h;
      if (t_new >= horizon) {
        t_new = horizon;
        rescale_differences(d, order, (horizon - t) / h);
        h = horizon - t;
        equal_steps = 0;
      }

      y_predict = d[0];
      for (int k = 1; k <= order; ++k) y_predict += d[k];
      psi.setZero();
      for (int k = 1; k <= order; ++k) psi += coef.gamma[k] * d[k];
      psi /= coef.alpha[order];
      const double step_coef = h / coef.alpha[order];

      // The problem is linear, so the corrector converges in one solve.
      sys.factor(t_new, step_coef);
      sys.derivative(t_new, y_predict, f);
      correction = sys.solve(step_coef * f - psi);
      y_new = y_predict + correction;

      error_norm = scaled_norm(Vector(coef.error_const[order] * correction), y_new, c.rtol, c.atol);
      if (!std::isfinite(error_norm)) {
        throw NumericError("non-finite BDF error estimate at t = " + std::to_string(t));
      }
      if (error_norm <= 1.0) break;

      ++traj.stats.rejected_steps;
      const double factor =
          std::max(kMinFactor, kSafety * std::pow(error_norm, -1.0 / (order + 1)));
      rescale_differences(d, order, factor);
      h *= factor;
      equal_steps = 0;
    }

    ++traj.stats.accepted_steps;
    ++equal_steps;

    d[order + 2] = correction - d[order + 1];
    d[order + 1] = correction;
    for (int i = order; i >= 0; --i) d[i] += d[i + 1];

    // Interpolating polynomial through the last order + 1 solution values.
    while (next_sample < times.size() && times[next_sample] <= t_new) {
      const double ts = times[next_sample];
      Vector ys;
      if (ts == t_new) {
        ys = y_new;
      } else {
        ys = d[0];
        double prod = 1.0;
        for (int j = 0; j < order; ++j) {
          prod *= (ts - (t_new - h * j)) / (h * (1 + j));
          ys += prod * d[j + 1];
        }
      }
      traj.times.push_back(ts);
      traj.states.push_back(sys.leave(ys));
      ++next_sample;
    }

    t = t_new;
    y = y_new;
    if (t >= horizon) break;
    if (equal_steps < order + 1) continue;

    constexpr double inf = std::numeric_limits<double>::infinity();
    const double err_m =
        order > 1 ? scaled_norm(Vector(coef.error_const[order - 1] * d[order]), y, c.rtol, c.atol)
                  : inf;
    const double err_p =
        order < kMaxOrder
            ? scaled_norm(Vector(coef.error_const[order + 1] * d[order + 2]), y, c.rtol, c.atol)
            : inf;
    const std::array<double, 3> norms = {err_m, error_norm, err_p};
    std::array<double, 3> factors{};
    for (int k = 0; k < 3; ++k) {
      factors[k] = norms[k] == 0.0 ? inf : std::pow(norms[k], -1.0 / (order + k));
    }
    const int best = static_cast<int>(std::max_element(factors.begin(), factors.end()) - factors.begin());
    order += best - 1;
    const double factor = std::min(kMaxFactor, kSafety * factors[best]);
    rescale_differences(d, order, factor);
    h *= factor;
    equal_steps = 0;
  }
  return traj;
}

}  // namespace

Trajectory integrate_bdf(const DynamicsProblem& p, const IntegratorConfig& c) {
  p.validate();
  c.validate();
  if (p.model == Model::heat) return run<double>(p, c);
  return run<std::complex<double>>(p, c);
}

}  // namespace netfrac
