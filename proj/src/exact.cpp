#include <cmath>
#include <sstream>

#include "netfrac/dynamics.hpp"
#include "netfrac/quadrature.hpp"

namespace netfrac {

namespace {

double integrate_power(double lambda, const AlphaSchedule& s, double a, double b,
                       double tolerance) {
  if (lambda <= kZeroEigenvalueClamp) return 0.0;
  if (lambda == 1.0) return b - a;
  const auto breaks = s.breakpoints(a, b);
  QuadratureOptions options;
  options.absolute_tolerance = tolerance;
  try {
    return adaptive_simpson(
               [&](double t) { return fractional_power_scalar(lambda, s(t)); }, a, b, breaks,
               options)
        .value;
  } catch (const NumericError& e) {
    std::ostringstream msg;
    msg << "integral of lambda^alpha(t) for eigenvalue " << lambda << " over [" << a << ", " << b
        << "]: " << e.what();
    throw NumericError(msg.str());
  }
}

}  // namespace

Eigen::VectorXd spectral_antiderivative(const SpectralDecomposition& d, const AlphaSchedule& s,
                                        double a, double b) {
  Eigen::VectorXd out(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    out(i) = integrate_power(d.eigenvalues(i), s, a, b, QuadratureOptions{}.absolute_tolerance);
  }
  return out;
}

Trajectory exact_solution(const DynamicsProblem& p, std::span<const double> times) {
  p.validate();
  if (!p.generator.has_spectrum()) {
    throw ContractError("exact solution needs a symmetric fractional generator");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1])) {
      throw ContractError("sample times must be nonnegative and nondecreasing");
    }
  }
  const auto& d = p.generator.spectrum();
  const Eigen::Index n = d.size();
  const bool heat = p.model == Model::heat;
  const double span = times.empty() ? 0.0 : std::max(times.back(), 1e-300);
  const double tolerance = QuadratureOptions{}.absolute_tolerance;

  Trajectory traj;
  traj.model = p.model;
  const Eigen::VectorXcd q0 = d.basis.transpose() * p.initial;
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(n);
  double t = 0.0;
  for (double target : times) {
    if (target > t) {
      const double share = tolerance * (target - t) / span;
      for (Eigen::Index i = 0; i < n; ++i) {
        integral(i) += integrate_power(d.eigenvalues(i), p.schedule, t, target, share);
      }
      t = target;
    }
    Eigen::VectorXcd factor(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      factor(i) = heat ? std::complex<double>(std::exp(-integral(i)))
                       : std::polar(1.0, -integral(i));
    }
    Eigen::VectorXcd state = d.basis * factor.cwiseProduct(q0);
    if (heat) state = state.real().cast<std::complex<double>>();
    traj.times.push_back(target);
    traj.states.push_back(std::move(state));
  }
  return traj;
}

}  // namespace netfrac
