#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "netfrac/dynamics.hpp"
#include "netfrac/graph.hpp"

namespace netfrac {

double antiderivative_commutator_residual(const SpectralDecomposition& d, const AlphaSchedule& s,
                                          double t) {
  const Eigen::VectorXd integral = spectral_antiderivative(d, s, 0.0, t);
  const Eigen::MatrixXd a = spectral_matrix(d, integral).values();
  const Eigen::MatrixXd l = fractional_power_sym(d, s(t)).values();
  return (l * a - a * l).cwiseAbs().maxCoeff();
}

Eigen::VectorXd steady_state(const Graph& g) {
  const auto report = connectivity(g);
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (!g.directed()) {
    if (!report.connected) throw ContractError("steady state needs a connected graph");
    return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  }
  if (!report.strongly_connected) {
    throw ContractError("steady state needs a strongly connected digraph");
  }
  const DenseMatrix lt(directed_laplacians(g).out.values().transpose(), Symmetry::general);
  const auto f = triangular_factorization(lt);
  if (f.zero_count != 1) {
    throw NumericError("out-Laplacian has a null space of dimension " +
                       std::to_string(f.zero_count));
  }
  const Eigen::VectorXcd v = f.unitary.col(0);
  const std::complex<double> total = v.sum();
  if (std::abs(total) < 1e-12) throw NumericError("left null vector sums to zero");
  const Eigen::VectorXcd scaled = v / total;
  if (scaled.imag().cwiseAbs().maxCoeff() > 1e-8) {
    throw NumericError("left null vector is not real");
  }
  return scaled.real();
}

std::vector<std::complex<double>> floquet_exponents(const Generator& g, const AlphaSchedule& s,
                                                    std::optional<double> period) {
  const auto span = period ? period : s.period();
  if (!span) throw ContractError("Floquet exponents need a periodic schedule or a period");
  if (!(*span > 0.0) || !std::isfinite(*span)) throw ContractError("period must be positive");
  const double horizon = *span;

  std::vector<std::complex<double>> multipliers;
  if (g.has_spectrum()) {
    const auto& d = g.spectrum();
    const Eigen::VectorXd integral = spectral_antiderivative(d, s, 0.0, horizon);
    const Eigen::VectorXd decay = (-integral).array().exp();
    const auto monodromy = sym_eig(spectral_matrix(d, decay));
    for (double mu : monodromy.eigenvalues) multipliers.emplace_back(mu);
  } else {
    const Eigen::Index n = g.size();
    Eigen::MatrixXd monodromy(n, n);
    IntegratorConfig config{.method = Method::rk45, .rtol = 1e-11, .atol = 1e-13};
    config.samples = 2;
    for (Eigen::Index k = 0; k < n; ++k) {
      DynamicsProblem p{.model = Model::heat,
                        .generator = g,
                        .schedule = s,
                        .initial = Eigen::VectorXcd::Unit(n, k),
                        .horizon = horizon};
      monodromy.row(k) = integrate_rk45(p, config).states.back().real().transpose();
    }
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(monodromy.cast<std::complex<double>>());
    if (schur.info() != Eigen::Success) throw NumericError("monodromy Schur form did not converge");
    for (Eigen::Index i = 0; i < n; ++i) multipliers.push_back(schur.matrixT()(i, i));
  }

  std::vector<std::complex<double>> exponents;
  for (const auto& mu : multipliers) {
    if (std::abs(mu) <= std::numeric_limits<double>::min()) {
      throw NumericError("monodromy matrix has a zero eigenvalue");
    }
    std::complex<double> e = std::log(mu) / horizon;
    if (mu.imag() == 0.0 && mu.real() > 0.0) e = std::log(mu.real()) / horizon;
    exponents.push_back(e);
  }
  std::sort(exponents.begin(), exponents.end(),
            [](const auto& a, const auto& b) { return a.real() < b.real(); });
  return exponents;
}

DecayReport decay_envelope(const Trajectory& traj, const Eigen::VectorXd& reference,
                           const DecayOptions& options) {
  if (traj.model != Model::heat) throw ContractError("decay envelope is defined for heat flows");
  if (traj.size() == 0) throw ContractError("empty trajectory");
  if (traj.states.front().size() != reference.size()) {
    throw ContractError("reference size does not match the trajectory");
  }
  auto error_at = [&](std::size_t k) { return (traj.states[k].real() - reference).norm(); };
  const double e0 = error_at(0);
  if (!(e0 > 0.0)) throw ContractError("initial state already equals the reference");

  const double start = traj.times.front() + options.transient_fraction *
                                                (traj.times.back() - traj.times.front());
  std::vector<double> ts, logs;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.times[k] < start) continue;
    const double e = error_at(k);
    if (e <= options.noise_floor) continue;
    ts.push_back(traj.times[k]);
    logs.push_back(std::log(e));
  }
  if (ts.size() < 10) {
    throw ContractError("decay fit needs at least 10 samples past the transient, got " +
                        std::to_string(ts.size()));
  }

  const double m = static_cast<double>(ts.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    st += ts[k];
    sy += logs[k];
  }
  const double tbar = st / m, ybar = sy / m;
  double stt = 0.0, sty = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - tbar) * (ts[k] - tbar);
    sty += (ts[k] - tbar) * (logs[k] - ybar);
  }
  if (!(stt > 0.0)) throw ContractError("decay fit needs distinct sample times");
  const double slope = sty / stt;
  const double intercept = ybar - slope * tbar;

  DecayReport report;
  report.eta = -slope;
  report.samples_used = ts.size();
  double sq = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double r = logs[k] - (intercept + slope * ts[k]);
    sq += r * r;
    report.K = std::max(report.K, std::exp(logs[k] + report.eta * ts[k]) / e0);
  }
  report.fit_residual = std::sqrt(sq / m);
  return report;
}

double decay_rate_lower_bound(const SpectralDecomposition& d, const AlphaSchedule& s,
                              double horizon) {
  if (d.size() < 2) throw ContractError("decay rate needs at least two nodes");
  if (!(horizon > 0.0)) throw ContractError("horizon must be positive");
  const double lambda2 = d.eigenvalues(1);
  std::vector<double> points = s.breakpoints(0.0, horizon);
  constexpr int kProbes = 1000;
  for (int k = 0; k < kProbes; ++k) points.push_back(horizon * k / (kProbes - 1));
  double lowest = std::numeric_limits<double>::infinity();
  for (double t : points) lowest = std::min(lowest, fractional_power_scalar(lambda2, s(t)));
  return lowest;
}

}  // namespace netfrac
