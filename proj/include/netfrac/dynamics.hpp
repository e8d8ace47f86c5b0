#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "netfrac/dense_matrix.hpp"
#include "netfrac/errors.hpp"
#include "netfrac/graph.hpp"
#include "netfrac/matfun.hpp"
#include "netfrac/schedule.hpp"

namespace netfrac {

enum class Model { heat, schrodinger };

enum class GeneratorKind {
  modal,            ///< symmetric L^alpha, integrated in the eigenbasis
  dense_symmetric,  ///< symmetric L^alpha assembled as a dense matrix
  dense_general,    ///< nonsymmetric L^alpha via the triangular factorization
  k_path,           ///< L_1 + sum_k k^{-alpha} L_k
};

/// The time-dependent operator family G(alpha). Immutable and cheap to copy.
class Generator {
 public:
  /// L^alpha; symmetric-tagged input takes the eigenbasis fast path.
  static Generator fractional(const DenseMatrix& laplacian);
  /// L^alpha evaluated densely in nodal coordinates even when symmetric.
  static Generator fractional_dense(const DenseMatrix& laplacian);
  /// Variable-order transformed k-path Laplacian of an undirected connected graph.
  static Generator k_path(const Graph& g);

  GeneratorKind kind() const noexcept;
  Eigen::Index size() const noexcept;
  bool symmetric() const noexcept { return kind() != GeneratorKind::dense_general; }
  /// True when every G(alpha) shares one eigenbasis (the fractional kinds on
  /// a symmetric Laplacian).
  bool has_spectrum() const noexcept;

  /// Eigen-decomposition of the symmetric base Laplacian. Throws ContractError
  /// unless has_spectrum().
  const SpectralDecomposition& spectrum() const;
  /// Base Laplacian (L, or L_1 for the k-path kind).
  const DenseMatrix& base() const;

  /// Dense G(alpha).
  DenseMatrix at(double alpha) const;

  struct State;

 private:
  explicit Generator(std::shared_ptr<const State> s) : state_(std::move(s)) {}
  std::shared_ptr<const State> state_;
};

/// Heat: p' = -p G(alpha(t)) with p >= 0 summing to 1. Schrodinger:
/// psi' = -i psi G(alpha(t)) with ||psi||_2 = 1. States are row vectors in
/// the formulas; they are stored as Eigen column vectors.
struct DynamicsProblem {
  Model model = Model::heat;
  Generator generator;
  AlphaSchedule schedule;
  Eigen::VectorXcd initial;
  double horizon = 1.0;

  /// Throws ContractError when the initial state violates the model's
  /// normalization (1e-12) or sizes disagree.
  void validate() const;
};

struct IntegratorStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  std::size_t linear_solves = 0;
  std::size_t factorizations = 0;
  std::size_t clamp_count = 0;
};

struct Trajectory {
  Model model = Model::heat;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  IntegratorStats stats;

  std::size_t size() const noexcept { return times.size(); }
  /// Node probabilities at sample k: p for heat, |psi|^2 / sum |psi|^2 for
  /// Schrodinger.
  Eigen::VectorXd probabilities(std::size_t k) const;
};

enum class Method { rk45, bdf, exact };

struct IntegratorConfig {
  Method method = Method::rk45;
  double rtol = 1e-6;
  double atol = 1e-9;
  std::optional<double> max_step;
  std::optional<double> initial_step;
  /// Uniform sample times 0, ..., horizon (both ends included).
  std::size_t samples = 200;

  void validate() const;
};

/// Raised when the step size collapses below 1e-14 * horizon; carries the
/// samples produced so far.
class StiffnessError : public NumericError {
 public:
  StiffnessError(const std::string& what, Trajectory partial)
      : NumericError(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

using RightHandSide = std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>;

/// (t, state) -> -state G(alpha(t)) (heat) or -i state G(alpha(t)).
/// Symmetric fractional generators evaluate through the cached eigenbasis.
RightHandSide build_rhs(const DynamicsProblem& p);

std::vector<double> sample_times(double horizon, std::size_t samples);

/// Dormand-Prince 5(4) with PI step control and quartic dense output.
Trajectory integrate_rk45(const DynamicsProblem& p, const IntegratorConfig& c);

/// Variable-step, variable-order (1-5) backward differentiation with NDF
/// corrections. One linear solve per step; factorizations are reused while
/// the step coefficient and alpha(t) are unchanged.
Trajectory integrate_bdf(const DynamicsProblem& p, const IntegratorConfig& c);

/// Closed form p0 X exp(-I(t)) X^T with I_i(t) = int_0^t lambda_i^alpha(tau)
/// dtau by adaptive quadrature. Requires a generator with a shared spectrum.
Trajectory exact_solution(const DynamicsProblem& p, std::span<const double> times);

/// Dispatches on c.method.
Trajectory simulate(const DynamicsProblem& p, const IntegratorConfig& c);

/// Per-eigenvalue integrals int_a^b lambda_i^alpha(tau) dtau.
Eigen::VectorXd spectral_antiderivative(const SpectralDecomposition& d, const AlphaSchedule& s,
                                        double a, double b);

/// ||L^alpha(t) A(t) - A(t) L^alpha(t)||_max with A(t) = int_0^t L^alpha(tau) dtau.
double antiderivative_commutator_residual(const SpectralDecomposition& d, const AlphaSchedule& s,
                                          double t);

/// Uniform distribution for connected undirected graphs; the normalized left
/// null vector of L_out for strongly connected digraphs.
Eigen::VectorXd steady_state(const Graph& g);

/// Characteristic exponents log(mu)/T of the monodromy matrix over one
/// period, ascending by real part. `period` overrides the schedule's own.
std::vector<std::complex<double>> floquet_exponents(const Generator& g, const AlphaSchedule& s,
                                                    std::optional<double> period = {});

struct DecayOptions {
  /// Samples before this fraction of the horizon are treated as transient.
  double transient_fraction = 0.1;
  /// Samples whose error is below this are ignored as noise.
  double noise_floor = 1e-8;
};

struct DecayReport {
  /// e(t) <= K e(0) exp(-eta t) on the fitted samples.
  double K = 0.0;
  double eta = 0.0;
  /// Root-mean-square residual of the least-squares fit of log e(t).
  double fit_residual = 0.0;
  std::size_t samples_used = 0;
};

/// Fits the decay of e(t) = ||p(t) - reference||_2. Throws ContractError for
/// Schrodinger trajectories or fewer than 10 usable samples.
DecayReport decay_envelope(const Trajectory& traj, const Eigen::VectorXd& reference,
                           const DecayOptions& options = {});

/// min over [0, horizon] of lambda_2^alpha(tau), sampled at 1000 points plus
/// schedule breakpoints.
double decay_rate_lower_bound(const SpectralDecomposition& d, const AlphaSchedule& s,
                              double horizon);

}  // namespace netfrac
