#include <cmath>

#include "netfrac/dynamics.hpp"
#include "working_system.hpp"

namespace netfrac {

struct Generator::State {
  GeneratorKind kind;
  DenseMatrix base;
  std::optional<SpectralDecomposition> spectrum;
  std::optional<TriangularFactorization> factorization;
  std::optional<DistanceMatrix> distances;
};

Generator Generator::fractional(const DenseMatrix& laplacian) {
  if (laplacian.rows() != laplacian.cols()) throw ContractError("generator must be square");
  auto s = std::make_shared<State>();
  s->base = laplacian;
  if (laplacian.is_symmetric()) {
    s->kind = GeneratorKind::modal;
    s->spectrum = sym_eig(laplacian);
  } else {
    s->kind = GeneratorKind::dense_general;
    s->factorization = triangular_factorization(laplacian);
  }
  return Generator(std::move(s));
}

Generator Generator::fractional_dense(const DenseMatrix& laplacian) {
  Generator g = fractional(laplacian);
  if (g.kind() == GeneratorKind::modal) {
    auto s = std::make_shared<State>(*g.state_);
    s->kind = GeneratorKind::dense_symmetric;
    return Generator(std::move(s));
  }
  return g;
}

Generator Generator::k_path(const Graph& g) {
  auto s = std::make_shared<State>();
  s->kind = GeneratorKind::k_path;
  s->base = k_path_laplacian(g, 1);
  s->distances = all_pairs_distances(g);
  return Generator(std::move(s));
}

GeneratorKind Generator::kind() const noexcept { return state_->kind; }
Eigen::Index Generator::size() const noexcept { return state_->base.rows(); }
bool Generator::has_spectrum() const noexcept { return state_->spectrum.has_value(); }
const DenseMatrix& Generator::base() const { return state_->base; }

const SpectralDecomposition& Generator::spectrum() const {
  if (!state_->spectrum) {
    throw ContractError("generator has no time-independent eigenbasis");
  }
  return *state_->spectrum;
}

DenseMatrix Generator::at(double alpha) const {
  switch (state_->kind) {
    case GeneratorKind::modal:
    case GeneratorKind::dense_symmetric:
      return fractional_power_sym(*state_->spectrum, alpha);
    case GeneratorKind::dense_general:
      return fractional_power_general(*state_->factorization, alpha).real();
    case GeneratorKind::k_path:
      return transformed_k_path_laplacian(*state_->distances, alpha);
  }
  throw ContractError("unknown generator kind");
}

// ---------------------------------------------------------------------------

void DynamicsProblem::validate() const {
  if (initial.size() != generator.size()) {
    throw ContractError("initial state has " + std::to_string(initial.size()) +
                        " entries, generator has " + std::to_string(generator.size()));
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ContractError("horizon must be positive and finite");
  }
  if (model == Model::heat) {
    if (initial.imag().cwiseAbs().maxCoeff() != 0.0) {
      throw ContractError("heat initial state must be real");
    }
    if (initial.real().minCoeff() < 0.0) {
      throw ContractError("heat initial state must be nonnegative");
    }
    if (std::abs(initial.real().sum() - 1.0) > 1e-12) {
      throw ContractError("heat initial state must sum to 1");
    }
  } else if (std::abs(initial.norm() - 1.0) > 1e-12) {
    throw ContractError("Schrodinger initial state must have unit 2-norm");
  }
}

void IntegratorConfig::validate() const {
  if (!(rtol >= 1e-13) || !std::isfinite(rtol)) throw ContractError("rtol must be >= 1e-13");
  if (!(atol > 0.0) || !std::isfinite(atol)) throw ContractError("atol must be positive");
  if (max_step && !(*max_step > 0.0)) throw ContractError("max step must be positive");
  if (initial_step && !(*initial_step > 0.0)) throw ContractError("initial step must be positive");
  if (samples < 2) throw ContractError("at least two samples are required");
}

std::vector<double> sample_times(double horizon, std::size_t samples) {
  std::vector<double> t(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    t[k] = horizon * static_cast<double>(k) / static_cast<double>(samples - 1);
  }
  t.back() = horizon;
  return t;
}

Eigen::VectorXd Trajectory::probabilities(std::size_t k) const {
  if (model == Model::heat) return states.at(k).real();
  Eigen::VectorXd amp = states.at(k).cwiseAbs2();
  return amp / amp.sum();
}

RightHandSide build_rhs(const DynamicsProblem& p) {
  p.validate();
  if (p.generator.has_spectrum()) {
    // The two basis changes are fixed; only the diagonal depends on t.
    const SpectralDecomposition d = p.generator.spectrum();
    const bool heat = p.model == Model::heat;
    const AlphaSchedule schedule = p.schedule;
    return [d, heat, schedule](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
      const double alpha = schedule(t);
      Eigen::VectorXcd q = d.basis.transpose() * y;
      for (Eigen::Index i = 0; i < q.size(); ++i) {
        q(i) *= -fractional_power_scalar(d.eigenvalues(i), alpha);
      }
      Eigen::VectorXcd out = d.basis * q;
      return heat ? out : Eigen::VectorXcd(std::complex<double>(0.0, 1.0) * out);
    };
  }
  const Generator g = p.generator;
  const bool heat = p.model == Model::heat;
  const AlphaSchedule schedule = p.schedule;
  return [g, heat, schedule](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    const Eigen::MatrixXd gt = g.at(schedule(t)).values().transpose();
    Eigen::VectorXcd out = -(gt.cast<std::complex<double>>() * y);
    return heat ? out : Eigen::VectorXcd(std::complex<double>(0.0, 1.0) * out);
  };
}

Trajectory simulate(const DynamicsProblem& p, const IntegratorConfig& c) {
  switch (c.method) {
    case Method::rk45:
      return integrate_rk45(p, c);
    case Method::bdf:
      return integrate_bdf(p, c);
    case Method::exact: {
      c.validate();
      const auto times = sample_times(p.horizon, c.samples);
      return exact_solution(p, times);
    }
  }
  throw ContractError("unknown integration method");
}

}  // namespace netfrac
