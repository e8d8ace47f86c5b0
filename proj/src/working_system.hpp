#pragma once

// Linear ODE y' = -s G(alpha(t))^T y in the coordinates the integrators work
// in: eigen-coordinates q = X^T y for the modal generator, nodal otherwise.
// s = 1 for heat and i for Schrodinger.

#include <cmath>
#include <complex>
#include <optional>
#include <type_traits>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "netfrac/dynamics.hpp"

namespace netfrac::detail {

template <class Scalar>
class WorkingSystem {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  static constexpr bool kComplex = !std::is_same_v<Scalar, double>;

  WorkingSystem(const DynamicsProblem& p, IntegratorStats& stats)
      : generator_(p.generator), schedule_(p.schedule), stats_(stats),
        modal_(p.generator.kind() == GeneratorKind::modal) {}

  Vector enter(const Eigen::VectorXcd& nodal) const {
    Vector y;
    if constexpr (kComplex) {
      y = nodal;
    } else {
      y = nodal.real();
    }
    if (modal_) return generator_.spectrum().basis.transpose() * y;
    return y;
  }

  Eigen::VectorXcd leave(const Vector& y) const {
    Vector nodal = modal_ ? Vector(generator_.spectrum().basis * y) : y;
    return nodal.template cast<std::complex<double>>();
  }

  void derivative(double t, const Vector& y, Vector& dy) {
    ++stats_.rhs_evaluations;
    const double alpha = alpha_at(t);
    if (modal_) {
      const Eigen::VectorXd& w = modal_powers(alpha);
      dy = -(w.array().template cast<Scalar>() * y.array()).matrix();
    } else {
      dy = -(nodal_transpose(alpha) * y);
    }
    if constexpr (kComplex) dy *= Scalar(0.0, 1.0);
  }

  /// Prepares solves with I + c s G(alpha(t))^T.
  void factor(double t, double c) {
    const double alpha = alpha_at(t);
    if (factored_ && std::abs(c - factored_c_) <= 1e-12 * std::abs(c) &&
        std::abs(alpha - factored_alpha_) <= 1e-12) {
      return;
    }
    ++stats_.factorizations;
    factored_ = true;
    factored_c_ = c;
    factored_alpha_ = alpha;
    Scalar sc = c;
    if constexpr (kComplex) sc = Scalar(0.0, c);
    if (modal_) {
      const Eigen::VectorXd& w = modal_powers(alpha);
      diagonal_inverse_ = (Scalar(1.0) + sc * w.array().template cast<Scalar>()).inverse().matrix();
      return;
    }
    const Eigen::MatrixXd& gt = nodal_transpose(alpha);
    Matrix m = sc * gt.template cast<Scalar>();
    m.diagonal().array() += Scalar(1.0);
    if constexpr (!kComplex) {
      if (generator_.symmetric()) {
        cholesky_.emplace(m);
        if (cholesky_->info() != Eigen::Success) {
          throw NumericError("implicit step matrix is not positive definite");
        }
        lu_.reset();
        return;
      }
    }
    lu_.emplace(m);
    cholesky_.reset();
  }

  Vector solve(const Vector& b) {
    ++stats_.linear_solves;
    if (modal_) return (diagonal_inverse_.array() * b.array()).matrix();
    if (cholesky_) {
      if constexpr (!kComplex) return cholesky_->solve(b);
    }
    return lu_->solve(b);
  }

  /// Forces the next factor() to refactor.
  void invalidate() { factored_ = false; }

 private:
  double alpha_at(double t) {
    const auto sample = schedule_.sample(t);
    if (sample.clamped) ++stats_.clamp_count;
    return sample.alpha;
  }

  const Eigen::VectorXd& modal_powers(double alpha) {
    if (!powers_alpha_ || *powers_alpha_ != alpha) {
      const auto& lambda = generator_.spectrum().eigenvalues;
      powers_.resize(lambda.size());
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        powers_(i) = fractional_power_scalar(lambda(i), alpha);
      }
      powers_alpha_ = alpha;
    }
    return powers_;
  }

  const Eigen::MatrixXd& nodal_transpose(double alpha) {
    if (!nodal_alpha_ || *nodal_alpha_ != alpha) {
      nodal_ = generator_.at(alpha).values().transpose();
      nodal_alpha_ = alpha;
    }
    return nodal_;
  }

  Generator generator_;
  AlphaSchedule schedule_;
  IntegratorStats& stats_;
  bool modal_;

  std::optional<double> powers_alpha_;
  Eigen::VectorXd powers_;
  std::optional<double> nodal_alpha_;
  Eigen::MatrixXd nodal_;

  bool factored_ = false;
  double factored_c_ = 0.0;
  double factored_alpha_ = 0.0;
  Vector diagonal_inverse_;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> cholesky_;
  std::optional<Eigen::PartialPivLU<Matrix>> lu_;
};

/// Max over i of |e_i| / (atol + rtol max(|y_i|, |z_i|)).
template <class Vector>
double mixed_error_norm(const Vector& err, const Vector& y, const Vector& z, double rtol,
                        double atol) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y(i)), std::abs(z(i)));
    worst = std::max(worst, std::abs(err(i)) / scale);
  }
  return worst;
}

}  // namespace netfrac::detail
