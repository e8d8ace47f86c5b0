#pragma once

#include <Eigen/Core>

namespace netfrac {

enum class Symmetry { general, symmetric };

/// Dense real matrix carrying a symmetry tag. A symmetric-tagged matrix is
/// exactly symmetric: construction mirrors the upper triangle onto the lower.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(Eigen::MatrixXd values, Symmetry symmetry = Symmetry::general);

  static DenseMatrix symmetric(Eigen::MatrixXd values) {
    return DenseMatrix(std::move(values), Symmetry::symmetric);
  }

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Symmetry symmetry() const noexcept { return symmetry_; }
  bool is_symmetric() const noexcept { return symmetry_ == Symmetry::symmetric; }

  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

  /// Largest absolute entry (0 for an empty matrix).
  double max_abs() const;

 private:
  Eigen::MatrixXd values_;
  Symmetry symmetry_ = Symmetry::general;
};

}  // namespace netfrac
