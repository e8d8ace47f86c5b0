#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "netfrac/dense_matrix.hpp"
#include "netfrac/errors.hpp"

namespace netfrac {

/// Eigenvalues in ascending order with an orthonormal basis whose columns are
/// the matching eigenvectors: m = X diag(lambda) X^T.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd basis;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
};

/// Householder tridiagonalization followed by implicit-shift QL. Throws
/// NumericError (with the residual) if any eigenvalue needs more than 30 n
/// sweeps.
SpectralDecomposition sym_eig(const DenseMatrix& m);

/// X diag(values) X^T.
DenseMatrix spectral_matrix(const SpectralDecomposition& d, const Eigen::VectorXd& values);

/// X diag(f(lambda_i)) X^T. Throws NumericError naming the eigenvalue when f
/// is not finite there.
template <class F>
  requires std::invocable<F&, double>
DenseMatrix apply_spectral_function(const SpectralDecomposition& d, F&& f) {
  Eigen::VectorXd values(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    values(i) = static_cast<double>(f(d.eigenvalues(i)));
    if (!std::isfinite(values(i))) {
      throw NumericError("spectral function is not finite at eigenvalue " +
                         std::to_string(d.eigenvalues(i)));
    }
  }
  return spectral_matrix(d, values);
}

/// Eigenvalues in [-1e-10, 1e-10] are treated as exact zeros before powering.
inline constexpr double kZeroEigenvalueClamp = 1e-10;

/// lambda^alpha with 0^alpha = 0 and the clamp above. Throws ContractError for
/// eigenvalues below -1e-10.
double fractional_power_scalar(double lambda, double alpha);

/// L^alpha = X Lambda^alpha X^T for alpha in (0, 1]; symmetric output.
DenseMatrix fractional_power_sym(const SpectralDecomposition& d, double alpha);

/// Unitary-triangular factorization m = Q T Q^*, reordered so that clustered
/// eigenvalues occupy contiguous diagonal blocks of T. Eigenvalues within
/// `kZeroEigenvalueClamp * max(1, ||m||)` of zero form a leading block.
struct TriangularFactorization {
  Eigen::MatrixXcd unitary;
  Eigen::MatrixXcd triangular;
  /// Start index of each diagonal block, plus a final entry equal to n.
  std::vector<Eigen::Index> block_starts;
  /// Number of (near-)zero eigenvalues, all inside block 0 when positive.
  Eigen::Index zero_count = 0;
};

TriangularFactorization triangular_factorization(const DenseMatrix& m);

struct ComplexMatrixResult {
  Eigen::MatrixXcd value;
  /// True when max |imag| <= 1e-8 ||value||; `value` then has zero imaginary
  /// part.
  bool is_real = false;

  /// Real part; throws NumericError when the result is not real.
  DenseMatrix real() const;
};

/// T^alpha through the block Schur-Parlett recurrence on a prepared
/// factorization. A zero eigenvalue must be semisimple; otherwise z^alpha is
/// not defined on the spectrum and ContractError is thrown.
ComplexMatrixResult fractional_power_general(const TriangularFactorization& f, double alpha);
ComplexMatrixResult fractional_power_general(const DenseMatrix& m, double alpha);

/// exp(m) by scaling and squaring with the degree-13 Pade approximant.
/// Throws NumericError if the result overflows.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m);
inline DenseMatrix matrix_exponential(const DenseMatrix& m) {
  return DenseMatrix(matrix_exponential(m.values()), m.symmetry());
}

}  // namespace netfrac
