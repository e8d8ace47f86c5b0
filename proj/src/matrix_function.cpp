#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "netfrac/matfun.hpp"

namespace netfrac {

namespace {

using Complex = std::complex<double>;

// Eigenvalues closer than this (relative to the larger modulus) share a
// diagonal block in the Schur-Parlett recurrence.
constexpr double kClusterRelativeGap = 0.1;

// Exchanges the adjacent diagonal entries k and k+1 of the upper-triangular
// t with a single unitary rotation, updating q so that q t q^* is unchanged.
void swap_adjacent(Eigen::MatrixXcd& t, Eigen::MatrixXcd& q, Eigen::Index k) {
  const Complex a = t(k, k);
  const Complex b = t(k, k + 1);
  const Complex c = t(k + 1, k + 1);
  // Eigenvector of the 2x2 block for eigenvalue c.
  Complex x0 = b;
  Complex x1 = c - a;
  const double r = std::hypot(std::abs(x0), std::abs(x1));
  if (r == 0.0) return;
  x0 /= r;
  x1 /= r;
  Eigen::Matrix2cd rot;
  rot << x0, -std::conj(x1), x1, std::conj(x0);
  t.middleCols(k, 2) = t.middleCols(k, 2) * rot;
  t.middleRows(k, 2) = rot.adjoint() * t.middleRows(k, 2);
  t(k + 1, k) = 0.0;
  t(k, k) = c;
  t(k + 1, k + 1) = a;
  q.middleCols(k, 2) = q.middleCols(k, 2) * rot;
}

// Solves a x - x b = c for upper-triangular a (p x p), b (q x q).
Eigen::MatrixXcd solve_triangular_sylvester(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                            const Eigen::MatrixXcd& c) {
  const Eigen::Index p = a.rows();
  const Eigen::Index q = b.rows();
  Eigen::MatrixXcd x(p, q);
  Eigen::MatrixXcd shifted = a;
  for (Eigen::Index l = 0; l < q; ++l) {
    Eigen::VectorXcd rhs = c.col(l);
    for (Eigen::Index m = 0; m < l; ++m) rhs += x.col(m) * b(m, l);
    shifted.diagonal() = a.diagonal().array() - b(l, l);
    x.col(l) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return x;
}

// f(T) for a diagonal block of clustered eigenvalues: Taylor expansion of
// z^alpha about the block's mean eigenvalue.
Eigen::MatrixXcd power_of_cluster(const Eigen::MatrixXcd& t, double alpha) {
  const Eigen::Index p = t.rows();
  if (p == 1) {
    Eigen::MatrixXcd one(1, 1);
    one(0, 0) = std::pow(t(0, 0), alpha);
    return one;
  }
  const Complex sigma = t.diagonal().mean();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) radius = std::max(radius, std::abs(t(i, i) - sigma));
  if (radius >= 0.9 * std::abs(sigma)) {
    throw NumericError("eigenvalue cluster too wide for the Taylor evaluation of z^alpha");
  }
  Eigen::MatrixXcd shifted = t;
  shifted.diagonal().array() -= sigma;

  Complex coeff = std::pow(sigma, alpha);
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(p, p);
  Eigen::MatrixXcd result = coeff * power;
  const double eps = std::numeric_limits<double>::epsilon();
  int small_terms = 0;
  for (int k = 1; k < 2000; ++k) {
    coeff *= (alpha - (k - 1)) / (static_cast<double>(k) * sigma);
    power = (power * shifted).eval();
    const Eigen::MatrixXcd term = coeff * power;
    result += term;
    const double size = term.cwiseAbs().maxCoeff();
    if (k >= p && size <= eps * result.cwiseAbs().maxCoeff()) {
      if (++small_terms == 2) return result;
    } else {
      small_terms = 0;
    }
    if (coeff == Complex(0.0)) return result;  // alpha is a nonnegative integer
  }
  throw NumericError("Taylor evaluation of z^alpha did not converge on a clustered block");
}

}  // namespace

TriangularFactorization triangular_factorization(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw ContractError("triangular_factorization requires a square matrix");
  const Eigen::Index n = m.rows();
  TriangularFactorization f;
  if (n == 0) {
    f.block_starts = {0};
    return f;
  }
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m.values().cast<Complex>());
  if (schur.info() != Eigen::Success) throw NumericError("complex Schur factorization failed");
  f.unitary = schur.matrixU();
  f.triangular = schur.matrixT();
  f.triangular.triangularView<Eigen::StrictlyLower>().setZero();

  const double zero_tol = kZeroEigenvalueClamp * std::max(1.0, m.max_abs());
  const Eigen::VectorXcd lambda = f.triangular.diagonal();

  // Cluster labels: 0 for (near-)zero eigenvalues, then clusters in order of
  // first appearance, merging transitively.
  std::vector<Eigen::Index> label(n, -1);
  Eigen::Index next = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(lambda(i)) <= zero_tol) {
      label[i] = 0;
      ++f.zero_count;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (label[i] != -1) continue;
    label[i] = next;
    std::vector<Eigen::Index> frontier{i};
    while (!frontier.empty()) {
      Eigen::Index u = frontier.back();
      frontier.pop_back();
      for (Eigen::Index v = 0; v < n; ++v) {
        if (label[v] != -1) continue;
        const double gap = std::abs(lambda(u) - lambda(v));
        if (gap <= kClusterRelativeGap * std::max(std::abs(lambda(u)), std::abs(lambda(v)))) {
          label[v] = next;
          frontier.push_back(v);
        }
      }
    }
    ++next;
  }

  // Bubble the diagonal into cluster order with adjacent swaps. Entries of
  // distinct clusters are well separated, so each swap is well conditioned.
  for (Eigen::Index pass = 0; pass < n; ++pass) {
    bool swapped = false;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      if (label[k] > label[k + 1]) {
        swap_adjacent(f.triangular, f.unitary, k);
        std::swap(label[k], label[k + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == 0 || label[k] != label[k - 1]) f.block_starts.push_back(k);
  }
  f.block_starts.push_back(n);
  return f;
}

ComplexMatrixResult fractional_power_general(const TriangularFactorization& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ContractError("fractional power exponent must lie in (0, 1], got " +
                        std::to_string(alpha));
  }
  const Eigen::MatrixXcd& t = f.triangular;
  const Eigen::Index n = t.rows();
  ComplexMatrixResult out;
  if (n == 0) {
    out.is_real = true;
    return out;
  }
  const std::size_t blocks = f.block_starts.size() - 1;
  auto start = [&](std::size_t b) { return f.block_starts[b]; };
  auto len = [&](std::size_t b) { return f.block_starts[b + 1] - f.block_starts[b]; };

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto block = t.block(start(b), start(b), len(b), len(b));
    if (b == 0 && f.zero_count > 0) {
      // 0^alpha = 0 needs a semisimple zero eigenvalue: the leading block of
      // the Schur form must vanish.
      const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
      if (block.cwiseAbs().maxCoeff() > 1e-8 * scale) {
        throw ContractError(
            "zero eigenvalue has a nontrivial Jordan block: z^alpha is not defined on the "
            "spectrum");
      }
      continue;
    }
    result.block(start(b), start(b), len(b), len(b)) = power_of_cluster(block, alpha);
  }

  // Block Parlett recurrence, one block column at a time.
  for (std::size_t j = 1; j < blocks; ++j) {
    for (std::size_t ii = j; ii-- > 0;) {
      const auto tij = t.block(start(ii), start(j), len(ii), len(j));
      Eigen::MatrixXcd rhs =
          result.block(start(ii), start(ii), len(ii), len(ii)) * tij -
          tij * result.block(start(j), start(j), len(j), len(j));
      for (std::size_t k = ii + 1; k < j; ++k) {
        rhs += result.block(start(ii), start(k), len(ii), len(k)) *
                   t.block(start(k), start(j), len(k), len(j)) -
               t.block(start(ii), start(k), len(ii), len(k)) *
                   result.block(start(k), start(j), len(k), len(j));
      }
      result.block(start(ii), start(j), len(ii), len(j)) = solve_triangular_sylvester(
          t.block(start(ii), start(ii), len(ii), len(ii)),
          t.block(start(j), start(j), len(j), len(j)), rhs);
    }
  }

  out.value = f.unitary * result * f.unitary.adjoint();
  const double size = out.value.cwiseAbs().maxCoeff();
  const double imag = out.value.imag().cwiseAbs().maxCoeff();
  out.is_real = imag <= 1e-8 * std::max(size, std::numeric_limits<double>::min());
  if (out.is_real) out.value.imag().setZero();
  return out;
}

ComplexMatrixResult fractional_power_general(const DenseMatrix& m, double alpha) {
  return fractional_power_general(triangular_factorization(m), alpha);
}

DenseMatrix ComplexMatrixResult::real() const {
  if (!is_real) throw NumericError("matrix function result has a significant imaginary part");
  return DenseMatrix(value.real());
}

}  // namespace netfrac
