#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "netfrac/matfun.hpp"

namespace netfrac {

namespace {

// Householder reduction of the symmetric matrix held in v to tridiagonal
// form (EISPACK tred2). On exit d is the diagonal, e the subdiagonal in
// e[1..n-1], and v the accumulated orthogonal transformation.
void tridiagonalize(Eigen::MatrixXd& v, Eigen::VectorXd& d, Eigen::VectorXd& e) {
  const Eigen::Index n = v.rows();
  for (Eigen::Index j = 0; j < n; ++j) d(j) = v(n - 1, j);

  for (Eigen::Index i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (Eigen::Index k = 0; k < i; ++k) scale += std::abs(d(k));
    if (scale == 0.0) {
      e(i) = d(i - 1);
      for (Eigen::Index j = 0; j < i; ++j) {
        d(j) = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (Eigen::Index k = 0; k < i; ++k) {
        d(k) /= scale;
        h += d(k) * d(k);
      }
      double f = d(i - 1);
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e(i) = scale * g;
      h -= f * g;
      d(i - 1) = f - g;
      for (Eigen::Index j = 0; j < i; ++j) e(j) = 0.0;

      for (Eigen::Index j = 0; j < i; ++j) {
        f = d(j);
        v(j, i) = f;
        g = e(j) + v(j, j) * f;
        for (Eigen::Index k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d(k);
          e(k) += v(k, j) * f;
        }
        e(j) = g;
      }
      f = 0.0;
      for (Eigen::Index j = 0; j < i; ++j) {
        e(j) /= h;
        f += e(j) * d(j);
      }
      const double hh = f / (h + h);
      for (Eigen::Index j = 0; j < i; ++j) e(j) -= hh * d(j);
      for (Eigen::Index j = 0; j < i; ++j) {
        f = d(j);
        g = e(j);
        for (Eigen::Index k = j; k <= i - 1; ++k) v(k, j) -= (f * e(k) + g * d(k));
        d(j) = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d(i) = h;
  }

  for (Eigen::Index i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d(i + 1);
    if (h != 0.0) {
      for (Eigen::Index k = 0; k <= i; ++k) d(k) = v(k, i + 1) / h;
      for (Eigen::Index j = 0; j <= i; ++j) {
        double g = 0.0;
        for (Eigen::Index k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (Eigen::Index k = 0; k <= i; ++k) v(k, j) -= g * d(k);
      }
    }
    for (Eigen::Index k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    d(j) = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e(0) = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), accumulating rotations into v
// (EISPACK tql2). Returns false when the sweep budget is exhausted.
bool tridiagonal_ql(Eigen::MatrixXd& v, Eigen::VectorXd& d, Eigen::VectorXd& e,
                    long max_sweeps) {
  const Eigen::Index n = v.rows();
  for (Eigen::Index i = 1; i < n; ++i) e(i - 1) = e(i);
  e(n - 1) = 0.0;

  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;
  long sweeps = 0;
  for (Eigen::Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d(l)) + std::abs(e(l)));
    Eigen::Index m = l;
    while (m < n - 1 && std::abs(e(m)) > eps * tst1) ++m;

    if (m > l) {
      do {
        if (++sweeps > max_sweeps) return false;
        double g = d(l);
        double p = (d(l + 1) - g) / (2.0 * e(l));
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d(l) = e(l) / (p + r);
        d(l + 1) = e(l) * (p + r);
        const double dl1 = d(l + 1);
        double h = g - d(l);
        for (Eigen::Index i = l + 2; i < n; ++i) d(i) -= h;
        f += h;

        p = d(m);
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e(l + 1);
        double s = 0.0, s2 = 0.0;
        for (Eigen::Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e(i);
          h = c * p;
          r = std::hypot(p, e(i));
          e(i + 1) = s * r;
          s = e(i) / r;
          c = p / r;
          p = c * d(i) - s * g;
          d(i + 1) = h + s * (c * g + s * d(i));
          for (Eigen::Index k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e(l) / dl1;
        e(l) = s * p;
        d(l) = c * p;
      } while (std::abs(e(l)) > eps * tst1);
    }
    d(l) += f;
    e(l) = 0.0;
  }
  return true;
}

}  // namespace

SpectralDecomposition sym_eig(const DenseMatrix& m) {
  if (!m.is_symmetric()) throw ContractError("sym_eig requires a symmetric-tagged matrix");
  const Eigen::Index n = m.rows();
  SpectralDecomposition out;
  if (n == 0) return out;

  Eigen::MatrixXd v = m.values();
  Eigen::VectorXd d(n), e(n);
  tridiagonalize(v, d, e);
  if (!tridiagonal_ql(v, d, e, 30 * static_cast<long>(n))) {
    // Report how far the partial result is from an eigen-decomposition.
    const double residual = (m.values() * v - v * d.asDiagonal()).cwiseAbs().maxCoeff();
    std::ostringstream msg;
    msg << "symmetric eigensolver did not converge within " << 30 * n
        << " sweeps (residual " << residual << ")";
    throw NumericError(msg.str());
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return d(a) < d(b); });
  out.eigenvalues.resize(n);
  out.basis.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = d(order[k]);
    out.basis.col(k) = v.col(order[k]);
  }
  return out;
}

DenseMatrix spectral_matrix(const SpectralDecomposition& d, const Eigen::VectorXd& values) {
  return DenseMatrix::symmetric(d.basis * values.asDiagonal() * d.basis.transpose());
}

double fractional_power_scalar(double lambda, double alpha) {
  if (lambda < -kZeroEigenvalueClamp) {
    throw ContractError("fractional power of negative eigenvalue " + std::to_string(lambda));
  }
  if (lambda <= kZeroEigenvalueClamp) return 0.0;
  return std::pow(lambda, alpha);
}

DenseMatrix fractional_power_sym(const SpectralDecomposition& d, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ContractError("fractional power exponent must lie in (0, 1], got " +
                        std::to_string(alpha));
  }
  Eigen::VectorXd values(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    values(i) = fractional_power_scalar(d.eigenvalues(i), alpha);
  }
  return spectral_matrix(d, values);
}

}  // namespace netfrac
