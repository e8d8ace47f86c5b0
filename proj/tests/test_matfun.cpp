#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "netfrac/matfun.hpp"
#include "support.hpp"

using namespace netfrac;

namespace {

Eigen::MatrixXd random_symmetric(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = 2.0 * testing::uniform01(rng) - 1.0;
  return m;
}

// Taylor series with scaling and squaring in long double.
Eigen::MatrixXd series_exp(const Eigen::MatrixXd& m) {
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  int s = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm /= 2;
    ++s;
  }
  const LMat a = m.cast<long double>() / std::ldexp(1.0L, s);
  LMat term = LMat::Identity(m.rows(), m.cols());
  LMat sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * a / static_cast<long double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum.cast<double>();
}

// Principal power through an eigendecomposition (diagonalizable input).
Eigen::MatrixXcd eigen_power(const Eigen::MatrixXd& m, double alpha) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXcd lambda = es.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    lambda(i) = std::abs(lambda(i)) < 1e-12 ? 0.0 : std::pow(lambda(i), alpha);
  }
  const Eigen::MatrixXcd v = es.eigenvectors();
  return v * lambda.asDiagonal() * v.inverse();
}

Eigen::MatrixXd matpow(const Eigen::MatrixXcd& m, int k) {
  Eigen::MatrixXcd r = m;
  for (int i = 1; i < k; ++i) r = r * m;
  return r.real();
}

}  // namespace

TEST_CASE("symmetric eigensolver") {
  SUBCASE("cycle Laplacian") {
    const auto d = sym_eig(combinatorial_laplacian(testing::cycle(4)));
    const double expected[4] = {0, 2, 2, 4};
    for (int i = 0; i < 4; ++i) CHECK(d.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-14));
    CHECK(std::abs(d.eigenvalues(0)) <= 1e-14);
  }
  SUBCASE("diagonal input gives a permutation basis") {
    Eigen::Matrix3d m = Eigen::Vector3d(3, 1, 2).asDiagonal();
    const auto d = sym_eig(DenseMatrix::symmetric(m));
    CHECK(d.eigenvalues == Eigen::Vector3d(1, 2, 3));
    CHECK(d.basis.cwiseAbs() == (Eigen::Matrix3d() << 0, 0, 1, 1, 0, 0, 0, 1, 0).finished());
  }
  SUBCASE("karate club") {
    const auto l = combinatorial_laplacian(testing::karate());
    const auto d = sym_eig(l);
    CHECK(std::abs(d.eigenvalues(0)) <= 1e-10);
    CHECK(d.eigenvalues(1) > 0.1);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const Eigen::VectorXd x = d.basis.col(i);
      CHECK((l.values() * x - d.eigenvalues(i) * x).norm() <= 1e-11);
    }
  }
  SUBCASE("agrees with a library solver on random matrices") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed * 3 % 40);
      const Eigen::MatrixXd m = random_symmetric(n, seed);
      const auto d = sym_eig(DenseMatrix::symmetric(m));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(m);
      CHECK((d.eigenvalues - oracle.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12);
      for (Eigen::Index i = 1; i < n; ++i) CHECK(d.eigenvalues(i - 1) <= d.eigenvalues(i));
      const Eigen::MatrixXd gram = d.basis.transpose() * d.basis;
      CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
      const Eigen::MatrixXd back = d.basis * d.eigenvalues.asDiagonal() * d.basis.transpose();
      CHECK((back - m).cwiseAbs().maxCoeff() <= 1e-10 * m.cwiseAbs().maxCoeff());
    }
  }
  SUBCASE("graph Laplacians with clustered spectra") {
    const Graph g = testing::random_connected(50, 200, 9, true);
    const auto l = combinatorial_laplacian(g);
    const auto d = sym_eig(l);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(l.values());
    CHECK((d.eigenvalues - oracle.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-11);
  }
  SUBCASE("requires the symmetric tag") {
    CHECK_THROWS_AS(sym_eig(DenseMatrix(Eigen::Matrix2d::Identity(), Symmetry::general)), ContractError);
  }
}

TEST_CASE("symmetric fractional power") {
  const auto l = combinatorial_laplacian(testing::cycle(4));
  const auto d = sym_eig(l);
  SUBCASE("cycle, alpha = 0.5") {
    const auto p = fractional_power_sym(d, 0.5);
    CHECK(p(0, 0) == doctest::Approx(std::pow(2.0, -1.5) * (std::sqrt(2.0) + 2)).epsilon(1e-14));
    CHECK(p(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(p(0, 2) == doctest::Approx(std::pow(2.0, -1.5) * (std::sqrt(2.0) - 2)).epsilon(1e-14));
    CHECK(p.is_symmetric());
  }
  SUBCASE("square root squares back") {
    const Graph g = testing::random_connected(30, 40, 2, true);
    const auto lg = combinatorial_laplacian(g);
    const Eigen::MatrixXd f = fractional_power_sym(sym_eig(lg), 0.5).values();
    CHECK((f * f - lg.values()).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("alpha = 1 reproduces L") {
    const Graph g = testing::karate();
    const auto lg = combinatorial_laplacian(g);
    CHECK((fractional_power_sym(sym_eig(lg), 1.0).values() - lg.values()).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("spectral mapping") {
    for (double a : {0.25, 0.6}) {
      const auto ev = sym_eig(fractional_power_sym(d, a)).eigenvalues;
      const double expected[4] = {0, std::pow(2.0, a), std::pow(2.0, a), std::pow(4.0, a)};
      for (int i = 0; i < 4; ++i) CHECK(std::abs(ev(i) - expected[i]) <= 1e-10);
    }
  }
  SUBCASE("alpha out of range") {
    CHECK_THROWS_AS(fractional_power_sym(d, 0.0), ContractError);
    CHECK_THROWS_AS(fractional_power_sym(d, 1.5), ContractError);
    CHECK_THROWS_AS(fractional_power_scalar(-1e-9, 0.5), ContractError);
  }
  SUBCASE("zero and clamped eigenvalues") {
    CHECK(fractional_power_scalar(0.0, 0.3) == 0.0);
    CHECK(fractional_power_scalar(-5e-11, 0.3) == 0.0);
    CHECK(fractional_power_scalar(4.0, 0.5) == 2.0);
  }
  SUBCASE("M-matrix, null vector and commutativity on random graphs") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const Graph g = testing::random_connected(8 + 4 * seed, seed * 4, seed, seed % 2 == 1);
      const auto dg = sym_eig(combinatorial_laplacian(g));
      for (double a : {0.25, 0.5, 0.75}) {
        const Eigen::MatrixXd p = fractional_power_sym(dg, a).values();
        CHECK(p.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
          CHECK(p(i, i) >= 0.0);
          for (Eigen::Index j = 0; j < p.cols(); ++j)
            if (i != j) CHECK(p(i, j) <= 1e-12);
        }
      }
      const Eigen::MatrixXd a = fractional_power_sym(dg, 0.3).values();
      const Eigen::MatrixXd b = fractional_power_sym(dg, 0.9).values();
      CHECK((a * b - b * a).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("spectral functions") {
  const auto l = combinatorial_laplacian(testing::cycle(4));
  const auto d = sym_eig(l);
  CHECK((apply_spectral_function(d, [](double x) { return x; }).values() - l.values()).cwiseAbs().maxCoeff() <= 1e-10);
  const auto heat = apply_spectral_function(d, [](double x) { return std::exp(-x); });
  CHECK((heat.values() - matrix_exponential(Eigen::MatrixXd(-l.values()))).cwiseAbs().maxCoeff() <= 1e-9);
  const auto power = apply_spectral_function(d, [](double x) { return fractional_power_scalar(x, 0.4); });
  CHECK((power.values() - fractional_power_sym(d, 0.4).values()).cwiseAbs().maxCoeff() <= 1e-14);
  try {
    apply_spectral_function(d, [](double x) { return std::log(std::max(x, 0.0)); });
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
  }
}

TEST_CASE("triangular factorization") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto l = directed_laplacians(testing::strongly_connected_digraph(6 + seed, seed + 2, seed)).out;
    const auto f = triangular_factorization(l);
    const Eigen::Index n = l.rows();
    const Eigen::MatrixXcd q = f.unitary;
    CHECK((q.adjoint() * q - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((q * f.triangular * q.adjoint() - l.values().cast<std::complex<double>>()).cwiseAbs().maxCoeff() <=
          1e-10 * l.max_abs());
    CHECK(f.triangular.triangularView<Eigen::StrictlyLower>().toDenseMatrix().cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.zero_count == 1);
    CHECK(std::abs(f.triangular(0, 0)) <= 1e-10);
    CHECK(f.block_starts.front() == 0);
    CHECK(f.block_starts.back() == n);
  }
}

TEST_CASE("general fractional power") {
  SUBCASE("symmetric input agrees with the spectral route") {
    const auto l = combinatorial_laplacian(testing::random_connected(20, 30, 7, true));
    const DenseMatrix general(l.values(), Symmetry::general);
    for (double a : {0.3, 0.5, 1.0}) {
      const auto r = fractional_power_general(general, a);
      CHECK(r.is_real);
      CHECK((r.real().values() - fractional_power_sym(sym_eig(l), a).values()).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("directed 2-cycle") {
    const auto l = directed_laplacians(Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, true)).out;
    const auto r = fractional_power_general(l, 0.5).real();
    const auto s = fractional_power_sym(sym_eig(DenseMatrix::symmetric(l.values())), 0.5);
    CHECK((r.values() - s.values()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("strongly connected digraphs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto l = directed_laplacians(testing::strongly_connected_digraph(5, 4, seed)).out;
      const auto r = fractional_power_general(l, 0.7);
      REQUIRE(r.is_real);
      const Eigen::MatrixXd p = r.real().values();
      CHECK(p.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-8);
      CHECK((p.cast<std::complex<double>>() - eigen_power(l.values(), 0.7)).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("integer roots recover the matrix") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto l = directed_laplacians(testing::strongly_connected_digraph(12, 10, seed)).out;
      CHECK((matpow(fractional_power_general(l, 0.5).value, 2) - l.values()).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((matpow(fractional_power_general(l, 0.25).value, 4) - l.values()).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
  SUBCASE("directed cycle has complex eigenvalues but a real power") {
    const auto l = directed_laplacians(testing::strongly_connected_digraph(7, 0, 1)).out;
    const auto r = fractional_power_general(l, 0.5);
    CHECK(r.is_real);
    CHECK((matpow(r.value, 2) - l.values()).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("non-diagonalizable nonzero block") {
    Eigen::Matrix3d m;
    m << 2, 1, 0, 0, 2, 1, 0, 0, 2;
    const auto r = fractional_power_general(DenseMatrix(m, Symmetry::general), 0.5);
    CHECK((matpow(r.value, 2) - m).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("nearly repeated eigenvalues") {
    Eigen::Matrix3d m;
    m << 1, 100, 3, 0, 1 + 1e-9, 5, 0, 0, 4;
    const auto r = fractional_power_general(DenseMatrix(m, Symmetry::general), 0.5);
    CHECK((matpow(r.value, 2) - m).cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("zero eigenvalue with a Jordan block") {
    Eigen::Matrix2d m;
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(fractional_power_general(DenseMatrix(m, Symmetry::general), 0.5), ContractError);
    const auto path = directed_laplacians(Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}, true)).out;
    CHECK_NOTHROW(fractional_power_general(path, 0.5));
  }
  SUBCASE("alpha out of range") {
    const auto l = directed_laplacians(testing::strongly_connected_digraph(4, 1, 1)).out;
    CHECK_THROWS_AS(fractional_power_general(l, 0.0), ContractError);
  }
}

TEST_CASE("matrix exponential") {
  SUBCASE("zero") { CHECK(matrix_exponential(Eigen::MatrixXd::Zero(3, 3)) == Eigen::MatrixXd::Identity(3, 3)); }
  SUBCASE("diagonal") {
    const Eigen::MatrixXd e = matrix_exponential(Eigen::MatrixXd(Eigen::Vector2d(1.5, -2).asDiagonal()));
    CHECK(e(0, 0) == doctest::Approx(std::exp(1.5)).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(e(0, 1) == 0.0);
  }
  SUBCASE("heat semigroup is stochastic") {
    const Eigen::MatrixXd l = combinatorial_laplacian(testing::cycle(4)).values();
    const Eigen::MatrixXd e = matrix_exponential(Eigen::MatrixXd(-l));
    CHECK((e.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-14);
    CHECK((e - series_exp(-l)).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("agrees with the series on random matrices") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      std::mt19937_64 rng(seed);
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 9);
      Eigen::MatrixXd m(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = 2.0 * testing::uniform01(rng) - 1.0;
      m *= (0.01 + 10.0 * testing::uniform01(rng)) / m.cwiseAbs().rowwise().sum().maxCoeff();
      const Eigen::MatrixXd oracle = series_exp(m);
      const Eigen::MatrixXd e = matrix_exponential(m);
      CHECK((e - oracle).norm() / oracle.norm() <= 1e-10);
    }
  }
  SUBCASE("overflow") {
    CHECK_THROWS_AS(matrix_exponential(Eigen::MatrixXd(Eigen::Vector2d(1000, 1).asDiagonal())), NumericError);
  }
}
