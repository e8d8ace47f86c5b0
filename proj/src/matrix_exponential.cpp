#include <array>
#include <cmath>

#include <Eigen/LU>

#include "netfrac/matfun.hpp"

namespace netfrac {

namespace {

// Pade approximant [m/m] of exp evaluated as (V - U)^{-1} (V + U), with the
// degree-selection thresholds for double precision.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr std::array<double, 4> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
Eigen::MatrixXd pade(const Eigen::MatrixXd& a, const std::array<double, N>& b) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd u_inner = b[1] * ident;
  Eigen::MatrixXd v = b[0] * ident;
  Eigen::MatrixXd power = ident;
  for (std::size_t k = 1; 2 * k < N; ++k) {
    power = (power * a2).eval();
    u_inner += b[2 * k + 1] * power;
    v += b[2 * k] * power;
  }
  const Eigen::MatrixXd u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * ident);
  const Eigen::MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
      b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ContractError("matrix_exponential requires a square matrix");
  if (m.size() == 0) return m;
  if (!m.allFinite()) throw NumericError("matrix_exponential input is not finite");
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 <= kTheta[0]) return pade(m, kPade3);
  if (norm1 <= kTheta[1]) return pade(m, kPade5);
  if (norm1 <= kTheta[2]) return pade(m, kPade7);
  if (norm1 <= kTheta[3]) return pade(m, kPade9);

  const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
  Eigen::MatrixXd r = pade13(m * std::ldexp(1.0, -squarings));
  for (int k = 0; k < squarings; ++k) r = (r * r).eval();
  if (!r.allFinite()) throw NumericError("matrix exponential overflowed");
  return r;
}

}  // namespace netfrac
