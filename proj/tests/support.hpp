#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "netfrac/graph.hpp"

namespace netfrac::testing {

inline std::string data_path(const std::string& name) { return std::string(NETFRAC_DATA_DIR) + "/" + name; }

inline Graph cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
  return Graph(n, edges, false);
}

inline Graph karate() { return load_graph(data_path("karate.mtx"), {.format = GraphFormat::matrix_market}); }

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t draw(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

/// Random spanning tree plus `extra` distinct chords; unit weights unless
/// `weighted`.
inline Graph random_connected(std::size_t n, std::size_t extra, std::uint64_t seed,
                              bool weighted = false) {
  std::mt19937_64 rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Edge> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b) return false;
    const auto key = std::minmax(a, b);
    if (!seen.insert(key).second) return false;
    edges.push_back({a, b, weighted ? 0.5 + 2.0 * uniform01(rng) : 1.0});
    return true;
  };
  for (std::size_t v = 1; v < n; ++v) add(v, draw(rng, v));
  const std::size_t max_extra = n * (n - 1) / 2 - (n - 1);
  extra = std::min(extra, max_extra);
  while (extra > 0) {
    if (add(draw(rng, n), draw(rng, n))) --extra;
  }
  return Graph(n, edges, false);
}

/// Chung-Lu random graph: edge {i, j} with probability min(1, w_i w_j / sum w).
inline Graph chung_lu(const std::vector<double>& weights, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    for (std::size_t j = i + 1; j < weights.size(); ++j) {
      if (uniform01(rng) < std::min(1.0, weights[i] * weights[j] / total)) edges.push_back({i, j, 1.0});
    }
  }
  return Graph(weights.size(), edges, false);
}

/// Hub-dominated graph with the size, edge count and top degree of the 1997
/// US airline network (332 nodes, 2126 edges, maximum degree 139): expected
/// degrees 139 k^{-g} with g fitted to the edge count, largest component kept.
inline Graph airline_like(std::uint64_t seed) {
  constexpr std::size_t n = 332;
  auto total = [](double g) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += 139.0 * std::pow(static_cast<double>(k), -g);
    return s;
  };
  double lo = 0.1, hi = 1.5;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > 2.0 * 2126 ? lo : hi) = mid;
  }
  std::vector<double> w(n);
  for (std::size_t k = 1; k <= n; ++k) w[k - 1] = 139.0 * std::pow(static_cast<double>(k), -lo);
  return largest_component(chung_lu(w, seed)).graph;
}

/// Directed cycle 0 -> 1 -> ... -> 0 plus random weighted chords.
inline Graph strongly_connected_digraph(std::size_t n, std::size_t chords, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({i, (i + 1) % n, 1.0});
    seen.insert({i, (i + 1) % n});
  }
  while (chords > 0) {
    const std::size_t a = draw(rng, n), b = draw(rng, n);
    if (a == b || !seen.insert({a, b}).second) continue;
    edges.push_back({a, b, 0.5 + uniform01(rng)});
    --chords;
  }
  return Graph(n, edges, true);
}

/// Uniform on the probability simplex.
inline Eigen::VectorXcd random_distribution(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = -std::log1p(-uniform01(rng));
  v /= v.sum();
  return v.cast<std::complex<double>>();
}

/// Uniform on the complex unit sphere.
inline Eigen::VectorXcd random_unit_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::sqrt(-2.0 * std::log1p(-uniform01(rng)));
    v(i) = std::polar(r, 2.0 * M_PI * uniform01(rng));
  }
  return v / v.norm();
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace netfrac::testing
