#include <cmath>
#include <string>

#include "netfrac/errors.hpp"
#include "netfrac/graph.hpp"

namespace netfrac {

DenseMatrix::DenseMatrix(Eigen::MatrixXd values, Symmetry symmetry)
    : values_(std::move(values)), symmetry_(symmetry) {
  if (symmetry_ == Symmetry::symmetric) {
    if (values_.rows() != values_.cols()) {
      throw ContractError("symmetric-tagged matrix must be square");
    }
    values_.triangularView<Eigen::StrictlyLower>() = values_.transpose();
  }
}

double DenseMatrix::max_abs() const {
  return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff();
}

namespace {

Eigen::MatrixXd weight_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    w(e.source, e.target) = e.weight;
    if (!g.directed()) w(e.target, e.source) = e.weight;
  }
  return w;
}

void require_undirected(const Graph& g, const char* what) {
  if (g.directed()) {
    throw ContractError(std::string(what) + " requires an undirected graph");
  }
}

void require_connected_undirected(const Graph& g, const char* what) {
  require_undirected(g, what);
  if (!connectivity(g).connected) {
    throw ContractError(std::string(what) + " requires a connected graph");
  }
}

}  // namespace

DegreeMatrices adjacency_and_degrees(const Graph& g) {
  Eigen::MatrixXd w = weight_matrix(g);
  Eigen::VectorXd out = w.rowwise().sum();
  Eigen::VectorXd in = w.colwise().sum().transpose();
  if (!g.directed()) {
    DenseMatrix d(Eigen::MatrixXd(out.asDiagonal()), Symmetry::symmetric);
    return {DenseMatrix(std::move(w), Symmetry::symmetric), d, d, d};
  }
  return {DenseMatrix(std::move(w)),
          DenseMatrix(Eigen::MatrixXd((out + in).asDiagonal()), Symmetry::symmetric),
          DenseMatrix(Eigen::MatrixXd(in.asDiagonal()), Symmetry::symmetric),
          DenseMatrix(Eigen::MatrixXd(out.asDiagonal()), Symmetry::symmetric)};
}

DenseMatrix combinatorial_laplacian(const Graph& g) {
  if (g.directed()) {
    throw ContractError("combinatorial_laplacian requires an undirected graph; "
                        "use directed_laplacians");
  }
  const Eigen::MatrixXd w = weight_matrix(g);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(w.rows(), w.cols()) - w;
  for (Eigen::Index i = 0; i < l.rows(); ++i) l(i, i) = -l.row(i).sum();
  return DenseMatrix::symmetric(std::move(l));
}

DirectedLaplacians directed_laplacians(const Graph& g) {
  if (!g.directed()) throw ContractError("directed_laplacians requires a directed graph");
  Eigen::MatrixXd w = weight_matrix(g);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(w.rows(), w.cols()) - w;
  Eigen::MatrixXd in = out;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    out(i, i) = -out.row(i).sum();
    in(i, i) = -in.col(i).sum();
  }
  return {DenseMatrix(std::move(out)), DenseMatrix(std::move(in))};
}

NormalizedLaplacians normalized_laplacians(const Graph& g) {
  require_undirected(g, "normalized_laplacians");
  Eigen::MatrixXd w = weight_matrix(g);
  Eigen::VectorXd d = w.rowwise().sum();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) == 0.0) {
      throw ContractError("vertex " + std::to_string(i + 1) +
                          " is isolated; normalized Laplacians need nonzero degrees");
    }
  }
  const auto n = w.rows();
  Eigen::VectorXd inv = d.cwiseInverse();
  Eigen::VectorXd inv_sqrt = d.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd rw = Eigen::MatrixXd::Identity(n, n) - inv.asDiagonal() * w;
  Eigen::MatrixXd sym =
      Eigen::MatrixXd::Identity(n, n) - inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
  return {DenseMatrix(std::move(rw)), DenseMatrix::symmetric(std::move(sym))};
}

DenseMatrix incidence_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const auto m = static_cast<Eigen::Index>(g.edge_count());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Edge& e = g.edges()[k];
    const double s = std::sqrt(e.weight);
    b(e.source, k) = -s;
    b(e.target, k) = s;
  }
  return DenseMatrix(std::move(b));
}

// ---------------------------------------------------------------------------

DenseMatrix k_path_laplacian(const Graph& g, std::size_t k) {
  require_connected_undirected(g, "k_path_laplacian");
  return k_path_laplacian(all_pairs_distances(g), k);
}

DenseMatrix k_path_laplacian(const DistanceMatrix& distances, std::size_t k) {
  if (k == 0) throw ContractError("k_path_laplacian requires k >= 1");
  if (!distances.all_reachable()) throw ContractError("k_path_laplacian requires a connected graph");
  const auto n = static_cast<Eigen::Index>(distances.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double degree = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && distances(i, j) == k) {
        l(i, j) = -1.0;
        degree += 1.0;
      }
    }
    l(i, i) = degree;
  }
  return DenseMatrix::symmetric(std::move(l));
}

DenseMatrix transformed_k_path_laplacian(const Graph& g, double alpha) {
  require_connected_undirected(g, "transformed_k_path_laplacian");
  return transformed_k_path_laplacian(all_pairs_distances(g), alpha);
}

DenseMatrix transformed_k_path_laplacian(const DistanceMatrix& distances, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ContractError("transformed k-path Laplacian requires a finite alpha >= 0");
  }
  if (!distances.all_reachable()) {
    throw ContractError("transformed_k_path_laplacian requires a connected graph");
  }
  const auto n = static_cast<Eigen::Index>(distances.size());
  // Mellin weights k^{-alpha} per hop distance, tabulated once.
  std::vector<double> weight(distances.diameter() + 1, 0.0);
  for (std::size_t k = 1; k < weight.size(); ++k) {
    weight[k] = std::pow(static_cast<double>(k), -alpha);
  }
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) l(i, j) = -weight[distances(i, j)];
    }
    l(i, i) = -l.row(i).sum();
  }
  return DenseMatrix::symmetric(std::move(l));
}

}  // namespace netfrac
