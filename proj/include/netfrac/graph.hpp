#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include "netfrac/dense_matrix.hpp"

namespace netfrac {

struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple weighted graph on nodes 0..n-1. Undirected graphs store each
/// unordered pair once; neighbor lists expand it both ways.
class Graph {
 public:
  /// Throws ContractError on out-of-range indices, self-loops, nonpositive
  /// weights, or duplicate edges (unordered pairs when undirected).
  Graph(std::size_t n, std::vector<Edge> edges, bool directed);

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool directed() const noexcept { return directed_; }

  /// Out-neighbors (all neighbors when undirected), ascending.
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return out_[v]; }
  /// In-neighbors; equals neighbors() when undirected.
  const std::vector<std::size_t>& in_neighbors(std::size_t v) const {
    return directed_ ? in_[v] : out_[v];
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  bool directed_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

// ---------------------------------------------------------------------------
// Ingestion

enum class GraphFormat { edge_list, matrix_market };

struct LoadOptions {
  GraphFormat format = GraphFormat::edge_list;
  /// Unset: edge lists load undirected; Matrix Market follows its header
  /// (symmetric -> undirected, general -> directed).
  std::optional<bool> directed;
};

/// Reads a graph with 1-based node indices. Edge lists are
/// "src dst [weight]" lines with '%' or '#' comments; the node count is the
/// largest index seen. Throws IoError for unreadable files and ParseError
/// (with line number) for malformed content, self-loops and duplicates.
Graph load_graph(const std::filesystem::path& path, const LoadOptions& options = {});

// ---------------------------------------------------------------------------
// Laplacians

struct DegreeMatrices {
  DenseMatrix adjacency;  ///< W; symmetric-tagged for undirected graphs
  DenseMatrix degree;     ///< D (for directed graphs: out + in degree)
  DenseMatrix in_degree;
  DenseMatrix out_degree;
};

DegreeMatrices adjacency_and_degrees(const Graph& g);

/// L = D - W. Undirected only.
DenseMatrix combinatorial_laplacian(const Graph& g);

struct DirectedLaplacians {
  DenseMatrix out;  ///< D_out - W, zero row sums
  DenseMatrix in;   ///< D_in - W, zero column sums
};

DirectedLaplacians directed_laplacians(const Graph& g);

struct NormalizedLaplacians {
  DenseMatrix random_walk;  ///< I - D^{-1} W
  DenseMatrix symmetric;    ///< I - D^{-1/2} W D^{-1/2}
};

/// Undirected graphs without isolated vertices.
NormalizedLaplacians normalized_laplacians(const Graph& g);

/// |V| x |E| signed incidence matrix scaled by sqrt(w). Column e has
/// -sqrt(w) at the source and +sqrt(w) at the target, so B B^T equals the
/// combinatorial Laplacian of the underlying undirected graph.
DenseMatrix incidence_matrix(const Graph& g);

// ---------------------------------------------------------------------------
// Distances and connectivity

/// Hop distances; unreachable pairs hold `unreachable`.
class DistanceMatrix {
 public:
  static constexpr std::size_t unreachable = std::numeric_limits<std::size_t>::max();

  DistanceMatrix(std::size_t n, std::vector<std::size_t> hops);

  std::size_t size() const noexcept { return n_; }
  std::size_t operator()(std::size_t u, std::size_t v) const { return hops_[u * n_ + v]; }
  bool reachable(std::size_t u, std::size_t v) const { return (*this)(u, v) != unreachable; }
  /// Largest finite distance.
  std::size_t diameter() const noexcept { return diameter_; }
  bool all_reachable() const noexcept { return all_reachable_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> hops_;
  std::size_t diameter_ = 0;
  bool all_reachable_ = true;
};

/// Breadth-first search from every source along edge direction; weights are
/// ignored.
DistanceMatrix all_pairs_distances(const Graph& g);

struct ConnectivityReport {
  /// Undirected: connected. Directed: weakly connected.
  bool connected = false;
  /// Directed graphs only; equals `connected` for undirected graphs.
  bool strongly_connected = false;
  /// (Weakly) connected components, each ascending, largest first.
  std::vector<std::vector<std::size_t>> components;
};

ConnectivityReport connectivity(const Graph& g);

struct Subgraph {
  Graph graph;
  /// original_index[i] is the node of the parent graph that became node i.
  std::vector<std::size_t> original_index;
};

/// Induced subgraph on the largest (weakly) connected component. Ties go to
/// the component containing the smallest node index.
Subgraph largest_component(const Graph& g);

// ---------------------------------------------------------------------------
// k-path Laplacians

/// (L_k)_{lj} = -1 when d(l, j) = k and the diagonal is the number of nodes at
/// distance exactly k, so L_k 1 = 0. Zero matrix for k > diameter.
/// Requires an undirected connected graph and k >= 1.
DenseMatrix k_path_laplacian(const Graph& g, std::size_t k);
DenseMatrix k_path_laplacian(const DistanceMatrix& distances, std::size_t k);

/// L_G(alpha) = L_1 + sum_{k >= 2} k^{-alpha} L_k, alpha >= 0.
DenseMatrix transformed_k_path_laplacian(const Graph& g, double alpha);
DenseMatrix transformed_k_path_laplacian(const DistanceMatrix& distances, double alpha);

}  // namespace netfrac
