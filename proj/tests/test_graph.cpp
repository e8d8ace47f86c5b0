#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "netfrac/errors.hpp"
#include "netfrac/graph.hpp"
#include "support.hpp"
#include "temp_dir.hpp"

using namespace netfrac;
using netfrac::testing::TempDir;

namespace {

Graph directed_path3() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}, true); }

// Floyd-Warshall on hop counts.
std::vector<std::vector<double>> floyd(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, INFINITY));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) {
    d[e.source][e.target] = 1;
    if (!g.directed()) d[e.target][e.source] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("edge list loading") {
  TempDir dir;
  SUBCASE("cycle") {
    const Graph g = load_graph(dir.file("c4.txt", "1 2\n2 3\n3 4\n4 1\n"));
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 4);
    CHECK_FALSE(g.directed());
    CHECK(g.edges()[0].weight == 1.0);
  }
  SUBCASE("comments, weights and forced direction") {
    const Graph g = load_graph(dir.file("w.txt", "% header\n# note\n1 2 3.5\n\n2 3\n"),
                               {.directed = true});
    CHECK(g.directed());
    REQUIRE(g.edge_count() == 2);
    CHECK(g.edges()[0].weight == 3.5);
    CHECK(g.neighbors(1) == std::vector<std::size_t>{2});
    CHECK(g.in_neighbors(1) == std::vector<std::size_t>{0});
  }
  SUBCASE("self-loop is rejected with its line") {
    try {
      load_graph(dir.file("loop.txt", "1 2\n2 2\n"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("duplicates in either orientation") {
    CHECK_THROWS_AS(load_graph(dir.file("d.txt", "1 2\n2 1\n")), ParseError);
    CHECK_NOTHROW(load_graph(dir.file("d2.txt", "1 2\n2 1\n"), {.directed = true}));
  }
  SUBCASE("malformed lines") {
    try {
      load_graph(dir.file("bad.txt", "1 2\n3 x\n"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(load_graph(dir.file("zero.txt", "0 1\n")), ParseError);
    CHECK_THROWS_AS(load_graph(dir.file("neg.txt", "1 2 -1\n")), ParseError);
    CHECK_THROWS_AS(load_graph(dir.file("one.txt", "1\n")), ParseError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_graph(dir / "absent.txt"), IoError); }
}

TEST_CASE("matrix market loading") {
  TempDir dir;
  SUBCASE("karate club") {
    const Graph g = testing::karate();
    CHECK(g.node_count() == 34);
    CHECK(g.edge_count() == 78);
    CHECK_FALSE(g.directed());
  }
  SUBCASE("real general is directed") {
    const Graph g = load_graph(
        dir.file("g.mtx", "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 2 0.5\n2 3 2\n"),
        {.format = GraphFormat::matrix_market});
    CHECK(g.directed());
    CHECK(g.edges()[0].weight == 0.5);
  }
  SUBCASE("entry count mismatch") {
    CHECK_THROWS_AS(load_graph(dir.file("m.mtx", "%%MatrixMarket matrix coordinate pattern symmetric\n"
                                                 "3 3 3\n2 1\n3 2\n"),
                               {.format = GraphFormat::matrix_market}),
                    ParseError);
  }
  SUBCASE("bad header") {
    CHECK_THROWS_AS(load_graph(dir.file("h.mtx", "%%MatrixMarket matrix array real general\n"),
                               {.format = GraphFormat::matrix_market}),
                    ParseError);
  }
}

TEST_CASE("graph construction invariants") {
  CHECK_THROWS_AS(Graph(2, {{0, 0, 1.0}}, false), ContractError);
  CHECK_THROWS_AS(Graph(2, {{0, 2, 1.0}}, false), ContractError);
  CHECK_THROWS_AS(Graph(2, {{0, 1, 0.0}}, false), ContractError);
  CHECK_THROWS_AS(Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, false), ContractError);
}

TEST_CASE("adjacency and degrees") {
  SUBCASE("cycle") {
    const auto m = adjacency_and_degrees(testing::cycle(4));
    CHECK(m.degree.values() == 2.0 * Eigen::MatrixXd::Identity(4, 4));
    CHECK(m.adjacency(0, 1) == 1.0);
    CHECK(m.adjacency(0, 3) == 1.0);
    CHECK(m.adjacency(0, 2) == 0.0);
    CHECK(m.in_degree.values() == m.out_degree.values());
    CHECK(m.adjacency.is_symmetric());
  }
  SUBCASE("directed path") {
    const auto m = adjacency_and_degrees(directed_path3());
    CHECK(m.out_degree.values().diagonal() == Eigen::Vector3d(1, 1, 0));
    CHECK(m.in_degree.values().diagonal() == Eigen::Vector3d(0, 1, 1));
  }
  SUBCASE("weighted edge") {
    const auto m = adjacency_and_degrees(Graph(2, {{0, 1, 3.0}}, false));
    CHECK(m.degree.values() == 3.0 * Eigen::Matrix2d::Identity());
  }
}

TEST_CASE("combinatorial Laplacian") {
  SUBCASE("cycle") {
    const auto l = combinatorial_laplacian(testing::cycle(4));
    CHECK(l.is_symmetric());
    for (int i = 0; i < 4; ++i) {
      CHECK(l(i, i) == 2.0);
      CHECK(l(i, (i + 1) % 4) == -1.0);
      CHECK(l(i, (i + 2) % 4) == 0.0);
    }
  }
  SUBCASE("single edge") {
    Eigen::Matrix2d expected;
    expected << 1, -1, -1, 1;
    CHECK(combinatorial_laplacian(Graph(2, {{0, 1, 1.0}}, false)).values() == expected);
  }
  SUBCASE("karate rows sum to zero exactly") {
    const auto l = combinatorial_laplacian(testing::karate());
    CHECK(l.rows() == 34);
    CHECK(l.values().rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("directed input") { CHECK_THROWS_AS(combinatorial_laplacian(directed_path3()), ContractError); }
}

TEST_CASE("directed Laplacians") {
  SUBCASE("2-cycle") {
    const auto d = directed_laplacians(Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, true));
    Eigen::Matrix2d expected;
    expected << 1, -1, -1, 1;
    CHECK(d.out.values() == expected);
  }
  SUBCASE("path has an empty last row") {
    const auto d = directed_laplacians(directed_path3());
    CHECK(d.out.values().row(2).cwiseAbs().sum() == 0.0);
  }
  SUBCASE("random digraphs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto d = directed_laplacians(testing::strongly_connected_digraph(5, 6, seed));
      CHECK(d.out.values().rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(d.in.values().colwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
    }
    const auto unit = directed_laplacians(Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}, {0, 2, 1.0}}, true));
    CHECK(unit.out.values().rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("undirected input") { CHECK_THROWS_AS(directed_laplacians(testing::cycle(4)), ContractError); }
}

TEST_CASE("normalized Laplacians") {
  SUBCASE("cycle") {
    const Graph g = testing::cycle(4);
    const auto n = normalized_laplacians(g);
    const Eigen::MatrixXd a = adjacency_and_degrees(g).adjacency.values();
    CHECK((n.random_walk.values() - (Eigen::MatrixXd::Identity(4, 4) - a / 2)).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd walk = Eigen::MatrixXd::Identity(4, 4) - n.random_walk.values();
    CHECK((walk.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-15);
    CHECK(n.symmetric.is_symmetric());
  }
  SUBCASE("single edge") {
    Eigen::Matrix2d expected;
    expected << 1, -1, -1, 1;
    CHECK(normalized_laplacians(Graph(2, {{0, 1, 1.0}}, false)).random_walk.values() == expected);
  }
  SUBCASE("random walk rows are stochastic on weighted graphs") {
    const auto n = normalized_laplacians(testing::random_connected(15, 20, 3, true));
    const Eigen::MatrixXd walk = Eigen::MatrixXd::Identity(15, 15) - n.random_walk.values();
    CHECK((walk.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-14);
  }
  SUBCASE("isolated vertex is named") {
    const auto msg = error_of([] { normalized_laplacians(Graph(3, {{0, 1, 1.0}}, false)); });
    CHECK(msg.find("vertex 3") != std::string::npos);
  }
}

TEST_CASE("incidence matrix") {
  SUBCASE("single edge") {
    const auto b = incidence_matrix(Graph(2, {{0, 1, 1.0}}, false)).values();
    CHECK(b.cols() == 1);
    CHECK(b(0, 0) == -b(1, 0));
    CHECK(std::abs(b(0, 0)) == 1.0);
  }
  SUBCASE("empty edge set") {
    const Graph g(3, {}, false);
    const auto b = incidence_matrix(g).values();
    CHECK(b.rows() == 3);
    CHECK(b.cols() == 0);
    CHECK((b * b.transpose() - combinatorial_laplacian(g).values()).cwiseAbs().sum() == 0.0);
  }
  SUBCASE("B B^T = L on random weighted graphs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Graph g = testing::random_connected(5 + 4 * seed, 3 * seed, seed, true);
      const auto b = incidence_matrix(g).values();
      CHECK((b * b.transpose() - combinatorial_laplacian(g).values()).cwiseAbs().maxCoeff() <= 1e-12);
    }
    const Graph c4 = testing::cycle(4);
    const auto b = incidence_matrix(c4).values();
    CHECK((b * b.transpose() - combinatorial_laplacian(c4).values()).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("directed sign convention") {
    const auto b = incidence_matrix(Graph(2, {{1, 0, 4.0}}, true)).values();
    CHECK(b(1, 0) == -2.0);
    CHECK(b(0, 0) == 2.0);
  }
}

TEST_CASE("all-pairs distances") {
  SUBCASE("cycle") {
    const auto d = all_pairs_distances(testing::cycle(4));
    CHECK(d.diameter() == 2);
    CHECK(d(0, 0) == 0);
    CHECK(d(0, 1) == 1);
    CHECK(d(0, 2) == 2);
    CHECK(d(0, 3) == 1);
  }
  SUBCASE("two components") {
    const auto d = all_pairs_distances(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}, false));
    CHECK_FALSE(d.reachable(0, 2));
    CHECK(d(1, 3) == DistanceMatrix::unreachable);
    CHECK_FALSE(d.all_reachable());
    CHECK(d.diameter() == 1);
  }
  SUBCASE("directed reachability follows edges") {
    const auto d = all_pairs_distances(directed_path3());
    CHECK(d(0, 2) == 2);
    CHECK_FALSE(d.reachable(2, 0));
  }
  SUBCASE("karate is connected") {
    const auto d = all_pairs_distances(testing::karate());
    CHECK(d.all_reachable());
    CHECK(d.diameter() == 5);
  }
  SUBCASE("matches Floyd-Warshall and satisfies the triangle inequality") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const Graph g = seed % 2 ? testing::random_connected(25, seed * 2, seed)
                               : testing::strongly_connected_digraph(12, seed, seed);
      const auto d = all_pairs_distances(g);
      const auto oracle = floyd(g);
      const std::size_t n = g.node_count();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          REQUIRE(static_cast<double>(d(i, j)) == oracle[i][j]);
          if (!g.directed()) CHECK(d(i, j) == d(j, i));
          for (std::size_t k = 0; k < n; ++k) CHECK(d(i, j) <= d(i, k) + d(k, j));
        }
      }
    }
  }
}

TEST_CASE("connectivity") {
  SUBCASE("cycle") {
    const auto r = connectivity(testing::cycle(4));
    CHECK(r.connected);
    CHECK(r.strongly_connected);
    CHECK(r.components.size() == 1);
  }
  SUBCASE("directed path") {
    const auto r = connectivity(directed_path3());
    CHECK(r.connected);
    CHECK_FALSE(r.strongly_connected);
  }
  SUBCASE("strongly connected digraph") {
    CHECK(connectivity(testing::strongly_connected_digraph(10, 5, 2)).strongly_connected);
  }
  SUBCASE("largest component extraction") {
    // A triangle {2, 4, 6}, an edge {1, 3} and an isolated node 5 (0-based).
    const Graph g(7, {{2, 4, 1.0}, {4, 6, 2.0}, {6, 2, 1.0}, {1, 3, 1.0}}, false);
    const auto r = connectivity(g);
    CHECK_FALSE(r.connected);
    REQUIRE(r.components.size() == 4);
    CHECK(r.components[0] == std::vector<std::size_t>{2, 4, 6});
    const auto sub = largest_component(g);
    CHECK(sub.graph.node_count() == 3);
    CHECK(sub.graph.edge_count() == 3);
    CHECK(sub.original_index == std::vector<std::size_t>{2, 4, 6});
    CHECK(connectivity(sub.graph).connected);
  }
}

TEST_CASE("k-path Laplacians") {
  const Graph c4 = testing::cycle(4);
  SUBCASE("cycle, k = 2") {
    const auto l = k_path_laplacian(c4, 2);
    for (int i = 0; i < 4; ++i) {
      CHECK(l(i, i) == 1.0);
      CHECK(l(i, (i + 2) % 4) == -1.0);
      CHECK(l(i, (i + 1) % 4) == 0.0);
    }
  }
  SUBCASE("beyond the diameter") { CHECK(k_path_laplacian(c4, 3).max_abs() == 0.0); }
  SUBCASE("k = 1 is the combinatorial Laplacian") {
    const Graph g = testing::random_connected(20, 15, 4);
    CHECK(k_path_laplacian(g, 1).values() == combinatorial_laplacian(g).values());
  }
  SUBCASE("rows sum to zero exactly") {
    const Graph g = testing::random_connected(30, 10, 5);
    const auto d = all_pairs_distances(g);
    for (std::size_t k = 1; k <= d.diameter() + 1; ++k) {
      CHECK(k_path_laplacian(d, k).values().rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(k_path_laplacian(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}, false), 1), ContractError);
    CHECK_THROWS_AS(k_path_laplacian(c4, 0), ContractError);
    CHECK_THROWS_AS(k_path_laplacian(directed_path3(), 1), ContractError);
  }
}

TEST_CASE("transformed k-path Laplacian") {
  const Graph c4 = testing::cycle(4);
  SUBCASE("cycle, alpha = 1") {
    const auto l = transformed_k_path_laplacian(c4, 1.0);
    CHECK(l(0, 0) == 2.5);
    CHECK(l(0, 1) == -1.0);
    CHECK(l(0, 2) == -0.5);
  }
  SUBCASE("cycle eigenvalues") {
    for (double a : {0.0, 0.3, 1.0, 2.5}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(transformed_k_path_laplacian(c4, a).values());
      const double mid = std::pow(2.0, 1 - a) * (std::pow(2.0, a) + 1);
      std::vector<double> expected = {0.0, 4.0, mid, mid};
      std::sort(expected.begin(), expected.end());
      for (int i = 0; i < 4; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expected[i]).epsilon(1e-12));
    }
  }
  SUBCASE("large alpha approaches the combinatorial Laplacian") {
    const auto diff = transformed_k_path_laplacian(c4, 30.0).values() - combinatorial_laplacian(c4).values();
    CHECK(diff.cwiseAbs().maxCoeff() <= 1e-8);
  }
  SUBCASE("symmetric positive semidefinite with zero row sums") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto l = transformed_k_path_laplacian(testing::random_connected(25, seed * 3, seed), 0.2 * seed);
      CHECK(l.is_symmetric());
      CHECK(l.values().rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l.values());
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
  }
  SUBCASE("alpha must be nonnegative") {
    CHECK_THROWS_AS(transformed_k_path_laplacian(c4, -0.1), ContractError);
  }
}

TEST_CASE("M-matrix sign pattern") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = testing::random_connected(10 + seed, seed * 2, seed, seed % 2 == 0);
    const auto l = combinatorial_laplacian(g).values();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      double off = 0.0;
      for (Eigen::Index j = 0; j < l.cols(); ++j) {
        if (i == j) continue;
        CHECK(l(i, j) <= 0.0);
        off += -l(i, j);
      }
      CHECK(l(i, i) >= 0.0);
      CHECK(l(i, i) >= off - 1e-12);
    }
  }
}
