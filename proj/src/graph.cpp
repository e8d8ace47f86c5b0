#include "netfrac/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "netfrac/errors.hpp"

namespace netfrac {

Graph::Graph(std::size_t n, std::vector<Edge> edges, bool directed)
    : n_(n), edges_(std::move(edges)), directed_(directed), out_(n), in_(directed ? n : 0) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Edge& e : edges_) {
    if (e.source >= n_ || e.target >= n_) {
      throw ContractError("edge (" + std::to_string(e.source) + ", " + std::to_string(e.target) +
                          ") out of range for " + std::to_string(n_) + " nodes");
    }
    if (e.source == e.target) {
      throw ContractError("self-loop at node " + std::to_string(e.source));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ContractError("edge weight must be positive and finite");
    }
    auto key = directed_ ? std::pair{e.source, e.target}
                         : std::pair{std::min(e.source, e.target), std::max(e.source, e.target)};
    if (!seen.insert(key).second) {
      throw ContractError("duplicate edge (" + std::to_string(e.source) + ", " +
                          std::to_string(e.target) + ")");
    }
    out_[e.source].push_back(e.target);
    if (directed_) {
      in_[e.target].push_back(e.source);
    } else {
      out_[e.target].push_back(e.source);
    }
  }
  for (auto& list : out_) std::sort(list.begin(), list.end());
  for (auto& list : in_) std::sort(list.begin(), list.end());
}

// ---------------------------------------------------------------------------

namespace {

struct RawEdge {
  std::size_t source;
  std::size_t target;
  double weight;
  std::size_t line;
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

std::size_t parse_index(const std::string& text, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("invalid node index '" + text + "'", line);
  }
  if (value == 0) throw ParseError("node indices are 1-based, got 0", line);
  return value - 1;
}

double parse_weight(const std::string& text, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("invalid weight '" + text + "'", line);
  }
  if (!(value > 0.0)) throw ParseError("edge weight must be positive", line);
  return value;
}

Graph assemble(std::size_t n, const std::vector<RawEdge>& raw, bool directed) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw) {
    if (e.source == e.target) {
      throw ParseError("self-loop at node " + std::to_string(e.source + 1), e.line);
    }
    auto key = directed ? std::pair{e.source, e.target}
                        : std::pair{std::min(e.source, e.target), std::max(e.source, e.target)};
    if (!seen.insert(key).second) {
      throw ParseError("duplicate edge " + std::to_string(e.source + 1) + " " +
                           std::to_string(e.target + 1),
                       e.line);
    }
    edges.push_back({e.source, e.target, e.weight});
  }
  return Graph(n, std::move(edges), directed);
}

Graph read_edge_list(std::istream& in, const LoadOptions& options) {
  std::vector<RawEdge> raw;
  std::size_t n = 0;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    auto fields = split_fields(line);
    if (fields.empty() || fields[0][0] == '%' || fields[0][0] == '#') continue;
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("expected 'src dst [weight]'", lineno);
    }
    RawEdge e{parse_index(fields[0], lineno), parse_index(fields[1], lineno), 1.0, lineno};
    if (fields.size() == 3) e.weight = parse_weight(fields[2], lineno);
    n = std::max({n, e.source + 1, e.target + 1});
    raw.push_back(e);
  }
  return assemble(n, raw, options.directed.value_or(false));
}

Graph read_matrix_market(std::istream& in, const LoadOptions& options) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty Matrix Market file", 1);
  auto header = split_fields(line);
  for (auto& h : header) std::transform(h.begin(), h.end(), h.begin(), ::tolower);
  if (header.size() != 5 || header[0] != "%%matrixmarket" || header[1] != "matrix" ||
      header[2] != "coordinate") {
    throw ParseError("expected '%%MatrixMarket matrix coordinate <field> <symmetry>'", 1);
  }
  const std::string& field = header[3];
  const std::string& symmetry = header[4];
  if (field != "real" && field != "pattern" && field != "integer") {
    throw ParseError("unsupported field '" + field + "'", 1);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError("unsupported symmetry '" + symmetry + "'", 1);
  }
  const bool pattern = field == "pattern";
  const bool directed = options.directed.value_or(symmetry == "general");

  std::size_t rows = 0, cols = 0, entries = 0;
  bool have_size = false;
  std::vector<RawEdge> raw;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(line);
    if (fields.empty() || fields[0][0] == '%') continue;
    if (!have_size) {
      if (fields.size() != 3) throw ParseError("expected 'rows cols entries'", lineno);
      rows = parse_index(fields[0], lineno) + 1;
      cols = parse_index(fields[1], lineno) + 1;
      std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), entries);
      if (rows != cols) throw ParseError("adjacency matrix must be square", lineno);
      have_size = true;
      raw.reserve(entries);
      continue;
    }
    if (fields.size() != (pattern ? 2u : 3u)) {
      throw ParseError(pattern ? "expected 'row col'" : "expected 'row col value'", lineno);
    }
    RawEdge e{parse_index(fields[0], lineno), parse_index(fields[1], lineno), 1.0, lineno};
    if (!pattern) e.weight = parse_weight(fields[2], lineno);
    if (e.source >= rows || e.target >= rows) throw ParseError("index out of range", lineno);
    raw.push_back(e);
  }
  if (!have_size) throw ParseError("missing size line", lineno);
  if (raw.size() != entries) {
    throw ParseError("expected " + std::to_string(entries) + " entries, found " +
                         std::to_string(raw.size()),
                     lineno);
  }
  return assemble(rows, raw, directed);
}

}  // namespace

Graph load_graph(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file '" + path.string() + "'");
  return options.format == GraphFormat::edge_list ? read_edge_list(in, options)
                                                  : read_matrix_market(in, options);
}

// ---------------------------------------------------------------------------

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<std::size_t> hops)
    : n_(n), hops_(std::move(hops)) {
  for (std::size_t d : hops_) {
    if (d == unreachable) {
      all_reachable_ = false;
    } else {
      diameter_ = std::max(diameter_, d);
    }
  }
}

DistanceMatrix all_pairs_distances(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> hops(n * n, DistanceMatrix::unreachable);
  std::vector<std::size_t> frontier;
  frontier.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t* row = hops.data() + s * n;
    row[s] = 0;
    frontier.assign(1, s);
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const std::size_t u = frontier[head];
      for (std::size_t v : g.neighbors(u)) {
        if (row[v] == DistanceMatrix::unreachable) {
          row[v] = row[u] + 1;
          frontier.push_back(v);
        }
      }
    }
  }
  return DistanceMatrix(n, std::move(hops));
}

namespace {

std::vector<bool> reach(const Graph& g, std::size_t start, bool forward) {
  std::vector<bool> seen(g.node_count(), false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : forward ? g.neighbors(u) : g.in_neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

ConnectivityReport connectivity(const Graph& g) {
  const std::size_t n = g.node_count();
  ConnectivityReport report;
  std::vector<std::size_t> label(n, n);
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    std::vector<std::size_t> component{s};
    label[s] = report.components.size();
    for (std::size_t head = 0; head < component.size(); ++head) {
      std::size_t u = component[head];
      auto visit = [&](std::size_t v) {
        if (label[v] == n) {
          label[v] = report.components.size();
          component.push_back(v);
        }
      };
      for (std::size_t v : g.neighbors(u)) visit(v);
      for (std::size_t v : g.in_neighbors(u)) visit(v);
    }
    std::sort(component.begin(), component.end());
    report.components.push_back(std::move(component));
  }
  std::stable_sort(report.components.begin(), report.components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  report.connected = report.components.size() <= 1;
  if (!g.directed() || n == 0) {
    report.strongly_connected = report.connected;
  } else {
    auto fwd = reach(g, 0, true);
    auto bwd = reach(g, 0, false);
    report.strongly_connected =
        std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
        std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
  }
  return report;
}

Subgraph largest_component(const Graph& g) {
  auto report = connectivity(g);
  if (report.components.empty()) return {Graph(0, {}, g.directed()), {}};
  const auto& nodes = report.components.front();
  std::vector<std::size_t> relabel(g.node_count(), DistanceMatrix::unreachable);
  for (std::size_t i = 0; i < nodes.size(); ++i) relabel[nodes[i]] = i;
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (relabel[e.source] != DistanceMatrix::unreachable) {
      edges.push_back({relabel[e.source], relabel[e.target], e.weight});
    }
  }
  return {Graph(nodes.size(), std::move(edges), g.directed()), nodes};
}

}  // namespace netfrac
