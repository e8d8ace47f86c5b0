#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netfrac/dynamics.hpp"
#include "netfrac/graph.hpp"
#include "netfrac/io.hpp"

namespace netfrac {

enum class LaplacianKind { combinatorial, out, in, normalized_rw, normalized_sym, k_path };

LaplacianKind parse_laplacian_kind(std::string_view text);

/// Initial state: seeded random draw, uniform vector, a single node, or
/// (Schrodinger only) uniform amplitude with random phases.
enum class InitialKind { random, uniform, node, phase };

struct RunConfig {
  std::string command;
  std::filesystem::path graph;
  std::optional<GraphFormat> graph_format;  ///< inferred from the extension when unset
  std::optional<bool> directed;
  bool largest_component = false;
  LaplacianKind laplacian = LaplacianKind::combinatorial;
  double kpath_alpha = 1.0;
  Model model = Model::heat;
  std::string alpha = "const:1";
  IntegratorConfig integrator;
  double horizon = 10.0;
  std::uint64_t seed = 1;
  InitialKind initial = InitialKind::random;
  std::size_t initial_node = 1;  ///< 1-based
  std::optional<double> period;  ///< floquet override
  std::filesystem::path out;     ///< empty: standard output
  OutputFormat out_format = OutputFormat::csv;
};

/// Keys are the long flag names without dashes ("t-end", "graph-format", ...).
/// Unknown keys are a ContractError.
void apply_config_json(RunConfig& cfg, std::string_view json_text);

/// Rejects inconsistent settings before anything is computed or written.
void validate(const RunConfig& cfg);

/// Loads the graph, applying the largest-component restriction.
Graph load_run_graph(const RunConfig& cfg);

/// Heat: uniform on the simplex. Schrodinger: uniform on the complex unit
/// sphere. Deterministic in the seed.
Eigen::VectorXcd initial_state(const RunConfig& cfg, Eigen::Index n);

DynamicsProblem build_problem(const RunConfig& cfg, const Graph& g);

/// Executes cfg.command and returns the process exit status: 0 success,
/// 2 configuration or contract error, 3 numeric failure, 4 input/output or
/// parse failure. Messages go to `err`; results to cfg.out or `out`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Command-line entry: parses args (without the program name), merges an
/// optional --config file (flags win) and calls run().
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netfrac
