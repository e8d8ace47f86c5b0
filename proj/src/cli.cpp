#include "netfrac/cli.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "netfrac/matfun.hpp"
#include "netfrac/number_format.hpp"

namespace netfrac {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands = {"laplacian", "power",    "kpath", "spectrum",
                                            "simulate",  "decay",    "floquet"};

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ContractError(std::string(what) + " must be a nonnegative integer, got '" +
                        std::string(text) + "'");
  }
  return value;
}

GraphFormat parse_graph_format(std::string_view text) {
  if (text == "edgelist") return GraphFormat::edge_list;
  if (text == "mtx") return GraphFormat::matrix_market;
  throw ContractError("unknown graph format '" + std::string(text) + "' (expected edgelist or mtx)");
}

Model parse_model(std::string_view text) {
  if (text == "heat") return Model::heat;
  if (text == "schrodinger") return Model::schrodinger;
  throw ContractError("unknown model '" + std::string(text) + "' (expected heat or schrodinger)");
}

Method parse_method(std::string_view text) {
  if (text == "rk45") return Method::rk45;
  if (text == "bdf") return Method::bdf;
  if (text == "exact") return Method::exact;
  throw ContractError("unknown integrator '" + std::string(text) +
                      "' (expected rk45, bdf or exact)");
}

void parse_initial(RunConfig& cfg, std::string_view text) {
  if (text == "random") {
    cfg.initial = InitialKind::random;
  } else if (text == "uniform") {
    cfg.initial = InitialKind::uniform;
  } else if (text == "phase") {
    cfg.initial = InitialKind::phase;
  } else if (text.starts_with("node:")) {
    cfg.initial = InitialKind::node;
    cfg.initial_node = parse_unsigned(text.substr(5), "initial node");
  } else {
    throw ContractError("unknown initial state '" + std::string(text) +
                        "' (expected random, uniform, phase or node:<k>)");
  }
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ContractError("expected a boolean, got '" + std::string(text) + "'");
}

const char* model_name(Model m) { return m == Model::heat ? "heat" : "schrodinger"; }

const char* method_name(Method m) {
  switch (m) {
    case Method::rk45: return "rk45";
    case Method::bdf: return "bdf";
    case Method::exact: return "exact";
  }
  return "";
}

// Constant exponent for `power`: a bare number or a const schedule.
double constant_alpha(std::string_view text) {
  if (!text.empty() && text.find(':') == std::string_view::npos) {
    const double a = parse_double(text);
    if (!(a > 0.0 && a <= 1.0)) throw ContractError("alpha must lie in (0, 1]");
    return a;
  }
  const auto s = parse_schedule(text);
  const auto* c = std::get_if<ConstantSchedule>(&s.family());
  if (!c) throw ContractError("power needs a constant exponent");
  return c->value;
}

bool needs_directed(LaplacianKind k) { return k == LaplacianKind::out || k == LaplacianKind::in; }

DenseMatrix laplacian_matrix(const RunConfig& cfg, const Graph& g) {
  if (needs_directed(cfg.laplacian) != g.directed()) {
    throw ContractError(g.directed() ? "this Laplacian kind needs an undirected graph"
                                     : "out/in Laplacians need a directed graph");
  }
  switch (cfg.laplacian) {
    case LaplacianKind::combinatorial: return combinatorial_laplacian(g);
    case LaplacianKind::out: return directed_laplacians(g).out;
    case LaplacianKind::in: return directed_laplacians(g).in;
    case LaplacianKind::normalized_rw: return normalized_laplacians(g).random_walk;
    case LaplacianKind::normalized_sym: return normalized_laplacians(g).symmetric;
    case LaplacianKind::k_path: return transformed_k_path_laplacian(g, cfg.kpath_alpha);
  }
  throw ContractError("unknown Laplacian kind");
}

Generator build_generator(const RunConfig& cfg, const Graph& g) {
  if (cfg.laplacian == LaplacianKind::k_path) {
    if (g.directed()) throw ContractError("the k-path Laplacian needs an undirected graph");
    return Generator::k_path(g);
  }
  return Generator::fractional(laplacian_matrix(cfg, g));
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_text(cfg.out, text);
  }
}

std::string lines_of(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += format_double(v(i)) + '\n';
  return s;
}

json stats_json(const RunConfig& cfg, const Graph& g, const Trajectory& traj) {
  json s;
  s["command"] = cfg.command;
  s["model"] = model_name(traj.model);
  s["integrator"] = method_name(cfg.integrator.method);
  s["schedule"] = cfg.alpha;
  s["nodes"] = g.node_count();
  s["samples"] = traj.size();
  s["seed"] = cfg.seed;
  s["horizon"] = cfg.horizon;
  s["rtol"] = cfg.integrator.rtol;
  s["atol"] = cfg.integrator.atol;
  s["accepted_steps"] = traj.stats.accepted_steps;
  s["rejected_steps"] = traj.stats.rejected_steps;
  s["rhs_evaluations"] = traj.stats.rhs_evaluations;
  s["linear_solves"] = traj.stats.linear_solves;
  s["factorizations"] = traj.stats.factorizations;
  s["clamp_count"] = traj.stats.clamp_count;
  double worst = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& state : traj.states) {
    if (traj.model == Model::heat) {
      worst = std::max(worst, std::abs(state.real().sum() - 1.0));
      lowest = std::min(lowest, state.real().minCoeff());
    } else {
      worst = std::max(worst, std::abs(state.norm() - 1.0));
    }
  }
  if (traj.model == Model::heat) {
    s["max_mass_error"] = worst;
    s["min_probability"] = lowest;
    s["decay_rate"] = nullptr;
    try {
      s["decay_rate"] = decay_envelope(traj, steady_state(g)).eta;
    } catch (const Error&) {
    }
  } else {
    s["max_norm_error"] = worst;
  }
  return s;
}

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

LaplacianKind parse_laplacian_kind(std::string_view text) {
  if (text == "comb") return LaplacianKind::combinatorial;
  if (text == "out") return LaplacianKind::out;
  if (text == "in") return LaplacianKind::in;
  if (text == "nrw") return LaplacianKind::normalized_rw;
  if (text == "nsym") return LaplacianKind::normalized_sym;
  if (text == "kpath") return LaplacianKind::k_path;
  throw ContractError("unknown Laplacian kind '" + std::string(text) +
                      "' (expected comb, out, in, nrw, nsym or kpath)");
}

void apply_config_json(RunConfig& cfg, std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed config JSON: ") + e.what(), 0);
  }
  if (!doc.is_object()) throw ContractError("config must be a JSON object");
  auto text = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  };
  for (const auto& [key, value] : doc.items()) {
    const std::string v = text(value);
    if (key == "graph") {
      cfg.graph = v;
    } else if (key == "graph-format") {
      cfg.graph_format = parse_graph_format(v);
    } else if (key == "directed") {
      cfg.directed = parse_bool(v);
    } else if (key == "largest-component") {
      cfg.largest_component = parse_bool(v);
    } else if (key == "laplacian") {
      cfg.laplacian = parse_laplacian_kind(v);
    } else if (key == "kpath-alpha") {
      cfg.kpath_alpha = parse_double(v);
    } else if (key == "model") {
      cfg.model = parse_model(v);
    } else if (key == "alpha") {
      cfg.alpha = v;
    } else if (key == "integrator") {
      cfg.integrator.method = parse_method(v);
    } else if (key == "t-end") {
      cfg.horizon = parse_double(v);
    } else if (key == "rtol") {
      cfg.integrator.rtol = parse_double(v);
    } else if (key == "atol") {
      cfg.integrator.atol = parse_double(v);
    } else if (key == "max-step") {
      cfg.integrator.max_step = parse_double(v);
    } else if (key == "initial-step") {
      cfg.integrator.initial_step = parse_double(v);
    } else if (key == "samples") {
      cfg.integrator.samples = parse_unsigned(v, "samples");
    } else if (key == "seed") {
      cfg.seed = parse_unsigned(v, "seed");
    } else if (key == "initial") {
      parse_initial(cfg, v);
    } else if (key == "period") {
      cfg.period = parse_double(v);
    } else if (key == "out") {
      cfg.out = v;
    } else if (key == "out-format") {
      cfg.out_format = parse_output_format(v);
    } else {
      throw ContractError("unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& cfg) {
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end()) {
    throw ContractError("unknown command '" + cfg.command + "'");
  }
  if (cfg.graph.empty()) throw ContractError("--graph is required");
  if (!(cfg.kpath_alpha >= 0.0) || !std::isfinite(cfg.kpath_alpha)) {
    throw ContractError("k-path alpha must be a nonnegative finite number");
  }
  if (cfg.command == "power") {
    constant_alpha(cfg.alpha);
    return;
  }
  if (cfg.command == "simulate" || cfg.command == "decay" || cfg.command == "floquet") {
    parse_schedule(cfg.alpha);
    cfg.integrator.validate();
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
      throw ContractError("t-end must be positive and finite");
    }
    if (cfg.period && !(*cfg.period > 0.0)) throw ContractError("period must be positive");
    if (cfg.initial == InitialKind::phase && cfg.model == Model::heat) {
      throw ContractError("phase initial states are for the Schrodinger model");
    }
    if (cfg.command == "decay" && cfg.model != Model::heat) {
      throw ContractError("decay needs the heat model");
    }
  }
}

Graph load_run_graph(const RunConfig& cfg) {
  LoadOptions options;
  options.directed = cfg.directed;
  options.format = cfg.graph_format.value_or(cfg.graph.extension() == ".mtx"
                                                 ? GraphFormat::matrix_market
                                                 : GraphFormat::edge_list);
  Graph g = load_graph(cfg.graph, options);
  if (cfg.largest_component) return largest_component(g).graph;
  return g;
}

Eigen::VectorXcd initial_state(const RunConfig& cfg, Eigen::Index n) {
  const bool heat = cfg.model == Model::heat;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  std::mt19937_64 engine(cfg.seed);
  auto uniform = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  switch (cfg.initial) {
    case InitialKind::uniform:
      v.setConstant(heat ? 1.0 / static_cast<double>(n) : 1.0 / std::sqrt(static_cast<double>(n)));
      return v;
    case InitialKind::node:
      if (cfg.initial_node < 1 || cfg.initial_node > static_cast<std::size_t>(n)) {
        throw ContractError("initial node " + std::to_string(cfg.initial_node) +
                            " is outside 1.." + std::to_string(n));
      }
      v(static_cast<Eigen::Index>(cfg.initial_node - 1)) = 1.0;
      return v;
    case InitialKind::phase:
      if (heat) throw ContractError("phase initial states are for the Schrodinger model");
      for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), 2.0 * std::numbers::pi * uniform());
      }
      return v;
    case InitialKind::random:
      break;
  }
  if (heat) {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = -std::log1p(-uniform());
    return v / v.real().sum();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::sqrt(-2.0 * std::log1p(-uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    v(i) = std::polar(r, theta);
  }
  return v / v.norm();
}

DynamicsProblem build_problem(const RunConfig& cfg, const Graph& g) {
  Generator generator = build_generator(cfg, g);
  DynamicsProblem p{.model = cfg.model,
                    .generator = generator,
                    .schedule = parse_schedule(cfg.alpha),
                    .initial = initial_state(cfg, generator.size()),
                    .horizon = cfg.horizon};
  p.validate();
  return p;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    const Graph g = load_run_graph(cfg);

    if (cfg.command == "laplacian") {
      emit(cfg, out, matrix_csv(laplacian_matrix(cfg, g).values()));
    } else if (cfg.command == "kpath") {
      if (g.directed()) throw ContractError("the k-path Laplacian needs an undirected graph");
      emit(cfg, out, matrix_csv(transformed_k_path_laplacian(g, cfg.kpath_alpha).values()));
    } else if (cfg.command == "power") {
      const double alpha = constant_alpha(cfg.alpha);
      const DenseMatrix l = laplacian_matrix(cfg, g);
      const DenseMatrix power = l.is_symmetric() ? fractional_power_sym(sym_eig(l), alpha)
                                                 : fractional_power_general(l, alpha).real();
      emit(cfg, out, matrix_csv(power.values()));
    } else if (cfg.command == "spectrum") {
      if (g.directed()) throw ContractError("spectrum needs an undirected graph");
      // I - D^{-1} W is similar to the symmetric normalization.
      RunConfig symmetric = cfg;
      if (cfg.laplacian == LaplacianKind::normalized_rw) {
        symmetric.laplacian = LaplacianKind::normalized_sym;
      }
      emit(cfg, out, lines_of(sym_eig(laplacian_matrix(symmetric, g)).eigenvalues));
    } else if (cfg.command == "simulate") {
      const auto problem = build_problem(cfg, g);
      const Trajectory traj = simulate(problem, cfg.integrator);
      const std::string body = cfg.out_format == OutputFormat::csv ? trajectory_csv(traj)
                                                                   : trajectory_json(traj);
      const std::string stats = stats_json(cfg, g, traj).dump(2) + '\n';
      emit(cfg, out, body);
      if (!cfg.out.empty()) write_text(cfg.out.string() + ".stats.json", stats);
    } else if (cfg.command == "decay") {
      const auto problem = build_problem(cfg, g);
      const Trajectory traj = simulate(problem, cfg.integrator);
      const DecayReport r = decay_envelope(traj, steady_state(g));
      json doc{{"eta", r.eta},
               {"K", r.K},
               {"fit_residual", r.fit_residual},
               {"samples_used", r.samples_used}};
      if (problem.generator.has_spectrum()) {
        doc["lambda2_alpha_lower_bound"] =
            decay_rate_lower_bound(problem.generator.spectrum(), problem.schedule, cfg.horizon);
      }
      emit(cfg, out, doc.dump(2) + '\n');
    } else if (cfg.command == "floquet") {
      const auto exponents =
          floquet_exponents(build_generator(cfg, g), parse_schedule(cfg.alpha), cfg.period);
      std::string text = "re,im\n";
      for (const auto& e : exponents) {
        text += format_double(e.real()) + ',' + format_double(e.imag()) + '\n';
      }
      emit(cfg, out, text);
    }
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable-order fractional Laplacian dynamics on graphs", "netfrac"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::map<std::string, std::string> given;
  auto option = [&](const std::string& name, const std::string& help) {
    app.add_option_function<std::string>(
        "--" + name, [&given, name](const std::string& v) { given[name] = v; }, help);
  };
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with default settings");
  option("graph", "graph file");
  option("graph-format", "edgelist or mtx (default: from the extension)");
  option("directed", "override directedness: true or false");
  app.add_flag_callback("--largest-component", [&given] { given["largest-component"] = "true"; },
                        "restrict to the largest connected component");
  option("laplacian", "comb, out, in, nrw, nsym or kpath");
  option("kpath-alpha", "Mellin exponent of the transformed k-path Laplacian");
  option("model", "heat or schrodinger");
  option("alpha", "exponent schedule, e.g. const:0.5, sin:0.5,0.4,12.566370614359172, expsat:10");
  option("integrator", "rk45, bdf or exact");
  option("t-end", "time horizon");
  option("rtol", "relative tolerance");
  option("atol", "absolute tolerance");
  option("max-step", "largest step size");
  option("initial-step", "first step size");
  option("samples", "number of output samples, both ends included");
  option("seed", "seed for random initial states");
  option("initial", "random, uniform, phase or node:<k>");
  option("period", "period for floquet (default: the schedule's)");
  option("out", "output path (default: standard output)");
  option("out-format", "csv or json");

  app.add_subcommand("laplacian", "write the selected Laplacian as CSV");
  app.add_subcommand("power", "write L^alpha for a constant alpha as CSV");
  app.add_subcommand("kpath", "write the transformed k-path Laplacian as CSV");
  app.add_subcommand("spectrum", "write the sorted eigenvalues, one per line");
  app.add_subcommand("simulate", "integrate the dynamics and write the trajectory");
  app.add_subcommand("decay", "fit the exponential decay towards the steady state");
  app.add_subcommand("floquet", "characteristic exponents over one period");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  RunConfig cfg;
  const int status = guarded(err, [&] {
    if (!config_path.empty()) apply_config_json(cfg, read_text(config_path));
    json flags = json::object();
    for (const auto& [key, value] : given) flags[key] = value;
    apply_config_json(cfg, flags.dump());
    cfg.command = app.get_subcommands().front()->get_name();
  });
  if (status != 0) return status;
  return run(cfg, out, err);
}

}  // namespace netfrac
