// Command-line front end: solve, enumerate, generate, targets,
// transform-per, experiment and verify.
//
// Exit codes: 0 ok, 2 usage or input error, 3 infeasible instance,
// 4 resource limit (path budget, node budget, time).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tpcut/tpcut.hpp"

namespace {

using namespace tpcut;

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitResource = 4;

/// Either stdout or a file, chosen by an optional -o path.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw InputError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct InstanceArgs {
  std::string graph;
  std::string targets;
  std::string costs;
  double T = 0.0;
  std::string mode = "vertex";
};

void add_instance_options(CLI::App* cmd, InstanceArgs& a) {
  cmd->add_option("--graph", a.graph, "graph file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--targets", a.targets, "target pairs file, one 's t' per line")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--T", a.T, "length threshold")->required();
  cmd->add_option("--mode", a.mode, "vertex or edge removal")
      ->check(CLI::IsMember({"vertex", "edge"}));
  cmd->add_option("--costs", a.costs, "vertex cost file, lines 'v cost'")->check(CLI::ExistingFile);
}

Instance load_instance(const InstanceArgs& a) {
  auto g = std::make_shared<Graph>(io::read_graph_file(a.graph));
  if (!a.costs.empty()) {
    std::ifstream in(a.costs);
    io::read_vertex_costs(in, *g, a.costs);
  }
  std::ifstream tin(a.targets);
  auto targets = io::read_targets(tin, g->vertex_count(), a.targets);
  return Instance(g, a.T, std::move(targets), a.mode == "edge" ? Mode::edge : Mode::vertex);
}

/// Rejects malformed instances (exit 2) and unseparable ones (exit 3).
void require_valid(const Instance& inst) {
  const auto diags = validate(inst);
  if (diags.empty()) return;
  bool structural = false;
  for (const auto& d : diags) {
    std::cerr << "tpcut: " << d.message << '\n';
    structural = structural || d.kind == Diagnostic::Kind::structure;
  }
  if (structural) throw InputError("invalid instance");
  throw InfeasibleError("instance cannot be separated");
}

struct GestArgs {
  double alpha = 0.5;
  std::uint64_t seed = 0;
  bool no_fallback = false;
  std::optional<std::size_t> l_override;
};

void add_gest_options(CLI::App* cmd, GestArgs& a) {
  cmd->add_option("--alpha", a.alpha, "GEST accuracy parameter in (0, 1)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", a.seed, "seed for the randomized solvers");
  cmd->add_flag("--no-fallback", a.no_fallback, "disable the shortest-path fallback (GEST)");
  cmd->add_option("--L-override", a.l_override, "samples per pair per iteration");
}

void warn_l_override(const GestArgs& a) {
  if (a.l_override)
    std::cerr << "tpcut: warning: --L-override replaces the default sample count; "
                 "the concentration guarantee no longer holds\n";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

Weighting weighting_of(bool integer, bool unit) {
  if (integer && unit) throw InputError("--integer-weights and --unit-lengths are exclusive");
  return unit ? Weighting::unit : integer ? Weighting::uniform_integer : Weighting::uniform_real;
}

void write_generated(const std::string& out_path, const std::string& header, const Graph& g) {
  Output out(out_path);
  out.stream() << "# tpcut " << kVersion << ' ' << header << '\n';
  io::write_graph(out.stream(), g);
}

void write_reference_targets(const std::string& path, const Instance& inst) {
  if (path.empty()) return;
  Output out(path);
  out.stream() << "# T = " << io::format_number(inst.threshold()) << '\n';
  io::write_targets(out.stream(), inst.targets());
}

int run(int argc, char** argv) {
  CLI::App app{"Length-bounded separation of target pairs by vertex or edge removal"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run one algorithm and print the solution as JSON");
  InstanceArgs solve_inst;
  GestArgs solve_gest;
  std::string algo;
  std::size_t max_paths = 10'000'000, max_nodes = 10'000'000;
  unsigned threads = 1;
  std::int64_t time_budget_ms = 0;
  add_instance_options(solve, solve_inst);
  add_gest_options(solve, solve_gest);
  solve->add_option("--algo", algo, "gen, fen, gest, gesta, opt, mc or t3-exact")->required();
  solve->add_option("--max-paths", max_paths, "path enumeration budget");
  solve->add_option("--max-nodes", max_nodes, "branch-and-bound node budget");
  solve->add_option("--threads", threads, "worker threads for enumeration and sampling");
  solve->add_option("--time-budget", time_budget_ms, "wall-clock limit in ms (0 = none)");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "list every path of length <= T");
  InstanceArgs enum_inst;
  std::string enum_out;
  add_instance_options(enumerate, enum_inst);
  enumerate->add_option("--max-paths", max_paths, "path enumeration budget");
  enumerate->add_option("--threads", threads, "worker threads");
  enumerate->add_option("-o,--output", enum_out, "output file (default stdout)");

  // generate
  auto* generate = app.add_subcommand("generate", "write a generated graph");
  generate->require_subcommand(1);
  std::string gen_out, gen_targets_out;
  std::uint64_t gen_seed = 0;
  bool integer_weights = false, unit_lengths = false;
  std::size_t gen_n = 0, gen_m = 0;
  WaxmanParams wax;
  auto add_common = [&](CLI::App* c, bool weighted) {
    c->add_option("-o,--output", gen_out, "output file (default stdout)");
    if (!weighted) return;
    c->add_option("--seed", gen_seed, "generator seed");
    c->add_flag("--integer-weights", integer_weights, "integer lengths 1..10");
    c->add_flag("--unit-lengths", unit_lengths, "every length 1");
  };
  auto* g_er = generate->add_subcommand("er", "uniform random graph with exactly m edges");
  g_er->add_option("--n", gen_n)->required();
  g_er->add_option("--m", gen_m)->required();
  add_common(g_er, true);
  auto* g_wax = generate->add_subcommand("waxman", "Waxman graph on the unit square");
  g_wax->add_option("--n", gen_n)->required();
  g_wax->add_option("--m", gen_m, "target edge count")->required();
  g_wax->add_option("--alpha-w", wax.alpha, "distance decay");
  g_wax->add_option("--beta-w", wax.beta, "edge density factor");
  add_common(g_wax, true);
  auto* g_hier = generate->add_subcommand("hier", "two-level Waxman topology");
  std::size_t systems = 0, routers = 0, as_edges = 0, router_edges = 0;
  g_hier->add_option("--systems", systems)->required();
  g_hier->add_option("--routers", routers, "routers per system")->required();
  g_hier->add_option("--as-edges", as_edges)->required();
  g_hier->add_option("--router-edges", router_edges, "edges per system")->required();
  g_hier->add_option("--alpha-w", wax.alpha, "distance decay");
  g_hier->add_option("--beta-w", wax.beta, "edge density factor");
  add_common(g_hier, true);
  auto* g_tight = generate->add_subcommand("tightness", "greedy worst-case family");
  std::size_t tight_k = 0;
  g_tight->add_option("--k", tight_k)->required();
  g_tight->add_option("--targets-out", gen_targets_out, "also write the target pair here");
  add_common(g_tight, false);
  auto* g_fig1 = generate->add_subcommand("fig1", "the 13-vertex reference graph");
  g_fig1->add_option("--targets-out", gen_targets_out, "also write the target pair here");
  add_common(g_fig1, false);

  // targets
  auto* targets = app.add_subcommand("targets", "draw a target set");
  std::string tgt_graph, tgt_scheme = "RR", tgt_out;
  TargetScheme scheme;
  targets->add_option("--graph", tgt_graph)->required()->check(CLI::ExistingFile);
  targets->add_option("--scheme", tgt_scheme, "RR, HH, HL or LL");
  targets->add_option("--zeta", scheme.zeta, "degree class parameter in (0, 1)");
  targets->add_option("--k", scheme.k, "number of pairs")->required();
  targets->add_option("--seed", scheme.seed);
  targets->add_option("-o,--output", tgt_out, "output file (default stdout)");

  // transform-per
  auto* per = app.add_subcommand("transform-per", "packet error rates to additive lengths");
  std::string per_graph, per_out;
  std::optional<double> per_P;
  per->add_option("--graph", per_graph, "graph whose length column holds error rates")
      ->check(CLI::ExistingFile);
  per->add_option("--threshold", per_P, "print the length threshold for error rate P");
  per->add_option("-o,--output", per_out, "output file (default stdout)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a sweep and write CSV records");
  std::string exp_graph, exp_algos, exp_sweep = "k", exp_values, exp_scheme = "RR",
                         exp_mode = "vertex", exp_out, exp_summary, exp_targets;
  ExperimentSpec spec;
  bool timing = false;
  std::int64_t exp_budget_ms = 60'000;
  GestArgs exp_gest;
  experiment->add_option("--graph", exp_graph)->required()->check(CLI::ExistingFile);
  experiment->add_option("--algos", exp_algos, "comma-separated list, e.g. GEN,OPT,MC")->required();
  experiment->add_option("--sweep", exp_sweep, "k, T or zeta");
  experiment->add_option("--values", exp_values, "comma-separated sweep values");
  experiment->add_option("--k", spec.k, "number of target pairs");
  experiment->add_option("--T", spec.T, "length threshold");
  experiment->add_option("--zeta", spec.zeta);
  experiment->add_option("--scheme", exp_scheme, "RR, HH, HL or LL");
  experiment->add_option("--targets", exp_targets, "use these pairs for every draw")
      ->check(CLI::ExistingFile);
  experiment->add_option("--mode", exp_mode)->check(CLI::IsMember({"vertex", "edge"}));
  experiment->add_option("--N", spec.draws, "target-set draws per sweep point");
  experiment->add_option("--seed", spec.master_seed, "master seed");
  experiment->add_option("--time-budget", exp_budget_ms, "per-run limit in ms");
  experiment->add_option("--threads", spec.workers, "worker threads");
  experiment->add_option("--max-paths", spec.settings.max_paths);
  experiment->add_option("--max-nodes", spec.settings.max_nodes);
  experiment->add_option("--alpha", exp_gest.alpha)->check(CLI::Range(0.0, 1.0));
  experiment->add_option("--L-override", exp_gest.l_override);
  experiment->add_flag("--timing", timing, "fill the elapsed_ms column");
  experiment->add_option("--summary", exp_summary, "also write mean/sd per sweep point here");
  experiment->add_option("-o,--output", exp_out, "output file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "check a solution against an instance");
  InstanceArgs verify_inst;
  std::string solution_path;
  add_instance_options(verify, verify_inst);
  verify->add_option("--solution", solution_path, "solution JSON or list of ids")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*solve) {
    const auto inst = load_instance(solve_inst);
    require_valid(inst);
    const Algorithm a = parse_algorithm(upper(algo));
    RunSettings settings;
    settings.alpha = solve_gest.alpha;
    settings.sample_override = solve_gest.l_override;
    settings.max_paths = max_paths;
    settings.max_nodes = max_nodes;
    settings.threads = threads;
    warn_l_override(solve_gest);
    const Algorithm effective =
        (a == Algorithm::GESTA && solve_gest.no_fallback) ? Algorithm::GEST : a;
    const Deadline deadline = time_budget_ms > 0
                                  ? Deadline::after(std::chrono::milliseconds(time_budget_ms))
                                  : Deadline{};
    const auto s = run_algorithm(effective, inst, solve_gest.seed, settings, deadline);
    auto j = io::to_json(s);
    j["version"] = kVersion;
    std::cout << j.dump() << '\n';
    return 0;
  }

  if (*enumerate) {
    const auto inst = load_instance(enum_inst);
    EnumerationOptions opts;
    opts.max_paths = max_paths;
    opts.threads = threads;
    const auto cov = enumerate_paths(inst, opts);
    Output out(enum_out);
    out.stream() << "# tpcut " << kVersion << " paths=" << cov.paths.size()
                 << " T=" << io::format_number(inst.threshold()) << '\n';
    io::write_paths(out.stream(), cov);
    return 0;
  }

  if (*generate) {
    const auto w = weighting_of(integer_weights, unit_lengths);
    wax.weighting = w;
    const std::string seed_note = " seed=" + std::to_string(gen_seed);
    if (*g_er) {
      write_generated(gen_out,
                      "er n=" + std::to_string(gen_n) + " m=" + std::to_string(gen_m) + seed_note,
                      gen_er(gen_n, gen_m, gen_seed, w));
    } else if (*g_wax) {
      write_generated(gen_out,
                      "waxman n=" + std::to_string(gen_n) + " m=" + std::to_string(gen_m) +
                          " alpha_w=" + io::format_number(wax.alpha) +
                          " beta_w=" + io::format_number(wax.beta) + seed_note,
                      gen_waxman(gen_n, gen_m, gen_seed, wax));
    } else if (*g_hier) {
      write_generated(gen_out,
                      "hier systems=" + std::to_string(systems) +
                          " routers=" + std::to_string(routers) + seed_note,
                      gen_hierarchical(systems, routers, as_edges, router_edges, gen_seed, wax));
    } else if (*g_tight) {
      const auto r = gen_tightness(tight_k);
      write_generated(gen_out, "tightness k=" + std::to_string(tight_k), *r.graph);
      write_reference_targets(gen_targets_out, r.instance);
    } else {
      const auto r = gen_fig1();
      write_generated(gen_out, "fig1", *r.graph);
      write_reference_targets(gen_targets_out, r.instance);
    }
    return 0;
  }

  if (*targets) {
    const auto g = io::read_graph_file(tgt_graph);
    scheme.kind = parse_target_kind(tgt_scheme);
    const auto pairs = gen_targets(g, scheme);
    Output out(tgt_out);
    out.stream() << "# tpcut " << kVersion << " targets scheme=" << to_string(scheme.kind)
                 << " zeta=" << io::format_number(scheme.zeta) << " k=" << scheme.k
                 << " seed=" << scheme.seed << '\n';
    io::write_targets(out.stream(), pairs);
    return 0;
  }

  if (*per) {
    if (!per_P && per_graph.empty()) throw InputError("transform-per needs --graph or --threshold");
    if (per_P) std::cout << io::format_number(per_threshold(*per_P)) << '\n';
    if (!per_graph.empty()) {
      Output out(per_out);
      out.stream() << "# tpcut " << kVersion << " transform-per\n";
      io::write_graph(out.stream(), transform_per_graph(io::read_graph_file(per_graph)));
    }
    return 0;
  }

  if (*experiment) {
    spec.graph = std::make_shared<Graph>(io::read_graph_file(exp_graph));
    for (const auto& a : split_list(exp_algos)) spec.algorithms.push_back(parse_algorithm(upper(a)));
    spec.sweep = parse_sweep_variable(exp_sweep);
    for (const auto& v : split_list(exp_values)) {
      try {
        spec.values.push_back(std::stod(v));
      } catch (const std::exception&) {
        throw InputError("bad sweep value '" + v + "'");
      }
    }
    spec.scheme = parse_target_kind(exp_scheme);
    spec.mode = exp_mode == "edge" ? Mode::edge : Mode::vertex;
    spec.time_budget = std::chrono::milliseconds(exp_budget_ms);
    spec.settings.alpha = exp_gest.alpha;
    spec.settings.sample_override = exp_gest.l_override;
    warn_l_override(exp_gest);
    if (!exp_targets.empty()) {
      std::ifstream in(exp_targets);
      spec.fixed_targets = io::read_targets(in, spec.graph->vertex_count(), exp_targets);
      if (experiment->count("--k") == 0) spec.k = spec.fixed_targets->size();
    }
    const auto records = run_experiment(spec);
    Output out(exp_out);
    write_csv(out.stream(), spec, records, timing);
    if (!exp_summary.empty()) {
      Output sum(exp_summary);
      write_summary_csv(sum.stream(), spec, summarize(spec, records), timing);
    }
    return 0;
  }

  if (*verify) {
    const auto inst = load_instance(verify_inst);
    std::ifstream in(solution_path);
    const auto elements = io::read_solution_elements(in);
    const bool ok = is_feasible(inst, elements);
    nlohmann::ordered_json j;
    j["feasible"] = ok;
    j["cost"] = cost_of(inst, elements);
    const ElementMask mask(inst.element_count(), elements);
    const auto removal = Removal::of(mask, inst.mode());
    auto distances = nlohmann::ordered_json::array();
    for (const auto& p : inst.targets()) {
      const double d = shortest_distance(inst.graph(), p.source, p.target, removal);
      distances.push_back(std::isinf(d) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(d));
    }
    j["distances"] = distances;
    j["version"] = kVersion;
    std::cout << j.dump() << '\n';
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InfeasibleError& e) {
    std::cerr << "tpcut: infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ResourceError& e) {
    std::cerr << "tpcut: resource limit: " << e.what();
    if (e.incumbent_cost()) std::cerr << " (best cost found " << io::format_number(*e.incumbent_cost()) << ")";
    std::cerr << '\n';
    return kExitResource;
  } catch (const InputError& e) {
    std::cerr << "tpcut: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractError& e) {
    std::cerr << "tpcut: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "tpcut: error: " << e.what() << '\n';
    return 1;
  }
}
