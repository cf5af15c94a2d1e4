#pragma once

// Experiment runner: sweeps k, T or zeta, draws N target sets per sweep
// point, runs each algorithm on the same draws and records costs.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "tpcut/approx.hpp"
#include "tpcut/exact.hpp"
#include "tpcut/gest.hpp"
#include "tpcut/generators.hpp"
#include "tpcut/io.hpp"
#include "tpcut/qos.hpp"

namespace tpcut {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Algorithm { GEN, FEN, GEST, GESTA, OPT, MC, T3_EXACT };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::GEN: return "GEN";
    case Algorithm::FEN: return "FEN";
    case Algorithm::GEST: return "GEST";
    case Algorithm::GESTA: return "GESTA";
    case Algorithm::OPT: return "OPT";
    case Algorithm::MC: return "MC";
    case Algorithm::T3_EXACT: return "T3-EXACT";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  std::string up(s);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto a : {Algorithm::GEN, Algorithm::FEN, Algorithm::GEST, Algorithm::GESTA, Algorithm::OPT,
                 Algorithm::MC, Algorithm::T3_EXACT})
    if (up == to_string(a)) return a;
  if (up == "T3" || up == "T3EXACT") return Algorithm::T3_EXACT;
  throw InputError("unknown algorithm '" + std::string(s) +
                   "' (expected GEN, FEN, GEST, GESTA, OPT, MC or T3-EXACT)");
}

/// Tuning knobs shared by every algorithm dispatch.
struct RunSettings {
  double alpha = 0.5;
  std::optional<std::size_t> sample_override;
  std::size_t max_paths = 10'000'000;
  std::size_t max_nodes = 10'000'000;
  unsigned threads = 1;
};

/// Runs one algorithm on one instance. `seed` feeds the randomized solvers.
inline Solution run_algorithm(Algorithm a, const Instance& inst, std::uint64_t seed,
                              const RunSettings& settings = {}, const Deadline& deadline = {}) {
  SolverOptions opts;
  opts.enumeration.max_paths = settings.max_paths;
  opts.enumeration.threads = settings.threads;
  opts.deadline = deadline;
  switch (a) {
    case Algorithm::GEN:
      return gen(inst, opts);
    case Algorithm::FEN:
      return fen(inst, opts);
    case Algorithm::OPT: {
      ExactOptions eo;
      eo.max_nodes = settings.max_nodes;
      return opt(inst, opts, eo);
    }
    case Algorithm::MC:
      return min_vertex_cut(inst);
    case Algorithm::T3_EXACT:
      return exact_small_t(inst);
    case Algorithm::GEST:
    case Algorithm::GESTA: {
      GestConfig cfg;
      cfg.alpha = settings.alpha;
      cfg.seed = seed;
      cfg.fallback = a == Algorithm::GESTA;
      cfg.sample_override = settings.sample_override;
      cfg.threads = settings.threads;
      cfg.deadline = deadline;
      return gest(inst, cfg);
    }
  }
  throw InputError("unknown algorithm");
}

enum class SweepVariable { k, T, zeta };

inline std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::k: return "k";
    case SweepVariable::T: return "T";
    case SweepVariable::zeta: return "zeta";
  }
  return "?";
}

inline SweepVariable parse_sweep_variable(std::string_view s) {
  if (s == "k") return SweepVariable::k;
  if (s == "T") return SweepVariable::T;
  if (s == "zeta") return SweepVariable::zeta;
  throw InputError("unknown sweep variable '" + std::string(s) + "' (expected k, T or zeta)");
}

struct ExperimentSpec {
  std::shared_ptr<const Graph> graph;
  std::vector<Algorithm> algorithms;
  SweepVariable sweep = SweepVariable::k;
  std::vector<double> values;  // empty = the single point given by k / T / zeta
  std::size_t k = 1;
  double T = 1.0;
  double zeta = 0.5;
  TargetKind scheme = TargetKind::RR;
  /// When set, every draw uses these pairs instead of sampling a target set.
  std::optional<std::vector<TargetPair>> fixed_targets;
  Mode mode = Mode::vertex;
  std::size_t draws = 10;  // N
  std::uint64_t master_seed = 0;
  std::chrono::milliseconds time_budget{60'000};
  RunSettings settings;
  unsigned workers = 1;
};

enum class RunStatus { ok, timeout, budget_exceeded };

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::timeout: return "timeout";
    case RunStatus::budget_exceeded: return "budget_exceeded";
  }
  return "?";
}

struct RunRecord {
  Algorithm algorithm;
  std::size_t k;
  double T;
  double zeta;
  TargetKind scheme;
  std::size_t draw;
  double cost = 0.0;
  std::size_t size = 0;
  bool feasible = false;
  std::int64_t elapsed_ms = 0;
  RunStatus status = RunStatus::ok;
};

struct SweepPoint {
  std::size_t k;
  double T;
  double zeta;
};

inline std::vector<SweepPoint> sweep_points(const ExperimentSpec& spec) {
  std::vector<SweepPoint> out;
  if (spec.values.empty()) return {{spec.k, spec.T, spec.zeta}};
  for (double v : spec.values) {
    SweepPoint p{spec.k, spec.T, spec.zeta};
    switch (spec.sweep) {
      case SweepVariable::k:
        if (v < 1 || v != std::floor(v)) throw InputError("k sweep values must be positive integers");
        p.k = static_cast<std::size_t>(v);
        break;
      case SweepVariable::T: p.T = v; break;
      case SweepVariable::zeta: p.zeta = v; break;
    }
    out.push_back(p);
  }
  return out;
}

inline void check_spec(const ExperimentSpec& spec) {
  if (!spec.graph) throw InputError("experiment needs a graph");
  if (spec.algorithms.empty()) throw InputError("experiment needs at least one algorithm");
  if (spec.draws < 1) throw InputError("N must be at least 1");
  if (spec.fixed_targets) {
    if (spec.fixed_targets->empty()) throw InputError("fixed target list is empty");
    if (spec.sweep != SweepVariable::T && !spec.values.empty())
      throw InputError("with fixed targets only T can be swept");
    if (spec.k != spec.fixed_targets->size())
      throw InputError("k must equal the number of fixed target pairs");
  }
  for (const auto& p : sweep_points(spec)) {
    if (!(p.T > 0.0)) throw InputError("T must be positive");
    for (auto a : spec.algorithms) {
      if (a == Algorithm::MC && p.k != 1) throw InputError("MC only applies when k = 1");
      if (a == Algorithm::MC && spec.mode != Mode::vertex) throw InputError("MC needs vertex mode");
      if (a == Algorithm::T3_EXACT) {
        if (p.k != 1 || spec.mode != Mode::vertex)
          throw InputError("T3-EXACT needs k = 1 in vertex mode");
        const double q = spec.graph->min_length();
        for (const auto& e : spec.graph->edges())
          if (e.length != q) throw InputError("T3-EXACT needs uniform edge lengths");
        if (std::floor(p.T / q + kLengthTolerance) > 3) throw InputError("T3-EXACT needs T0 <= 3");
      }
    }
  }
}

namespace detail {

/// Target set for (sweep point, draw), shared by every algorithm. Draws that
/// yield an invalid instance (unseparable pair) at `validation_T` are redrawn
/// deterministically.
inline std::vector<TargetPair> draw_targets(const ExperimentSpec& spec, const SweepPoint& p,
                                            std::size_t draw, double validation_T) {
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    TargetScheme scheme;
    scheme.kind = spec.scheme;
    scheme.zeta = p.zeta;
    scheme.k = p.k;
    scheme.seed = derive_seed(spec.master_seed, hash_string("targets"), p.k,
                              std::bit_cast<std::uint64_t>(spec.scheme == TargetKind::RR ? 0.0 : p.zeta),
                              draw, attempt);
    auto targets = gen_targets(*spec.graph, scheme);
    if (validate(Instance(spec.graph, validation_T, targets, spec.mode)).empty()) return targets;
  }
  throw InputError("could not draw a separable target set after 1000 attempts");
}

}  // namespace detail

/// Runs the whole sweep. Records come back in (sweep point, draw, algorithm)
/// order regardless of how many workers ran.
inline std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
  check_spec(spec);
  const auto points = sweep_points(spec);
  double validation_T = spec.T;
  if (spec.sweep == SweepVariable::T && !spec.values.empty())
    validation_T = *std::max_element(spec.values.begin(), spec.values.end());

  const std::size_t tasks = points.size() * spec.draws;
  std::vector<std::vector<RunRecord>> results(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t t; (t = next++) < tasks;) {
      try {
        const std::size_t pi = t / spec.draws;
        const std::size_t draw = t % spec.draws;
        const auto& p = points[pi];
        const double vt = spec.sweep == SweepVariable::T ? validation_T : p.T;
        const Instance inst(spec.graph, p.T,
                            spec.fixed_targets ? *spec.fixed_targets
                                               : detail::draw_targets(spec, p, draw, vt),
                            spec.mode);
        for (auto a : spec.algorithms) {
          RunRecord r{a, p.k, p.T, p.zeta, spec.scheme, draw};
          const auto seed = derive_seed(spec.master_seed, hash_string(to_string(a)), pi, draw);
          const auto start = std::chrono::steady_clock::now();
          try {
            const auto s = run_algorithm(a, inst, seed, spec.settings,
                                         Deadline::after(spec.time_budget));
            r.cost = s.cost;
            r.size = s.size();
            r.feasible = s.feasible;
          } catch (const TimeoutError&) {
            r.status = RunStatus::timeout;
          } catch (const ResourceError&) {
            r.status = RunStatus::budget_exceeded;
          }
          r.elapsed_ms = detail::elapsed_ms_since(start);
          results[t].push_back(r);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(spec.workers, tasks));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<RunRecord> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

inline constexpr std::string_view kCsvColumns =
    "algorithm,k,T,zeta,scheme,draw,cost,size,feasible,elapsed_ms,status";

/// Writes the run records. Timings vary between runs, so elapsed_ms is left
/// empty unless `timing` is set; the output is then byte-identical for a
/// fixed master seed.
inline void write_csv(std::ostream& out, const ExperimentSpec& spec,
                      const std::vector<RunRecord>& records, bool timing) {
  out << "# tpcut " << kVersion << " experiment master_seed=" << spec.master_seed
      << " draws=" << spec.draws << " sweep=" << to_string(spec.sweep)
      << " mode=" << to_string(spec.mode) << '\n';
  out << kCsvColumns << '\n';
  for (const auto& r : records) {
    const bool ok = r.status == RunStatus::ok;
    out << to_string(r.algorithm) << ',' << r.k << ',' << io::format_number(r.T) << ','
        << io::format_number(r.zeta) << ',' << to_string(r.scheme) << ',' << r.draw << ','
        << (ok ? io::format_number(r.cost) : "") << ',' << (ok ? std::to_string(r.size) : "")
        << ',' << (r.feasible ? "true" : "false") << ','
        << (timing ? std::to_string(r.elapsed_ms) : "") << ',' << to_string(r.status) << '\n';
  }
}

struct SummaryRow {
  Algorithm algorithm;
  double value;  // sweep variable value
  std::size_t runs = 0;
  std::size_t ok = 0;
  double mean_cost = 0.0;
  double sd_cost = 0.0;  // sample standard deviation
  double mean_size = 0.0;
  double mean_elapsed_ms = 0.0;
};

/// Mean and sample standard deviation of cost per (algorithm, sweep point),
/// over runs that finished.
inline std::vector<SummaryRow> summarize(const ExperimentSpec& spec,
                                         const std::vector<RunRecord>& records) {
  auto value_of = [&](const RunRecord& r) {
    switch (spec.sweep) {
      case SweepVariable::k: return static_cast<double>(r.k);
      case SweepVariable::T: return r.T;
      case SweepVariable::zeta: return r.zeta;
    }
    return 0.0;
  };
  std::vector<SummaryRow> rows;
  std::map<std::pair<double, int>, std::size_t> index;
  for (const auto& r : records) {
    const auto key = std::pair(value_of(r), static_cast<int>(r.algorithm));
    auto [it, fresh] = index.try_emplace(key, rows.size());
    if (fresh) rows.push_back({r.algorithm, key.first});
    auto& row = rows[it->second];
    ++row.runs;
    if (r.status != RunStatus::ok) continue;
    ++row.ok;
    const double delta = r.cost - row.mean_cost;
    row.mean_cost += delta / static_cast<double>(row.ok);
    row.sd_cost += delta * (r.cost - row.mean_cost);  // Welford M2
    row.mean_size += (static_cast<double>(r.size) - row.mean_size) / static_cast<double>(row.ok);
    row.mean_elapsed_ms +=
        (static_cast<double>(r.elapsed_ms) - row.mean_elapsed_ms) / static_cast<double>(row.ok);
  }
  for (auto& row : rows)
    row.sd_cost = row.ok > 1 ? std::sqrt(row.sd_cost / static_cast<double>(row.ok - 1)) : 0.0;
  return rows;
}

inline void write_summary_csv(std::ostream& out, const ExperimentSpec& spec,
                              const std::vector<SummaryRow>& rows, bool timing) {
  out << "algorithm," << to_string(spec.sweep)
      << ",runs,ok,mean_cost,sd_cost,mean_size,mean_elapsed_ms\n";
  for (const auto& r : rows)
    out << to_string(r.algorithm) << ',' << io::format_number(r.value) << ',' << r.runs << ','
        << r.ok << ',' << io::format_number(r.mean_cost) << ',' << io::format_number(r.sd_cost)
        << ',' << io::format_number(r.mean_size) << ','
        << (timing ? io::format_number(r.mean_elapsed_ms) : "") << '\n';
}

}  // namespace tpcut
