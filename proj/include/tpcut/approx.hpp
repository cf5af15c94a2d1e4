#pragma once

// Enumeration-based approximations: greedy covering (GEN) and LP rounding (FEN).

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "tpcut/covering_lp.hpp"
#include "tpcut/graph.hpp"
#include "tpcut/pathspace.hpp"

namespace tpcut {

struct SolverOptions {
  EnumerationOptions enumeration;
  LpOptions lp;
  Deadline deadline;
};

namespace detail {

inline std::int64_t elapsed_ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

inline EnumerationOptions with_deadline(EnumerationOptions e, const Deadline& d) {
  e.deadline = d;
  return e;
}

}  // namespace detail

/// Greedy set cover over the path family: repeatedly take the element with
/// the most uncovered paths per unit cost (lowest id on ties).
inline std::vector<Element> greedy_cover(const CoveringInstance& cov, const Deadline& deadline = {}) {
  const std::size_t m = cov.element_count();
  std::vector<std::size_t> uncovered_through(m);
  for (Element e = 0; e < m; ++e) uncovered_through[e] = cov.covers[e].size();
  std::vector<std::uint8_t> covered(cov.paths.size(), 0);
  std::size_t remaining = cov.paths.size();
  std::vector<Element> chosen;

  while (remaining > 0) {
    deadline.check("GEN");
    Element best = static_cast<Element>(m);
    double best_ratio = 0.0;
    for (Element e = 0; e < m; ++e) {
      if (uncovered_through[e] == 0) continue;
      const double ratio = static_cast<double>(uncovered_through[e]) / cov.costs[e];
      if (best == m || ratio > best_ratio) {
        best = e;
        best_ratio = ratio;
      }
    }
    if (best == m) throw InfeasibleError("a path of length <= T has no removable element");
    chosen.push_back(best);
    for (auto p : cov.covers[best]) {
      if (covered[p]) continue;
      covered[p] = 1;
      --remaining;
      for (Element e : cov.path_elements(p))
        if (cov.removable[e]) --uncovered_through[e];
    }
  }
  return chosen;
}

inline Solution gen(const Instance& inst, const SolverOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto cov = enumerate_paths(inst, detail::with_deadline(opts.enumeration, opts.deadline));
  auto s = make_solution(inst, greedy_cover(cov, opts.deadline), "GEN");
  s.elapsed_ms = detail::elapsed_ms_since(start);
  return s;
}

/// Rounding rule: keep every element whose fractional weight reaches
/// 1/(T0+1), less a small allowance for solver round-off.
inline std::vector<Element> round_fractional(const FractionalSolution& frac, std::size_t hop_bound) {
  const double cutoff = 1.0 / static_cast<double>(hop_bound + 1) - 1e-9;
  std::vector<Element> out;
  for (Element e = 0; e < frac.weights.size(); ++e)
    if (frac.weights[e] > 0.0 && frac.weights[e] >= cutoff) out.push_back(e);
  return out;
}

struct FenResult {
  Solution solution;
  FractionalSolution relaxation;
};

inline FenResult fen_detailed(const Instance& inst, const SolverOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto cov = enumerate_paths(inst, detail::with_deadline(opts.enumeration, opts.deadline));
  LpOptions lp = opts.lp;
  lp.deadline = opts.deadline;
  FenResult r;
  r.relaxation = solve_covering_lp(cov, lp);
  r.solution = make_solution(inst, round_fractional(r.relaxation, cov.hop_bound), "FEN");
  r.solution.elapsed_ms = detail::elapsed_ms_since(start);
  return r;
}

inline Solution fen(const Instance& inst, const SolverOptions& opts = {}) {
  return fen_detailed(inst, opts).solution;
}

}  // namespace tpcut
