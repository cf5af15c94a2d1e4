#pragma once

// Greedy selection driven by Monte Carlo path-count estimates (GEST), with the
// shortest-path fallback variant (GESTA).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "tpcut/approx.hpp"
#include "tpcut/graph.hpp"
#include "tpcut/pathspace.hpp"

namespace tpcut {

struct GestConfig {
  double alpha = 0.5;
  std::uint64_t seed = 0;
  /// 0 = element count + 1000.
  std::size_t max_iterations = 0;
  bool fallback = true;
  /// Replaces the per-pair sample count. Lowering it voids the concentration
  /// guarantee of the default count.
  std::optional<std::size_t> sample_override;
  unsigned threads = 1;
  Deadline deadline;
};

/// L = ceil(3 k^2 ln(2 n^2) / (2 alpha^2)): samples per active pair per iteration.
inline std::size_t sample_count(std::size_t pairs, std::size_t vertices, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  const double k = static_cast<double>(pairs);
  const double n = static_cast<double>(vertices);
  const double l = 3.0 * k * k * std::log(2.0 * n * n) / (2.0 * alpha * alpha);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(l)));
}

/// Monte Carlo estimate of how many paths of P(u, v) meet `set`: the mean of
/// I(q hits v and meets set) / h(q) over the samples.
inline double sigma(std::span<const SampledPath> samples, const ElementMask& set, Mode mode) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& q : samples) {
    if (!q.hit) continue;
    const auto es = q.elements(mode);
    if (std::any_of(es.begin(), es.end(), [&](Element e) { return set.contains(e); }))
      total += 1.0 / q.probability;
  }
  return total / static_cast<double>(samples.size());
}

namespace detail {

inline std::vector<std::size_t> active_pairs(const Instance& inst, const ElementMask& removed) {
  std::vector<std::size_t> out;
  const auto removal = Removal::of(removed, inst.mode());
  for (std::size_t i = 0; i < inst.targets().size(); ++i)
    if (pair_unseparated(inst, inst.targets()[i], removal)) out.push_back(i);
  return out;
}

}  // namespace detail

/// Cheapest removable element (lowest id on ties) on a current shortest path
/// of a uniformly chosen unseparated pair.
inline Element gesta_fallback(const Instance& inst, const ElementMask& removed, Rng& rng) {
  const auto active = detail::active_pairs(inst, removed);
  if (active.empty()) throw ContractError("fallback invoked with every pair separated");
  const auto& pair = inst.targets()[active[rng.below(active.size())]];
  const auto path =
      shortest_path(inst.graph(), pair.source, pair.target, Removal::of(removed, inst.mode()));
  const auto& elements = inst.mode() == Mode::vertex ? path.vertices : path.edges;
  std::optional<Element> best;
  for (Element e : elements) {
    if (!inst.removable(e) || removed.contains(e)) continue;
    if (!best || inst.cost(e) < inst.cost(*best) ||
        (inst.cost(e) == inst.cost(*best) && e < *best))
      best = e;
  }
  if (!best)
    throw InfeasibleError("shortest path between " + std::to_string(pair.source) + " and " +
                          std::to_string(pair.target) + " has no removable element");
  return *best;
}

struct GestTrace {
  std::size_t iterations = 0;
  std::size_t fallbacks = 0;
  std::size_t samples_per_pair = 0;
};

/// Iteratively removes the element with the largest estimated count of
/// short paths through it (per unit cost) until every pair is separated.
/// Each iteration draws fresh samples on the residual graph, one independent
/// random stream per (iteration, pair), reduced in pair order, so the result
/// depends only on the seed.
inline Solution gest(const Instance& inst, const GestConfig& cfg, GestTrace* trace = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t m = inst.element_count();
  const std::size_t samples =
      cfg.sample_override ? std::max<std::size_t>(1, *cfg.sample_override)
                          : sample_count(inst.targets().size(), inst.graph().vertex_count(), cfg.alpha);
  const std::size_t max_iterations = cfg.max_iterations ? cfg.max_iterations : m + 1000;

  ElementMask removed(m);
  std::vector<Element> chosen;
  GestTrace local;
  local.samples_per_pair = samples;

  std::vector<double> score(m);
  for (std::size_t iteration = 0;; ++iteration) {
    const auto active = detail::active_pairs(inst, removed);
    if (active.empty()) break;
    if (iteration >= max_iterations)
      throw ResourceError("GEST: iteration cap of " + std::to_string(max_iterations) + " reached",
                          cost_of(inst, chosen));
    cfg.deadline.check("GEST");

    // Per-pair accumulators x_i, filled independently and reduced in order.
    std::vector<std::vector<double>> per_pair(active.size());
    auto work = [&](std::size_t slot) {
      const auto& pair = inst.targets()[active[slot]];
      Rng rng(derive_seed(cfg.seed, iteration, active[slot]));
      PathSampler sampler(inst.graph(), inst.mode(), inst.threshold(),
                          Removal::of(removed, inst.mode()));
      auto& x = per_pair[slot];
      x.assign(m, 0.0);
      SampledPath q;
      for (std::size_t l = 0; l < samples; ++l) {
        sampler.sample(pair.source, pair.target, rng, q);
        if (!q.hit) continue;
        const double weight = 1.0 / q.probability;
        for (Element e : q.elements(inst.mode()))
          if (inst.removable(e)) x[e] += weight;
      }
    };
    const unsigned threads =
        std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(active.size())));
    if (threads == 1) {
      for (std::size_t s = 0; s < active.size(); ++s) work(s);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
          for (std::size_t s; (s = next++) < active.size();) work(s);
        });
    }

    std::fill(score.begin(), score.end(), 0.0);
    for (const auto& x : per_pair)
      for (Element e = 0; e < m; ++e) score[e] += x[e] / static_cast<double>(samples);

    std::optional<Element> pick;
    double best = 0.0;
    for (Element e = 0; e < m; ++e) {
      if (score[e] <= 0.0 || removed.contains(e)) continue;
      const double ratio = score[e] / inst.cost(e);
      if (!pick || ratio > best) {
        pick = e;
        best = ratio;
      }
    }
    if (!pick && cfg.fallback) {
      Rng rng(derive_seed(cfg.seed, iteration, hash_string("fallback")));
      pick = gesta_fallback(inst, removed, rng);
      ++local.fallbacks;
    }
    if (pick) {
      removed.insert(*pick);
      chosen.push_back(*pick);
    }
    local.iterations = iteration + 1;
  }

  auto s = make_solution(inst, std::move(chosen), cfg.fallback ? "GESTA" : "GEST");
  s.seed = cfg.seed;
  s.elapsed_ms = detail::elapsed_ms_since(start);
  if (trace) *trace = local;
  return s;
}

}  // namespace tpcut
