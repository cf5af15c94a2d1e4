#pragma once

// Exact solvers: branch-and-bound minimum hitting set over the path family,
// and the polynomial uniform-length cases T0 <= 3.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "tpcut/approx.hpp"
#include "tpcut/graph.hpp"
#include "tpcut/pathspace.hpp"

namespace tpcut {

struct ExactOptions {
  std::size_t max_nodes = 10'000'000;
  Deadline deadline;
};

namespace detail {

class HittingSetSearch {
 public:
  HittingSetSearch(const CoveringInstance& cov, const ExactOptions& opts)
      : cov_(cov),
        opts_(opts),
        hits_(cov.paths.size(), 0),
        excluded_(cov.element_count(), 0),
        residual_(cov.element_count(), 0.0) {}

  void seed_incumbent(std::vector<Element> elements, double cost) {
    best_ = std::move(elements);
    best_cost_ = cost;
    have_best_ = true;
  }

  void set_cap(double cap) { best_cost_ = std::min(best_cost_, cap + 2 * slack(cap)); }

  void run() { search(0.0); }

  bool found() const { return have_best_; }
  const std::vector<Element>& best() const { return best_; }
  double best_cost() const { return best_cost_; }
  std::size_t nodes() const { return nodes_; }

 private:
  static double slack(double c) { return 1e-9 * std::max(1.0, std::abs(c)); }

  bool allowed(Element e) const { return cov_.removable[e] && !excluded_[e]; }

  std::size_t allowed_count(std::size_t p) const {
    std::size_t n = 0;
    for (Element e : cov_.path_elements(p)) n += allowed(e);
    return n;
  }

  // Greedy dual packing over the uncovered paths: a valid lower bound on the
  // cost still needed to hit all of them.
  double packing_bound() {
    for (std::size_t p = 0; p < cov_.paths.size(); ++p)
      if (!hits_[p])
        for (Element e : cov_.path_elements(p)) residual_[e] = cov_.costs[e];
    double bound = 0.0;
    for (std::size_t p = 0; p < cov_.paths.size(); ++p) {
      if (hits_[p]) continue;
      double y = kInfinity;
      for (Element e : cov_.path_elements(p))
        if (allowed(e)) y = std::min(y, residual_[e]);
      if (y <= 0.0) continue;
      bound += y;
      for (Element e : cov_.path_elements(p))
        if (allowed(e)) residual_[e] -= y;
    }
    return bound;
  }

  void search(double cost) {
    if (++nodes_ > opts_.max_nodes)
      throw ResourceError("exact search: node budget of " + std::to_string(opts_.max_nodes) +
                              " exhausted",
                          have_best_ ? std::optional<double>(best_cost_) : std::nullopt);
    if ((nodes_ & 1023) == 0) {
      if (opts_.deadline.expired())
        throw TimeoutError("exact search: time budget exhausted",
                           have_best_ ? std::optional<double>(best_cost_) : std::nullopt);
    }

    // Branch on the uncovered path with the fewest remaining choices.
    std::size_t branch = SIZE_MAX;
    std::size_t fewest = SIZE_MAX;
    for (std::size_t p = 0; p < cov_.paths.size(); ++p) {
      if (hits_[p]) continue;
      const std::size_t a = allowed_count(p);
      if (a == 0) return;
      if (a < fewest) {
        fewest = a;
        branch = p;
      }
    }
    if (branch == SIZE_MAX) {
      if (have_best_ ? cost < best_cost_ - slack(best_cost_) : cost <= best_cost_) {
        best_ = chosen_;
        best_cost_ = cost;
        have_best_ = true;
      }
      return;
    }
    if (cost + packing_bound() >= best_cost_ - slack(best_cost_)) return;

    std::vector<Element> options;
    for (Element e : cov_.path_elements(branch))
      if (allowed(e)) options.push_back(e);
    std::sort(options.begin(), options.end(), [&](Element a, Element b) {
      return std::pair(cov_.costs[a], a) < std::pair(cov_.costs[b], b);
    });

    std::size_t excluded_here = 0;
    for (Element e : options) {
      if (cost + cov_.costs[e] < best_cost_ - slack(best_cost_)) {
        chosen_.push_back(e);
        for (auto p : cov_.covers[e]) ++hits_[p];
        excluded_[e] = 1;  // while taken, e need not be branched on again
        search(cost + cov_.costs[e]);
        for (auto p : cov_.covers[e]) --hits_[p];
        chosen_.pop_back();
      } else {
        excluded_[e] = 1;
      }
      // Later siblings exclude every earlier choice.
      ++excluded_here;
    }
    for (std::size_t i = 0; i < excluded_here; ++i) excluded_[options[i]] = 0;
  }

  const CoveringInstance& cov_;
  const ExactOptions& opts_;
  std::vector<std::uint32_t> hits_;
  std::vector<std::uint8_t> excluded_;
  std::vector<double> residual_;
  std::vector<Element> chosen_;
  std::vector<Element> best_;
  double best_cost_ = kInfinity;
  bool have_best_ = false;
  std::size_t nodes_ = 0;
};

}  // namespace detail

/// Minimum-cost hitting set of the path family by branch and bound. With a
/// cost cap, only sets of cost <= cap are sought; if none exists the result
/// is marked infeasible.
inline Solution opt_hitting_set(const CoveringInstance& cov, std::optional<double> cost_cap = {},
                                const ExactOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  detail::HittingSetSearch search(cov, opts);
  if (!cov.paths.empty()) {
    const auto greedy = greedy_cover(cov, opts.deadline);
    double greedy_cost = 0.0;
    for (Element e : greedy) greedy_cost += cov.costs[e];
    if (!cost_cap || greedy_cost <= *cost_cap) search.seed_incumbent(greedy, greedy_cost);
    if (cost_cap) search.set_cap(*cost_cap);
    search.run();
  } else {
    search.seed_incumbent({}, 0.0);
  }
  Solution s;
  s.algorithm = "OPT";
  s.feasible = search.found();
  if (search.found()) {
    s.elements = search.best();
    std::sort(s.elements.begin(), s.elements.end());
    for (Element e : s.elements) s.cost += cov.costs[e];
  } else {
    s.cost = kInfinity;
  }
  s.elapsed_ms = detail::elapsed_ms_since(start);
  return s;
}

/// OPT for a full instance: enumerate, then solve the hitting-set program.
inline Solution opt(const Instance& inst, const SolverOptions& opts = {},
                    const ExactOptions& exact = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto cov = enumerate_paths(inst, detail::with_deadline(opts.enumeration, opts.deadline));
  ExactOptions eo = exact;
  eo.deadline = opts.deadline;
  auto hs = opt_hitting_set(cov, std::nullopt, eo);
  auto s = make_solution(inst, std::move(hs.elements), "OPT");
  s.elapsed_ms = detail::elapsed_ms_since(start);
  return s;
}

// ---------------------------------------------------------------------------
// Bipartite matching and König covers.

struct BipartiteCover {
  std::size_t matching_size = 0;
  std::vector<std::size_t> left;   // cover vertices on the left side
  std::vector<std::size_t> right;  // cover vertices on the right side
};

/// Maximum matching by Hopcroft-Karp phases, then the minimum vertex cover
/// from alternating reachability out of the unmatched left vertices.
inline BipartiteCover minimum_vertex_cover(std::size_t left_size, std::size_t right_size,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  constexpr std::size_t kFree = SIZE_MAX;
  std::vector<std::vector<std::size_t>> adj(left_size);
  for (auto [l, r] : edges) adj.at(l).push_back(r);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  std::vector<std::size_t> match_l(left_size, kFree), match_r(right_size, kFree);
  std::vector<std::size_t> layer(left_size);

  auto bfs = [&] {
    std::queue<std::size_t> q;
    bool reachable_free = false;
    for (std::size_t l = 0; l < left_size; ++l) {
      layer[l] = match_l[l] == kFree ? 0 : kFree;
      if (match_l[l] == kFree) q.push(l);
    }
    while (!q.empty()) {
      const auto l = q.front();
      q.pop();
      for (auto r : adj[l]) {
        const auto next = match_r[r];
        if (next == kFree) {
          reachable_free = true;
        } else if (layer[next] == kFree) {
          layer[next] = layer[l] + 1;
          q.push(next);
        }
      }
    }
    return reachable_free;
  };
  std::vector<std::size_t> it(left_size);
  auto dfs = [&](auto&& self, std::size_t l) -> bool {
    for (; it[l] < adj[l].size(); ++it[l]) {
      const auto r = adj[l][it[l]];
      const auto next = match_r[r];
      if (next == kFree || (layer[next] == layer[l] + 1 && self(self, next))) {
        match_l[l] = r;
        match_r[r] = l;
        return true;
      }
    }
    layer[l] = kFree;
    return false;
  };

  BipartiteCover out;
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (std::size_t l = 0; l < left_size; ++l)
      if (match_l[l] == kFree && dfs(dfs, l)) ++out.matching_size;
  }

  std::vector<std::uint8_t> seen_l(left_size, 0), seen_r(right_size, 0);
  std::queue<std::size_t> q;
  for (std::size_t l = 0; l < left_size; ++l)
    if (match_l[l] == kFree) {
      seen_l[l] = 1;
      q.push(l);
    }
  while (!q.empty()) {
    const auto l = q.front();
    q.pop();
    for (auto r : adj[l]) {
      if (seen_r[r]) continue;
      seen_r[r] = 1;
      const auto next = match_r[r];
      if (next != kFree && !seen_l[next]) {
        seen_l[next] = 1;
        q.push(next);
      }
    }
  }
  for (std::size_t l = 0; l < left_size; ++l)
    if (!seen_l[l]) out.left.push_back(l);
  for (std::size_t r = 0; r < right_size; ++r)
    if (seen_r[r]) out.right.push_back(r);
  return out;
}

// ---------------------------------------------------------------------------
// Uniform single-pair instances with small hop bound.

namespace detail {

/// Checks the preconditions shared by the small-T solvers and returns T0.
inline std::size_t require_uniform_single_pair(const Instance& inst) {
  if (inst.mode() != Mode::vertex) throw InputError("small-T exact solver needs vertex mode");
  if (inst.targets().size() != 1) throw InputError("small-T exact solver needs a single pair");
  const auto& g = inst.graph();
  const double q = g.min_length();
  for (const auto& e : g.edges())
    if (e.length != q) throw InputError("small-T exact solver needs uniform edge lengths");
  const auto [s, t] = inst.targets()[0];
  std::optional<double> c;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (v == s || v == t) continue;
    if (!inst.removable(v)) throw InputError("small-T exact solver needs every inner vertex removable");
    if (c && g.vertex_cost(v) != *c) throw InputError("small-T exact solver needs uniform vertex costs");
    c = g.vertex_cost(v);
  }
  return inst.hop_bound();
}

inline std::vector<Vertex> two_hop_midpoints(const Graph& g, Vertex s, Vertex t) {
  std::vector<Vertex> mids;
  for (const Arc& a : g.out_arcs(s))
    if (a.head != s && a.head != t && g.has_arc(a.head, t) &&
        (mids.empty() || mids.back() != a.head))
      mids.push_back(a.head);
  return mids;
}

inline Solution small_t_solution(const Instance& inst, std::vector<Element> w, const char* name,
                                 std::chrono::steady_clock::time_point start) {
  auto s = make_solution(inst, std::move(w), name);
  s.elapsed_ms = elapsed_ms_since(start);
  return s;
}

}  // namespace detail

/// T0 = 2: every 2-hop path s-x-t must lose its midpoint, and nothing else
/// is needed.
inline Solution exact_T2(const Instance& inst) {
  const auto start = std::chrono::steady_clock::now();
  if (detail::require_uniform_single_pair(inst) != 2) throw InputError("exact_T2 needs T0 = 2");
  const auto [s, t] = inst.targets()[0];
  if (inst.graph().has_arc(s, t)) throw InfeasibleError("direct edge between s and t");
  return detail::small_t_solution(inst, detail::two_hop_midpoints(inst.graph(), s, t), "T2-EXACT",
                                  start);
}

/// T0 = 3: remove all 2-hop midpoints, then cover the surviving 3-hop paths
/// s-x-y-t with a minimum vertex cover of the bipartite graph X x Y.
inline Solution exact_T3(const Instance& inst, BipartiteCover* step_two = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  if (detail::require_uniform_single_pair(inst) != 3) throw InputError("exact_T3 needs T0 = 3");
  const auto& g = inst.graph();
  const auto [s, t] = inst.targets()[0];
  if (g.has_arc(s, t)) throw InfeasibleError("direct edge between s and t");

  auto w = detail::two_hop_midpoints(g, s, t);
  std::vector<std::uint8_t> gone(g.vertex_count(), 0);
  for (Vertex v : w) gone[v] = 1;
  gone[s] = gone[t] = 1;

  std::vector<std::size_t> left_id(g.vertex_count(), SIZE_MAX), right_id(g.vertex_count(), SIZE_MAX);
  std::vector<Vertex> left, right;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const Arc& a : g.out_arcs(s)) {
    const Vertex x = a.head;
    if (gone[x]) continue;
    for (const Arc& b : g.out_arcs(x)) {
      const Vertex y = b.head;
      if (gone[y] || y == x || !g.has_arc(y, t)) continue;
      if (left_id[x] == SIZE_MAX) {
        left_id[x] = left.size();
        left.push_back(x);
      }
      if (right_id[y] == SIZE_MAX) {
        right_id[y] = right.size();
        right.push_back(y);
      }
      edges.emplace_back(left_id[x], right_id[y]);
    }
  }
  const auto cover = minimum_vertex_cover(left.size(), right.size(), edges);
  for (auto l : cover.left) w.push_back(left[l]);
  for (auto r : cover.right) w.push_back(right[r]);
  if (step_two) *step_two = cover;
  return detail::small_t_solution(inst, std::move(w), "T3-EXACT", start);
}

/// Dispatches uniform single-pair instances with T0 <= 3 to the matching
/// polynomial solver.
inline Solution exact_small_t(const Instance& inst) {
  const std::size_t t0 = detail::require_uniform_single_pair(inst);
  const auto [s, t] = inst.targets()[0];
  switch (t0) {
    case 0:
      return make_solution(inst, {}, "T3-EXACT");
    case 1:
      if (inst.graph().has_arc(s, t)) throw InfeasibleError("direct edge between s and t");
      return make_solution(inst, {}, "T3-EXACT");
    case 2: {
      auto sol = exact_T2(inst);
      sol.algorithm = "T3-EXACT";
      return sol;
    }
    case 3:
      return exact_T3(inst);
    default:
      throw InputError("T3-EXACT needs T0 <= 3");
  }
}

}  // namespace tpcut
