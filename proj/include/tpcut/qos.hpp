#pragma once

// Classical minimum vertex separator baseline (MC) and the packet-error-rate
// to additive-length transform.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <vector>

#include "tpcut/approx.hpp"
#include "tpcut/graph.hpp"

namespace tpcut {

namespace detail {

/// Dinic max flow over real capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : adj_(n), level_(n), it_(n) {}

  void add_arc(std::size_t u, std::size_t v, double cap) {
    adj_[u].push_back(arcs_.size());
    arcs_.push_back({v, cap});
    adj_[v].push_back(arcs_.size());
    arcs_.push_back({u, 0.0});
  }

  double run(std::size_t s, std::size_t t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (true) {
        const double f = dfs(s, t, kInfinity);
        if (f <= 0.0) break;
        flow += f;
        if (!std::isfinite(flow)) return flow;
      }
    }
    return flow;
  }

  /// Vertices reachable from s in the final residual graph.
  std::vector<std::uint8_t> reachable(std::size_t s) const {
    std::vector<std::uint8_t> seen(adj_.size(), 0);
    std::queue<std::size_t> q;
    seen[s] = 1;
    q.push(s);
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto id : adj_[u]) {
        const auto& a = arcs_[id];
        if (a.cap > kEps && !seen[a.to]) {
          seen[a.to] = 1;
          q.push(a.to);
        }
      }
    }
    return seen;
  }

 private:
  static constexpr double kEps = 1e-12;
  struct FlowArc {
    std::size_t to;
    double cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto id : adj_[u]) {
        const auto& a = arcs_[id];
        if (a.cap > kEps && level_[a.to] < 0) {
          level_[a.to] = level_[u] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(std::size_t u, std::size_t t, double pushed) {
    if (u == t) return pushed;
    for (; it_[u] < adj_[u].size(); ++it_[u]) {
      const auto id = adj_[u][it_[u]];
      auto& a = arcs_[id];
      if (a.cap <= kEps || level_[a.to] != level_[u] + 1) continue;
      const double got = dfs(a.to, t, std::min(pushed, a.cap));
      if (got > 0.0) {
        a.cap -= got;
        arcs_[id ^ 1].cap += got;
        return got;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<FlowArc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

}  // namespace detail

/// Minimum-cost set of vertices other than s, t whose removal disconnects s
/// from t. Each vertex v becomes v_in -> v_out with capacity c(v); original
/// arcs get infinite capacity; the cut is read off residual reachability.
inline Solution min_vertex_cut(const Graph& g, Vertex s, Vertex t) {
  const auto start = std::chrono::steady_clock::now();
  require_vertex(g, s);
  require_vertex(g, t);
  if (s == t) throw InputError("min_vertex_cut needs distinct endpoints");
  if (g.has_arc(s, t)) throw InfeasibleError("direct edge between s and t: no finite vertex cut");

  const std::size_t n = g.vertex_count();
  auto in = [](Vertex v) { return 2 * static_cast<std::size_t>(v); };
  auto out = [](Vertex v) { return 2 * static_cast<std::size_t>(v) + 1; };
  detail::MaxFlow flow(2 * n);
  for (Vertex v = 0; v < n; ++v) {
    const bool endpoint = v == s || v == t;
    flow.add_arc(in(v), out(v), endpoint ? kInfinity : g.vertex_cost(v));
  }
  for (Vertex v = 0; v < n; ++v)
    for (const Arc& a : g.out_arcs(v)) flow.add_arc(out(v), in(a.head), kInfinity);

  const double value = flow.run(out(s), in(t));
  if (!std::isfinite(value))
    throw InfeasibleError("every s-t path runs through unremovable vertices");
  const auto seen = flow.reachable(out(s));
  Solution sol;
  sol.algorithm = "MC";
  for (Vertex v = 0; v < n; ++v)
    if (v != s && v != t && seen[in(v)] && !seen[out(v)]) sol.elements.push_back(v);
  for (Vertex v : sol.elements) sol.cost += g.vertex_cost(v);
  sol.feasible = true;
  sol.elapsed_ms = detail::elapsed_ms_since(start);
  return sol;
}

/// MC on a single-pair instance, with feasibility judged against the instance.
inline Solution min_vertex_cut(const Instance& inst) {
  if (inst.targets().size() != 1) throw InputError("MC applies to a single target pair");
  if (inst.mode() != Mode::vertex) throw InputError("MC is a vertex separator");
  auto s = min_vertex_cut(inst.graph(), inst.targets()[0].source, inst.targets()[0].target);
  const auto elapsed = s.elapsed_ms;
  s = make_solution(inst, std::move(s.elements), "MC");
  s.elapsed_ms = elapsed;
  return s;
}

/// Packet error rate p in (0, 1) to additive length -ln(1 - p).
inline double per_to_length(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("packet error rate must lie in (0, 1)");
  return -std::log1p(-p);
}

/// Length threshold equivalent to a cumulative packet-error threshold P.
inline double per_threshold(double P) {
  if (!(P > 0.0 && P < 1.0)) throw InputError("packet error threshold must lie in (0, 1)");
  return -std::log1p(-P);
}

/// Copy of g whose edge lengths (holding packet error rates) are transformed.
inline Graph transform_per_graph(const Graph& g) {
  Graph out(g.vertex_count(), g.directed());
  for (const auto& e : g.edges()) out.add_edge(e.tail, e.head, per_to_length(e.length), e.cost);
  for (Vertex v = 0; v < g.vertex_count(); ++v) out.set_vertex_cost(v, g.vertex_cost(v));
  return out;
}

/// Lowest achievable cumulative packet error rate from s to t, for a graph
/// whose edge lengths hold per-edge error rates: 1 - exp(-d(s, t)).
inline double cumulative_per(const Graph& per_graph, Vertex s, Vertex t) {
  const auto g = transform_per_graph(per_graph);
  return -std::expm1(-shortest_distance(g, s, t));
}

}  // namespace tpcut
