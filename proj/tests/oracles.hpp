#pragma once

// Test-only oracles. Each one recomputes a quantity by brute force, without
// going through the code path it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "tpcut/tpcut.hpp"

namespace tpcut::testing {

struct RandomGraphSpec {
  std::size_t n = 8;
  double arc_probability = 0.3;
  bool directed = true;
  int max_length = 1;           // lengths uniform in {1..max_length}
  bool mixed_costs = false;     // vertex/edge costs in {1..5}
};

inline std::shared_ptr<Graph> random_graph(const RandomGraphSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  auto g = std::make_shared<Graph>(spec.n, spec.directed);
  for (Vertex u = 0; u < spec.n; ++u)
    for (Vertex v = 0; v < spec.n; ++v) {
      if (u == v || (!spec.directed && v < u)) continue;
      if (!rng.bernoulli(spec.arc_probability)) continue;
      const double len = static_cast<double>(1 + rng.below(static_cast<std::uint64_t>(spec.max_length)));
      const double cost = spec.mixed_costs ? static_cast<double>(1 + rng.below(5)) : 1.0;
      g->add_edge(u, v, len, cost);
    }
  if (spec.mixed_costs)
    for (Vertex v = 0; v < spec.n; ++v) g->set_vertex_cost(v, static_cast<double>(1 + rng.below(5)));
  return g;
}

/// Uniform-length, uniform-cost single-pair instance (s = 0, t = n - 1)
/// without a direct s-t arc, for the small-T solvers.
inline Instance random_uniform_instance(std::size_t n, double arc_probability, double T,
                                        std::uint64_t seed, bool directed = true) {
  Rng rng(seed);
  auto g = std::make_shared<Graph>(n, directed);
  const Vertex t = static_cast<Vertex>(n - 1);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) {
      if (u == v || (!directed && v < u)) continue;
      if ((u == 0 && v == t) || (u == t && v == 0)) continue;
      if (rng.bernoulli(arc_probability)) g->add_edge(u, v, 1.0);
    }
  return Instance(g, T, {{0, t}});
}

/// A covering instance built directly from a set system: path p consists of
/// the elements sets[p]. Uses edge mode so the element lists live in `edges`.
inline CoveringInstance set_system(const std::vector<std::vector<Element>>& sets,
                                   std::vector<double> costs, std::size_t hop_bound = 1) {
  CoveringInstance cov;
  cov.mode = Mode::edge;
  cov.hop_bound = hop_bound;
  cov.costs = std::move(costs);
  cov.removable.assign(cov.costs.size(), 1);
  cov.covers.resize(cov.costs.size());
  for (std::uint32_t p = 0; p < sets.size(); ++p) {
    Path path;
    path.edges = sets[p];
    cov.paths.push_back(path);
    for (Element e : sets[p]) cov.covers[e].push_back(p);
  }
  return cov;
}

/// Length of the cheapest arc u -> v, or +inf.
inline double arc_length(const Graph& g, Vertex u, Vertex v) {
  double best = kInfinity;
  for (const Arc& a : g.out_arcs(u))
    if (a.head == v) best = std::min(best, g.length(a.edge));
  return best;
}

/// The literal procedure: every vertex sequence of at most T0 + 1 vertices,
/// kept when it is a simple s-t walk along arcs of total length <= T.
/// Vertex mode only. Returns the vertex sequences per pair.
inline std::set<std::pair<std::size_t, std::vector<Vertex>>> naive_vertex_paths(const Instance& inst) {
  std::set<std::pair<std::size_t, std::vector<Vertex>>> out;
  const auto& g = inst.graph();
  const std::size_t n = g.vertex_count();
  const std::size_t max_vertices = inst.hop_bound() + 1;
  std::vector<Vertex> seq;
  std::function<void()> grow = [&] {
    if (seq.size() >= 2) {
      std::set<Vertex> distinct(seq.begin(), seq.end());
      double len = 0.0;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) len += arc_length(g, seq[i], seq[i + 1]);
      for (std::size_t k = 0; k < inst.targets().size(); ++k) {
        const auto& p = inst.targets()[k];
        if (distinct.size() == seq.size() && seq.front() == p.source && seq.back() == p.target &&
            within_threshold(len, inst.threshold()))
          out.insert({k, seq});
      }
    }
    if (seq.size() == max_vertices) return;
    for (Vertex v = 0; v < n; ++v) {
      seq.push_back(v);
      grow();
      seq.pop_back();
    }
  };
  grow();
  return out;
}

/// Minimum cost over all subsets of removable elements that separate every
/// pair, judged by shortest-path feasibility. +inf if none.
inline double exhaustive_opt(const Instance& inst, std::vector<Element>* best_set = nullptr) {
  const auto universe = inst.removable_elements();
  if (universe.size() > 20) throw std::logic_error("exhaustive_opt: universe too large");
  double best = kInfinity;
  std::vector<Element> w;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe.size()); ++mask) {
    w.clear();
    double c = 0.0;
    for (std::size_t i = 0; i < universe.size(); ++i)
      if (mask >> i & 1) {
        w.push_back(universe[i]);
        c += inst.cost(universe[i]);
      }
    if (c >= best) continue;
    if (is_feasible(inst, w)) {
      best = c;
      if (best_set) *best_set = w;
    }
  }
  return best;
}

/// Minimum hitting set of the candidate elements of a covering instance by
/// exhaustive subset search.
inline double exhaustive_hitting_set(const CoveringInstance& cov) {
  const auto universe = cov.candidates();
  if (universe.size() > 22) throw std::logic_error("exhaustive_hitting_set: universe too large");
  double best = cov.paths.empty() ? 0.0 : kInfinity;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << universe.size()); ++mask) {
    double c = 0.0;
    std::vector<std::uint8_t> chosen(cov.element_count(), 0);
    for (std::size_t i = 0; i < universe.size(); ++i)
      if (mask >> i & 1) {
        chosen[universe[i]] = 1;
        c += cov.costs[universe[i]];
      }
    if (c >= best) continue;
    bool all = true;
    for (std::size_t p = 0; p < cov.paths.size() && all; ++p) {
      bool hit = false;
      for (Element e : cov.path_elements(p)) hit = hit || chosen[e];
      all = hit;
    }
    if (all) best = c;
  }
  return best;
}

/// Every leaf of the sequential sampler's decision tree, with its
/// probability. Mirrors the walk definition independently of PathSampler.
struct WalkLeaf {
  std::vector<Vertex> vertices;
  std::vector<EdgeId> edges;
  double probability;
  bool hit;
};

inline std::vector<WalkLeaf> expand_walks(const Graph& g, Vertex u, Vertex v, double T, Mode mode) {
  std::vector<WalkLeaf> out;
  WalkLeaf cur{{u}, {}, 1.0, false};
  std::function<void(double)> rec = [&](double len) {
    const Vertex x = cur.vertices.back();
    if (x == v) {
      out.push_back(cur);
      out.back().hit = true;
      return;
    }
    std::vector<std::pair<Vertex, EdgeId>> options;
    std::set<Vertex> seen_heads;
    // For vertex mode: one option per distinct head using its shortest arc.
    std::map<Vertex, std::pair<double, EdgeId>> best_arc;
    for (const auto& a : g.out_arcs(x)) {
      const double l = g.length(a.edge);
      if (mode == Mode::edge) {
        options.push_back({a.head, a.edge});
      } else {
        auto it = best_arc.find(a.head);
        if (it == best_arc.end() || l < it->second.first) best_arc[a.head] = {l, a.edge};
      }
    }
    if (mode == Mode::vertex)
      for (auto& [h, le] : best_arc) options.push_back({h, le.second});
    std::vector<std::pair<Vertex, EdgeId>> admissible;
    for (auto [h, e] : options) {
      if (std::find(cur.vertices.begin(), cur.vertices.end(), h) != cur.vertices.end()) continue;
      if (!within_threshold(len + g.length(e), T)) continue;
      admissible.push_back({h, e});
    }
    if (admissible.empty()) {
      out.push_back(cur);
      return;
    }
    const double share = 1.0 / static_cast<double>(admissible.size());
    for (auto [h, e] : admissible) {
      cur.vertices.push_back(h);
      cur.edges.push_back(e);
      cur.probability *= share;
      rec(len + g.length(e));
      cur.probability /= share;
      cur.vertices.pop_back();
      cur.edges.pop_back();
    }
  };
  rec(0.0);
  return out;
}

/// max over simple s-t paths of prod(1 - p_e), by exhaustive DFS.
inline double best_delivery_probability(const Graph& per_graph, Vertex s, Vertex t) {
  double best = 0.0;
  std::vector<std::uint8_t> on(per_graph.vertex_count(), 0);
  std::function<void(Vertex, double)> rec = [&](Vertex x, double prod) {
    if (x == t) {
      best = std::max(best, prod);
      return;
    }
    on[x] = 1;
    for (const auto& a : per_graph.out_arcs(x))
      if (!on[a.head]) rec(a.head, prod * (1.0 - per_graph.length(a.edge)));
    on[x] = 0;
  };
  rec(s, 1.0);
  return best;
}

}  // namespace tpcut::testing
