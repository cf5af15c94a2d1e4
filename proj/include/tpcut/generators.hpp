#pragma once

// Topology generators, reference instances and target-set selection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tpcut/core.hpp"
#include "tpcut/graph.hpp"

namespace tpcut {

enum class Weighting {
  uniform_real,     // continuous uniform on [1, 10]
  uniform_integer,  // integers 1..10
  unit,             // every length 1
};

namespace detail {

inline double draw_length(Rng& rng, Weighting w) {
  switch (w) {
    case Weighting::unit:
      return 1.0;
    case Weighting::uniform_integer:
      return static_cast<double>(1 + rng.below(10));
    case Weighting::uniform_real:
    default:
      return rng.uniform(1.0, 10.0);
  }
}

inline std::uint64_t pair_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace detail

/// Uniform random simple undirected graph with exactly m edges.
inline Graph gen_er(std::size_t n, std::size_t m, std::uint64_t seed,
                    Weighting weighting = Weighting::uniform_real) {
  const std::size_t max_edges = n * (n - (n > 0 ? 1 : 0)) / 2;
  if (m > max_edges)
    throw InputError("requested " + std::to_string(m) + " edges but at most " +
                     std::to_string(max_edges) + " fit in a simple graph on " + std::to_string(n) +
                     " vertices");
  Rng rng(seed);
  Graph g(n, false);
  std::vector<std::pair<Vertex, Vertex>> picked;
  if (2 * m <= max_edges) {
    std::set<std::uint64_t> used;
    while (picked.size() < m) {
      const auto u = static_cast<Vertex>(rng.below(n));
      const auto v = static_cast<Vertex>(rng.below(n));
      if (u == v || !used.insert(detail::pair_key(u, v)).second) continue;
      picked.emplace_back(std::min(u, v), std::max(u, v));
    }
  } else {
    // Dense: partial Fisher-Yates over all pairs.
    std::vector<std::pair<Vertex, Vertex>> all;
    all.reserve(max_edges);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) all.emplace_back(u, v);
    for (std::size_t i = 0; i < m; ++i) std::swap(all[i], all[i + rng.below(all.size() - i)]);
    picked.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m));
  }
  for (auto [u, v] : picked) g.add_edge(u, v, detail::draw_length(rng, weighting));
  return g;
}

struct WaxmanParams {
  double alpha = 0.15;
  double beta = 0.2;
  Weighting weighting = Weighting::uniform_real;
};

namespace detail {

struct Point {
  double x, y;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Adds nearest-pair edges until the graph on `members` is connected.
inline void patch_connectivity(Graph& g, const std::vector<Vertex>& members,
                               const std::vector<Point>& pos, Rng& rng, Weighting weighting) {
  if (members.size() < 2) return;
  std::vector<std::size_t> comp(g.vertex_count(), SIZE_MAX);
  std::size_t count = 0;
  for (Vertex start : members) {
    if (comp[start] != SIZE_MAX) continue;
    std::vector<Vertex> stack{start};
    comp[start] = count;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const Arc& a : g.out_arcs(v))
        if (comp[a.head] == SIZE_MAX) {
          comp[a.head] = count;
          stack.push_back(a.head);
        }
    }
    ++count;
  }
  // Merge every component into the one holding members[0].
  const std::size_t root = comp[members[0]];
  for (std::size_t c = 0; c < count; ++c) {
    if (c == root) continue;
    double best = kInfinity;
    std::pair<Vertex, Vertex> link{0, 0};
    for (Vertex u : members) {
      if (comp[u] != c) continue;
      for (Vertex v : members) {
        if (comp[v] == c) continue;
        const double d = distance(pos[u], pos[v]);
        if (d < best) {
          best = d;
          link = {u, v};
        }
      }
    }
    g.add_edge(link.first, link.second, draw_length(rng, weighting));
    const std::size_t absorbed = c;
    const std::size_t into = comp[link.second];
    for (Vertex u : members)
      if (comp[u] == absorbed) comp[u] = into;
  }
}

/// Waxman edges among `members` until `target` edges exist, accepting each
/// random candidate pair with probability beta * exp(-dist / (alpha * L)).
inline void waxman_edges(Graph& g, const std::vector<Vertex>& members, const std::vector<Point>& pos,
                         std::size_t target, const WaxmanParams& p, Rng& rng) {
  const std::size_t k = members.size();
  if (k < 2) return;
  target = std::min(target, k * (k - 1) / 2);
  double span = 0.0;
  for (Vertex u : members)
    for (Vertex v : members) span = std::max(span, distance(pos[u], pos[v]));
  if (span <= 0.0) span = 1.0;
  std::set<std::uint64_t> used;
  std::size_t added = 0;
  while (added < target) {
    const Vertex u = members[rng.below(k)];
    const Vertex v = members[rng.below(k)];
    if (u == v || used.count(pair_key(u, v))) continue;
    const double prob = p.beta * std::exp(-distance(pos[u], pos[v]) / (p.alpha * span));
    if (!rng.bernoulli(prob)) continue;
    used.insert(pair_key(u, v));
    g.add_edge(std::min(u, v), std::max(u, v), draw_length(rng, p.weighting));
    ++added;
  }
}

}  // namespace detail

/// Waxman topology on the unit square with `m_target` random edges, then
/// patched to be connected.
inline Graph gen_waxman(std::size_t n, std::size_t m_target, std::uint64_t seed,
                        const WaxmanParams& params = {}) {
  if (!(params.alpha > 0.0) || !(params.beta > 0.0) || params.beta > 1.0)
    throw InputError("Waxman parameters need alpha > 0 and beta in (0, 1]");
  Rng rng(seed);
  std::vector<detail::Point> pos(n);
  for (auto& p : pos) p = {rng.uniform01(), rng.uniform01()};
  Graph g(n, false);
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  detail::waxman_edges(g, all, pos, m_target, params, rng);
  detail::patch_connectivity(g, all, pos, rng, params.weighting);
  return g;
}

/// Two-level topology: an AS-level Waxman graph whose nodes each expand to a
/// router-level Waxman graph; every AS-level edge joins two random routers of
/// the two systems.
inline Graph gen_hierarchical(std::size_t systems, std::size_t routers_per_system,
                              std::size_t as_edges, std::size_t router_edges_per_system,
                              std::uint64_t seed, const WaxmanParams& params = {}) {
  if (systems == 0 || routers_per_system == 0) throw InputError("hierarchical sizes must be positive");
  const Graph top = gen_waxman(systems, as_edges, derive_seed(seed, 0), params);
  const std::size_t n = systems * routers_per_system;
  Graph g(n, false);
  Rng rng(derive_seed(seed, 1));
  std::vector<detail::Point> pos(n);
  for (auto& p : pos) p = {rng.uniform01(), rng.uniform01()};
  for (std::size_t a = 0; a < systems; ++a) {
    std::vector<Vertex> members(routers_per_system);
    std::iota(members.begin(), members.end(), static_cast<Vertex>(a * routers_per_system));
    Rng local(derive_seed(seed, 2, a));
    detail::waxman_edges(g, members, pos, router_edges_per_system, params, local);
    detail::patch_connectivity(g, members, pos, local, params.weighting);
  }
  for (const auto& e : top.edges()) {
    const auto u = static_cast<Vertex>(e.tail * routers_per_system + rng.below(routers_per_system));
    const auto v = static_cast<Vertex>(e.head * routers_per_system + rng.below(routers_per_system));
    g.add_edge(u, v, detail::draw_length(rng, params.weighting));
  }
  return g;
}

/// A generated graph together with the reference instance built on it.
struct ReferenceInstance {
  std::shared_ptr<const Graph> graph;
  Instance instance;
};

/// The 13-vertex, 16-arc motivating example: unit lengths, pair (0, 12), T = 5.
inline ReferenceInstance gen_fig1() {
  auto g = std::make_shared<Graph>(13, true);
  constexpr std::pair<Vertex, Vertex> arcs[] = {
      {0, 5}, {5, 6},  {6, 7},  {7, 12}, {0, 3},  {3, 4}, {4, 6},  {6, 9},
      {9, 11}, {11, 12}, {5, 8}, {8, 10}, {10, 12}, {0, 1}, {1, 2}, {2, 7},
  };
  for (auto [u, v] : arcs) g->add_edge(u, v, 1.0);
  return {g, Instance(g, 5.0, {{0, 12}})};
}

/// Vertex ids used by gen_tightness.
struct TightnessLayout {
  std::size_t k;
  Vertex s() const { return 0; }
  Vertex t() const { return 1; }
  Vertex g(std::size_t i) const { return static_cast<Vertex>(1 + i); }  // i in 1..k
  Vertex o1() const { return static_cast<Vertex>(k + 2); }
  Vertex o2() const { return static_cast<Vertex>(k + 3); }
  std::size_t vertex_count() const { return 4 + k + 2 * ((std::size_t{1} << k) - 1); }
};

/// Worst case for greedy covering: s -> g_i (i = 1..k), 2^{i-1} disjoint
/// two-hop paths from g_i to each of o_1 and o_2, and o_1, o_2 -> t. Unit
/// lengths, single pair (s, t), T = 5. Greedy takes g_k, ..., g_1; {o_1, o_2}
/// is optimal.
inline ReferenceInstance gen_tightness(std::size_t k) {
  if (k < 1 || k > 20) throw InputError("tightness family needs 1 <= k <= 20");
  const TightnessLayout lay{k};
  auto g = std::make_shared<Graph>(lay.vertex_count(), true);
  Vertex next = lay.o2() + 1;
  for (std::size_t i = 1; i <= k; ++i) g->add_edge(lay.s(), lay.g(i), 1.0);
  for (std::size_t i = 1; i <= k; ++i)
    for (Vertex o : {lay.o1(), lay.o2()})
      for (std::size_t j = 0; j < (std::size_t{1} << (i - 1)); ++j) {
        const Vertex mid = next++;
        g->add_edge(lay.g(i), mid, 1.0);
        g->add_edge(mid, o, 1.0);
      }
  g->add_edge(lay.o1(), lay.t(), 1.0);
  g->add_edge(lay.o2(), lay.t(), 1.0);
  return {g, Instance(g, 5.0, {{lay.s(), lay.t()}})};
}

// ---------------------------------------------------------------------------
// Target sets.

enum class TargetKind { RR, HH, HL, LL };

inline std::string_view to_string(TargetKind k) {
  switch (k) {
    case TargetKind::RR: return "RR";
    case TargetKind::HH: return "HH";
    case TargetKind::HL: return "HL";
    case TargetKind::LL: return "LL";
  }
  return "?";
}

inline TargetKind parse_target_kind(std::string_view s) {
  if (s == "RR") return TargetKind::RR;
  if (s == "HH") return TargetKind::HH;
  if (s == "HL") return TargetKind::HL;
  if (s == "LL") return TargetKind::LL;
  throw InputError("unknown target scheme '" + std::string(s) + "' (expected RR, HH, HL or LL)");
}

struct TargetScheme {
  TargetKind kind = TargetKind::RR;
  double zeta = 0.5;
  std::size_t k = 1;
  std::uint64_t seed = 0;
};

/// High-degree set H = {v : deg(v) >= zeta * maxdeg}.
inline std::vector<Vertex> high_degree_set(const Graph& g, double zeta) {
  const double cut = zeta * static_cast<double>(g.max_degree());
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (static_cast<double>(g.degree(v)) >= cut) out.push_back(v);
  return out;
}

/// Low-degree set L = {v : deg(v) <= (1 - zeta) * maxdeg}.
inline std::vector<Vertex> low_degree_set(const Graph& g, double zeta) {
  const double cut = (1.0 - zeta) * static_cast<double>(g.max_degree());
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (static_cast<double>(g.degree(v)) <= cut) out.push_back(v);
  return out;
}

/// k distinct ordered pairs (s, t), s != t, with s and t drawn uniformly from
/// the degree classes named by the scheme. RR ignores zeta.
inline std::vector<TargetPair> gen_targets(const Graph& g, const TargetScheme& scheme) {
  if (scheme.kind != TargetKind::RR && !(scheme.zeta > 0.0 && scheme.zeta < 1.0))
    throw InputError("zeta must lie in (0, 1)");
  std::vector<Vertex> all(g.vertex_count());
  std::iota(all.begin(), all.end(), Vertex{0});
  std::vector<Vertex> sources, sinks;
  switch (scheme.kind) {
    case TargetKind::RR:
      sources = sinks = all;
      break;
    case TargetKind::HH:
      sources = sinks = high_degree_set(g, scheme.zeta);
      break;
    case TargetKind::HL:
      sources = high_degree_set(g, scheme.zeta);
      sinks = low_degree_set(g, scheme.zeta);
      break;
    case TargetKind::LL:
      sources = sinks = low_degree_set(g, scheme.zeta);
      break;
  }
  if (sources.empty()) throw InputError("source degree class is empty for this zeta");
  if (sinks.empty()) throw InputError("target degree class is empty for this zeta");

  std::vector<std::uint8_t> in_sinks(g.vertex_count(), 0);
  for (Vertex v : sinks) in_sinks[v] = 1;
  std::size_t overlap = 0;
  for (Vertex v : sources) overlap += in_sinks[v];
  const std::size_t available = sources.size() * sinks.size() - overlap;
  if (scheme.k > available)
    throw InputError("cannot draw " + std::to_string(scheme.k) + " distinct pairs; only " +
                     std::to_string(available) + " exist");

  Rng rng(scheme.seed);
  std::set<std::pair<Vertex, Vertex>> seen;
  std::vector<TargetPair> out;
  while (out.size() < scheme.k) {
    const Vertex s = sources[rng.below(sources.size())];
    const Vertex t = sinks[rng.below(sinks.size())];
    if (s == t || !seen.insert({s, t}).second) continue;
    out.push_back({s, t});
  }
  return out;
}

}  // namespace tpcut
