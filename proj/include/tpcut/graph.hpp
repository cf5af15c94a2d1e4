#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tpcut/core.hpp"

namespace tpcut {

struct Arc {
  Vertex head;
  EdgeId edge;
};

struct EdgeRecord {
  Vertex tail;
  Vertex head;
  double length;
  double cost;
};

/// Directed graph with positive edge lengths and positive vertex/edge costs.
/// Undirected edges are stored as two arcs sharing one edge id.
///
/// Out-arcs of every vertex are kept sorted by (head, length, edge id), so
/// traversals visit neighbours in ascending id order and the first arc to a
/// given head is the shortest one.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t vertex_count, bool directed)
      : directed_(directed),
        out_(vertex_count),
        vertex_costs_(vertex_count, 1.0),
        in_degree_(vertex_count, 0) {}

  /// Adds edge (u, v). Lengths and costs are not checked here; see validate().
  EdgeId add_edge(Vertex u, Vertex v, double length, double cost = 1.0) {
    check_vertex(u);
    check_vertex(v);
    const auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back({u, v, length, cost});
    insert_arc(u, {v, id});
    ++in_degree_[v];
    if (!directed_) {
      insert_arc(v, {u, id});
      ++in_degree_[u];
    }
    return id;
  }

  void set_vertex_cost(Vertex v, double cost) {
    check_vertex(v);
    vertex_costs_[v] = cost;
  }

  void set_edge_cost(EdgeId e, double cost) { edges_.at(e).cost = cost; }

  std::size_t vertex_count() const { return out_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool directed() const { return directed_; }

  std::span<const Arc> out_arcs(Vertex v) const { return out_[v]; }
  const EdgeRecord& edge(EdgeId e) const { return edges_[e]; }
  std::span<const EdgeRecord> edges() const { return edges_; }
  double length(EdgeId e) const { return edges_[e].length; }
  double vertex_cost(Vertex v) const { return vertex_costs_[v]; }
  double edge_cost(EdgeId e) const { return edges_[e].cost; }
  std::span<const double> vertex_costs() const { return vertex_costs_; }

  bool valid_vertex(Vertex v) const { return v < out_.size(); }

  /// Total degree: incident edges for undirected graphs, in + out otherwise.
  std::size_t degree(Vertex v) const {
    return directed_ ? out_[v].size() + in_degree_[v] : out_[v].size();
  }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (Vertex v = 0; v < vertex_count(); ++v) best = std::max(best, degree(v));
    return best;
  }

  /// Smallest edge length; +inf for an edgeless graph.
  double min_length() const {
    double q = kInfinity;
    for (const auto& e : edges_) q = std::min(q, e.length);
    return q;
  }

  bool has_arc(Vertex u, Vertex v) const {
    const auto& arcs = out_[u];
    auto it = std::lower_bound(arcs.begin(), arcs.end(), v,
                               [](const Arc& a, Vertex x) { return a.head < x; });
    return it != arcs.end() && it->head == v;
  }

 private:
  void check_vertex(Vertex v) const {
    if (v >= out_.size())
      throw InputError("vertex id " + std::to_string(v) + " out of range (n = " +
                       std::to_string(out_.size()) + ")");
  }

  void insert_arc(Vertex from, Arc arc) {
    auto& arcs = out_[from];
    auto key = [this](const Arc& a) {
      return std::tuple(a.head, edges_[a.edge].length, a.edge);
    };
    auto it = std::upper_bound(arcs.begin(), arcs.end(), arc,
                               [&](const Arc& x, const Arc& y) { return key(x) < key(y); });
    arcs.insert(it, arc);
  }

  bool directed_ = true;
  std::vector<std::vector<Arc>> out_;
  std::vector<EdgeRecord> edges_;
  std::vector<double> vertex_costs_;
  std::vector<std::size_t> in_degree_;
};

/// Membership mask over the elements of one mode. Removal is applied as a
/// filter at expansion time; the graph is never mutated.
class ElementMask {
 public:
  ElementMask() = default;
  explicit ElementMask(std::size_t size) : bits_(size, 0) {}
  ElementMask(std::size_t size, std::span<const Element> elements) : bits_(size, 0) {
    for (Element e : elements) {
      if (e >= size) throw InputError("element id " + std::to_string(e) + " out of range");
      bits_[e] = 1;
    }
  }

  bool contains(Element e) const { return e < bits_.size() && bits_[e] != 0; }
  void insert(Element e) { bits_.at(e) = 1; }
  void erase(Element e) { bits_.at(e) = 0; }
  std::size_t size() const { return bits_.size(); }

 private:
  std::vector<std::uint8_t> bits_;
};

/// Vertex and edge removal filters for one traversal.
struct Removal {
  const ElementMask* vertices = nullptr;
  const ElementMask* edges = nullptr;

  static Removal of(const ElementMask& mask, Mode mode) {
    return mode == Mode::vertex ? Removal{&mask, nullptr} : Removal{nullptr, &mask};
  }

  bool vertex_removed(Vertex v) const { return vertices && vertices->contains(v); }
  bool edge_removed(EdgeId e) const { return edges && edges->contains(e); }
};

struct ShortestPath {
  double length = kInfinity;
  std::vector<Vertex> vertices;
  std::vector<EdgeId> edges;
};

namespace detail {

/// Binary-heap label-setting search from u. Stops once v is settled or the
/// frontier exceeds `limit`. Returns distances and predecessor arcs.
struct SearchResult {
  std::vector<double> dist;
  std::vector<std::pair<Vertex, EdgeId>> parent;
};

inline SearchResult dijkstra(const Graph& g, Vertex u, Vertex v, const Removal& removal,
                             double limit = kInfinity) {
  const std::size_t n = g.vertex_count();
  SearchResult r{std::vector<double>(n, kInfinity),
                 std::vector<std::pair<Vertex, EdgeId>>(n, {static_cast<Vertex>(n), 0})};
  if (removal.vertex_removed(u)) return r;
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  r.dist[u] = 0.0;
  heap.push({0.0, u});
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (d > r.dist[x]) continue;
    if (x == v || d > limit) break;
    for (const Arc& a : g.out_arcs(x)) {
      if (removal.edge_removed(a.edge) || removal.vertex_removed(a.head)) continue;
      const double nd = d + g.length(a.edge);
      if (nd < r.dist[a.head]) {
        r.dist[a.head] = nd;
        r.parent[a.head] = {x, a.edge};
        heap.push({nd, a.head});
      }
    }
  }
  return r;
}

}  // namespace detail

inline void require_vertex(const Graph& g, Vertex v) {
  if (!g.valid_vertex(v))
    throw InputError("vertex id " + std::to_string(v) + " out of range (n = " +
                     std::to_string(g.vertex_count()) + ")");
}

/// d-shortest-path length from u to v with the removed elements deleted.
/// A removed endpoint makes the distance infinite.
inline double shortest_distance(const Graph& g, Vertex u, Vertex v, const Removal& removal = {}) {
  require_vertex(g, u);
  require_vertex(g, v);
  if (removal.vertex_removed(u) || removal.vertex_removed(v)) return kInfinity;
  if (u == v) return 0.0;
  return detail::dijkstra(g, u, v, removal).dist[v];
}

inline double shortest_distance(const Graph& g, Vertex u, Vertex v,
                                 std::span<const Element> removed, Mode mode) {
  const ElementMask mask(mode == Mode::vertex ? g.vertex_count() : g.edge_count(), removed);
  return shortest_distance(g, u, v, Removal::of(mask, mode));
}

/// One shortest path (ties resolved by the heap order). Empty if unreachable.
inline ShortestPath shortest_path(const Graph& g, Vertex u, Vertex v, const Removal& removal = {}) {
  require_vertex(g, u);
  require_vertex(g, v);
  ShortestPath p;
  if (removal.vertex_removed(u) || removal.vertex_removed(v)) return p;
  auto r = detail::dijkstra(g, u, v, removal);
  if (!std::isfinite(r.dist[v])) return p;
  p.length = r.dist[v];
  for (Vertex x = v; x != u; x = r.parent[x].first) {
    p.vertices.push_back(x);
    p.edges.push_back(r.parent[x].second);
  }
  p.vertices.push_back(u);
  std::reverse(p.vertices.begin(), p.vertices.end());
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

struct TargetPair {
  Vertex source;
  Vertex target;
  friend bool operator==(const TargetPair&, const TargetPair&) = default;
  friend auto operator<=>(const TargetPair&, const TargetPair&) = default;
};

/// Graph + threshold T + target pairs + element mode + forbidden elements.
///
/// In vertex mode with a single pair both endpoints are forbidden; with
/// several pairs the endpoints are removable.
class Instance {
 public:
  Instance(std::shared_ptr<const Graph> graph, double threshold, std::vector<TargetPair> targets,
           Mode mode = Mode::vertex)
      : graph_(std::move(graph)),
        threshold_(threshold),
        targets_(std::move(targets)),
        mode_(mode),
        forbidden_(mode == Mode::vertex ? graph_->vertex_count() : graph_->edge_count()) {
    for (const auto& p : targets_) {
      require_vertex(*graph_, p.source);
      require_vertex(*graph_, p.target);
    }
    if (mode_ == Mode::vertex && targets_.size() == 1) {
      forbidden_.insert(targets_[0].source);
      forbidden_.insert(targets_[0].target);
    }
  }

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
  double threshold() const { return threshold_; }
  const std::vector<TargetPair>& targets() const { return targets_; }
  Mode mode() const { return mode_; }

  std::size_t element_count() const { return forbidden_.size(); }

  void forbid(Element e) {
    if (e >= element_count()) throw InputError("element id " + std::to_string(e) + " out of range");
    forbidden_.insert(e);
  }
  void allow(Element e) { forbidden_.erase(e); }
  bool forbidden(Element e) const { return forbidden_.contains(e); }

  double cost(Element e) const {
    return mode_ == Mode::vertex ? graph_->vertex_cost(e) : graph_->edge_cost(e);
  }

  /// Not forbidden and not carrying the unremovable cost sentinel.
  bool removable(Element e) const { return !forbidden(e) && std::isfinite(cost(e)); }

  /// T0 = floor(T / q_min): hop bound on any path of length at most T.
  std::size_t hop_bound() const {
    const double q = graph_->min_length();
    if (!std::isfinite(q) || q <= 0.0) return 0;
    return static_cast<std::size_t>(std::floor(threshold_ / q + kLengthTolerance));
  }

  std::vector<Element> removable_elements() const {
    std::vector<Element> out;
    for (Element e = 0; e < element_count(); ++e)
      if (removable(e)) out.push_back(e);
    return out;
  }

 private:
  std::shared_ptr<const Graph> graph_;
  double threshold_;
  std::vector<TargetPair> targets_;
  Mode mode_;
  ElementMask forbidden_;
};

struct Solution {
  std::vector<Element> elements;  // sorted ascending
  double cost = 0.0;
  bool feasible = false;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  std::int64_t elapsed_ms = 0;

  std::size_t size() const { return elements.size(); }
};

/// True iff a pair is still within distance T under the given removal.
inline bool pair_unseparated(const Instance& inst, const TargetPair& pair, const Removal& removal) {
  const auto& g = inst.graph();
  if (removal.vertex_removed(pair.source) || removal.vertex_removed(pair.target)) return false;
  const auto r =
      detail::dijkstra(g, pair.source, pair.target, removal, threshold_limit(inst.threshold()));
  return within_threshold(r.dist[pair.target], inst.threshold());
}

inline bool separated_by(const Instance& inst, const ElementMask& mask) {
  const auto removal = Removal::of(mask, inst.mode());
  for (const auto& p : inst.targets())
    if (pair_unseparated(inst, p, removal)) return false;
  return true;
}

/// Every target pair is at distance > T after removing w.
inline bool is_feasible(const Instance& inst, std::span<const Element> w) {
  for (Element e : w) {
    if (e >= inst.element_count())
      throw InputError("element id " + std::to_string(e) + " out of range");
    if (inst.forbidden(e))
      throw ContractError("solution contains forbidden element " + std::to_string(e));
  }
  return separated_by(inst, ElementMask(inst.element_count(), w));
}

inline double cost_of(const Instance& inst, std::span<const Element> w) {
  double c = 0.0;
  for (Element e : w) c += inst.cost(e);
  return c;
}

/// Packages an element set as a Solution, computing cost and feasibility.
inline Solution make_solution(const Instance& inst, std::vector<Element> elements,
                              std::string algorithm) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  Solution s;
  s.cost = cost_of(inst, elements);
  s.feasible = is_feasible(inst, elements);
  s.elements = std::move(elements);
  s.algorithm = std::move(algorithm);
  return s;
}

struct Diagnostic {
  enum class Kind { structure, infeasible };
  Kind kind;
  std::string message;
};

/// Structural checks plus a feasibility check (removing every removable
/// element must separate all pairs). Empty result means ok.
inline std::vector<Diagnostic> validate(const Instance& inst) {
  std::vector<Diagnostic> out;
  auto structural = [&](std::string msg) {
    out.push_back({Diagnostic::Kind::structure, std::move(msg)});
  };
  const auto& g = inst.graph();

  if (!(inst.threshold() > 0.0) || !std::isfinite(inst.threshold()))
    structural("threshold T must be a positive finite number");
  if (inst.targets().empty()) structural("target set is empty");
  for (std::size_t i = 0; i < inst.targets().size(); ++i) {
    const auto& p = inst.targets()[i];
    if (p.source == p.target)
      structural("target pair " + std::to_string(i) + " has identical endpoints");
    for (std::size_t j = 0; j < i; ++j)
      if (inst.targets()[j] == p) structural("target pair " + std::to_string(i) + " is a duplicate");
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& rec = g.edge(e);
    if (!(rec.length > 0.0) || !std::isfinite(rec.length))
      structural("edge " + std::to_string(e) + " has non-positive or non-finite length");
    if (rec.tail == rec.head) structural("edge " + std::to_string(e) + " is a self-loop");
    if (inst.mode() == Mode::edge && !(rec.cost > 0.0))
      structural("edge " + std::to_string(e) + " has non-positive cost");
  }
  if (inst.mode() == Mode::vertex)
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      if (!(g.vertex_cost(v) > 0.0))
        structural("vertex " + std::to_string(v) + " has non-positive cost");
  if (!out.empty()) return out;

  ElementMask all(inst.element_count());
  for (Element e = 0; e < inst.element_count(); ++e)
    if (inst.removable(e)) all.insert(e);
  const auto removal = Removal::of(all, inst.mode());
  for (std::size_t i = 0; i < inst.targets().size(); ++i)
    if (pair_unseparated(inst, inst.targets()[i], removal))
      out.push_back({Diagnostic::Kind::infeasible,
                     "target pair " + std::to_string(i) +
                         " cannot be separated: a path of length <= T uses only unremovable elements"});
  return out;
}

}  // namespace tpcut
