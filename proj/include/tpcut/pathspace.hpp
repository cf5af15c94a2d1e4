#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "tpcut/core.hpp"
#include "tpcut/graph.hpp"

namespace tpcut {

/// A simple path p_0 ... p_l between the endpoints of one target pair.
struct Path {
  std::vector<Vertex> vertices;
  std::vector<EdgeId> edges;
  double length = 0.0;
  std::size_t pair_index = 0;

  std::span<const Element> elements(Mode mode) const {
    return mode == Mode::vertex ? std::span<const Element>(vertices)
                                : std::span<const Element>(edges);
  }
};

/// The path family P viewed as a set-cover instance: paths are the items to
/// cover, removable elements are the covering sets.
struct CoveringInstance {
  Mode mode = Mode::vertex;
  std::size_t hop_bound = 0;
  std::vector<Path> paths;
  /// covers[e] = indices of paths containing element e (empty if e is not removable).
  std::vector<std::vector<std::uint32_t>> covers;
  std::vector<double> costs;
  std::vector<std::uint8_t> removable;

  std::size_t element_count() const { return costs.size(); }
  std::span<const Element> path_elements(std::size_t p) const { return paths[p].elements(mode); }

  /// Elements that appear on at least one path and may be removed.
  std::vector<Element> candidates() const {
    std::vector<Element> out;
    for (Element e = 0; e < element_count(); ++e)
      if (!covers[e].empty()) out.push_back(e);
    return out;
  }
};

struct EnumerationOptions {
  std::size_t max_paths = 10'000'000;
  unsigned threads = 1;
  Deadline deadline;
};

namespace detail {

class PathDfs {
 public:
  PathDfs(const Graph& g, Mode mode, double threshold)
      : g_(g), mode_(mode), limit_(threshold_limit(threshold)), on_path_(g.vertex_count(), 0) {}

  /// Enumerates every simple path from `first_arc`'s tail through `first_arc`
  /// to `target` with length within T. Calls `emit` on each.
  template <typename Emit>
  void run(Vertex source, Arc first_arc, Vertex target, Emit&& emit) {
    vertices_.assign(1, source);
    edges_.clear();
    on_path_[source] = 1;
    step(first_arc, 0.0, target, emit);
    on_path_[source] = 0;
  }

  /// Out-arcs considered when extending from v: in vertex mode only the
  /// shortest arc to each head.
  template <typename F>
  static void for_each_branch(const Graph& g, Mode mode, Vertex v, F&& f) {
    Vertex last = static_cast<Vertex>(g.vertex_count());
    for (const Arc& a : g.out_arcs(v)) {
      if (mode == Mode::vertex && a.head == last) continue;
      last = a.head;
      f(a);
    }
  }

 private:
  template <typename Emit>
  void step(Arc arc, double length, Vertex target, Emit& emit) {
    const double next = length + g_.length(arc.edge);
    if (next > limit_ || on_path_[arc.head]) return;
    vertices_.push_back(arc.head);
    edges_.push_back(arc.edge);
    if (arc.head == target) {
      emit(vertices_, edges_, next);
    } else {
      on_path_[arc.head] = 1;
      for_each_branch(g_, mode_, arc.head, [&](const Arc& a) { step(a, next, target, emit); });
      on_path_[arc.head] = 0;
    }
    vertices_.pop_back();
    edges_.pop_back();
  }

  const Graph& g_;
  Mode mode_;
  double limit_;
  std::vector<std::uint8_t> on_path_;
  std::vector<Vertex> vertices_;
  std::vector<EdgeId> edges_;
};

}  // namespace detail

/// Builds the covering instance from a path list already in canonical order.
inline CoveringInstance make_covering(const Instance& inst, std::vector<Path> paths) {
  CoveringInstance cov;
  cov.mode = inst.mode();
  cov.hop_bound = inst.hop_bound();
  cov.paths = std::move(paths);
  const std::size_t m = inst.element_count();
  cov.covers.resize(m);
  cov.costs.resize(m);
  cov.removable.resize(m);
  for (Element e = 0; e < m; ++e) {
    cov.costs[e] = inst.cost(e);
    cov.removable[e] = inst.removable(e) ? 1 : 0;
  }
  for (std::uint32_t p = 0; p < cov.paths.size(); ++p)
    for (Element e : cov.path_elements(p))
      if (cov.removable[e]) cov.covers[e].push_back(p);
  return cov;
}

/// Every simple path between every target pair with d(p) <= T, ordered by
/// pair index then vertex sequence. Work is split by each path's first arc.
inline CoveringInstance enumerate_paths(const Instance& inst, const EnumerationOptions& opts = {}) {
  const Graph& g = inst.graph();
  struct Task {
    std::size_t pair;
    Arc first;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < inst.targets().size(); ++i)
    detail::PathDfs::for_each_branch(g, inst.mode(), inst.targets()[i].source,
                                     [&](const Arc& a) { tasks.push_back({i, a}); });

  std::vector<std::vector<Path>> results(tasks.size());
  std::atomic<std::size_t> total{0};
  std::atomic<std::size_t> next_task{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    detail::PathDfs dfs(g, inst.mode(), inst.threshold());
    for (std::size_t t; !stop && (t = next_task++) < tasks.size();) {
      const auto& task = tasks[t];
      const auto& pair = inst.targets()[task.pair];
      try {
        std::size_t since_check = 0;
        dfs.run(pair.source, task.first, pair.target,
                [&](const std::vector<Vertex>& vs, const std::vector<EdgeId>& es, double len) {
                  if (stop) throw std::runtime_error("stopped");
                  if (++total > opts.max_paths)
                    throw ResourceError("path budget of " + std::to_string(opts.max_paths) +
                                        " exceeded while enumerating pair " +
                                        std::to_string(task.pair) + " (" +
                                        std::to_string(pair.source) + ", " +
                                        std::to_string(pair.target) + ")");
                  if (++since_check == 4096) {
                    since_check = 0;
                    opts.deadline.check("path enumeration");
                  }
                  results[t].push_back({vs, es, len, task.pair});
                });
        opts.deadline.check("path enumeration");
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error && !stop) error = std::current_exception();
        stop = true;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, tasks.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<Path> paths;
  paths.reserve(total.load());
  for (auto& r : results)
    for (auto& p : r) paths.push_back(std::move(p));
  return make_covering(inst, std::move(paths));
}

/// Number of paths in the family that intersect w (tau).
inline std::size_t count_paths_through(const CoveringInstance& cov, std::span<const Element> w) {
  const ElementMask mask(cov.element_count(), w);
  std::size_t count = 0;
  for (std::size_t p = 0; p < cov.paths.size(); ++p) {
    const auto es = cov.path_elements(p);
    if (std::any_of(es.begin(), es.end(), [&](Element e) { return mask.contains(e); })) ++count;
  }
  return count;
}

/// A random walk from u that ends at v or at a dead end, with its probability.
struct SampledPath {
  std::vector<Vertex> vertices;
  std::vector<EdgeId> edges;
  double length = 0.0;
  double probability = 1.0;  // h(q)
  bool hit = false;          // ended at v within the length budget

  std::span<const Element> elements(Mode mode) const {
    return mode == Mode::vertex ? std::span<const Element>(vertices)
                                : std::span<const Element>(edges);
  }
};

/// Sequential uniform sampler over R(u, v). At every step the walk picks
/// uniformly among the admissible continuations: neighbours not yet on the
/// walk, not removed, and keeping the length within T. In edge mode each arc
/// is a separate continuation. Holds scratch buffers so repeated draws do
/// not allocate.
class PathSampler {
 public:
  PathSampler(const Graph& g, Mode mode, double threshold, Removal removal = {})
      : g_(g),
        mode_(mode),
        limit_(threshold_limit(threshold)),
        removal_(removal),
        on_path_(g.vertex_count(), 0) {}

  void sample(Vertex u, Vertex v, Rng& rng, SampledPath& out) {
    out.vertices.assign(1, u);
    out.edges.clear();
    out.length = 0.0;
    out.probability = 1.0;
    out.hit = false;
    if (removal_.vertex_removed(u)) return;
    on_path_[u] = 1;
    Vertex cur = u;
    while (cur != v) {
      choices_.clear();
      detail::PathDfs::for_each_branch(g_, mode_, cur, [&](const Arc& a) {
        if (on_path_[a.head] || removal_.vertex_removed(a.head) || removal_.edge_removed(a.edge))
          return;
        if (out.length + g_.length(a.edge) > limit_) return;
        choices_.push_back(a);
      });
      if (choices_.empty()) break;
      const Arc a = choices_[rng.below(choices_.size())];
      out.probability /= static_cast<double>(choices_.size());
      out.length += g_.length(a.edge);
      out.vertices.push_back(a.head);
      out.edges.push_back(a.edge);
      on_path_[a.head] = 1;
      cur = a.head;
    }
    out.hit = cur == v;
    for (Vertex x : out.vertices) on_path_[x] = 0;
  }

  SampledPath sample(Vertex u, Vertex v, Rng& rng) {
    SampledPath out;
    sample(u, v, rng, out);
    return out;
  }

 private:
  const Graph& g_;
  Mode mode_;
  double limit_;
  Removal removal_;
  std::vector<std::uint8_t> on_path_;
  std::vector<Arc> choices_;
};

inline SampledPath sample_path(const Graph& g, Vertex u, Vertex v, double threshold,
                               const Removal& removal, Mode mode, Rng& rng) {
  require_vertex(g, u);
  require_vertex(g, v);
  return PathSampler(g, mode, threshold, removal).sample(u, v, rng);
}

}  // namespace tpcut
