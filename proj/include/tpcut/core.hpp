#pragma once

// Shared vocabulary: ids, error types, deadlines and deterministic randomness.

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tpcut {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
/// A removable element: a vertex id in vertex mode, an edge id in edge mode.
using Element = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Cost sentinel for elements that may never be removed.
inline constexpr double kUnremovable = kInfinity;

/// Relative slack used whenever a path length is compared against T, so that
/// Dijkstra and path enumeration agree on paths whose length equals T.
inline constexpr double kLengthTolerance = 1e-9;

inline double threshold_limit(double threshold) {
  return threshold + kLengthTolerance * (threshold > 1.0 ? threshold : 1.0);
}

inline bool within_threshold(double length, double threshold) {
  return length <= threshold_limit(threshold);
}

enum class Mode { vertex, edge };

inline std::string_view to_string(Mode mode) {
  return mode == Mode::vertex ? "vertex" : "edge";
}

// Errors. The CLI maps each family to an exit code.

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (e.g. a solution containing a
/// forbidden element).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The instance admits no feasible solution.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured budget (paths, LP iterations, search nodes) ran out.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what, std::optional<double> incumbent_cost = {})
      : std::runtime_error(what), incumbent_cost_(incumbent_cost) {}

  /// Best solution cost known when the budget ran out, if any.
  std::optional<double> incumbent_cost() const { return incumbent_cost_; }

 private:
  std::optional<double> incumbent_cost_;
};

class TimeoutError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

/// Wall-clock deadline checked cooperatively by long-running solvers.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;

  static Deadline after(std::chrono::milliseconds budget) {
    Deadline d;
    d.at_ = Clock::now() + budget;
    return d;
  }

  bool expired() const { return at_ && Clock::now() >= *at_; }

  void check(std::string_view where) const {
    if (expired()) throw TimeoutError(std::string(where) + ": time budget exhausted");
  }

 private:
  std::optional<Clock::time_point> at_;
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives an independent stream seed from a master seed and a list of tags.
template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t master, Tags... tags) {
  std::uint64_t h = mix64(master);
  ((h = mix64(h ^ static_cast<std::uint64_t>(tags))), ...);
  return h;
}

/// mt19937_64 plus distribution code that is bit-identical on every platform
/// (the std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform in [0, bound), unbiased. bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tpcut
