#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tpcut/tpcut.hpp"

namespace tpcut {
namespace {

using testing::set_system;

// Primal feasibility, dual feasibility and equal objectives together certify
// optimality of both programs.
void expect_certified(const CoveringInstance& cov, const FractionalSolution& f) {
  constexpr double eps = 1e-7;
  double primal = 0.0;
  for (Element e = 0; e < cov.element_count(); ++e) {
    EXPECT_GE(f.weights[e], -eps);
    primal += cov.costs[e] * f.weights[e];
  }
  for (std::size_t p = 0; p < cov.paths.size(); ++p) {
    double sum = 0.0;
    for (Element e : cov.path_elements(p)) sum += f.weights[e];
    EXPECT_GE(sum, 1.0 - eps) << "path " << p;
  }
  ASSERT_EQ(f.path_duals.size(), cov.paths.size());
  double dual = 0.0;
  for (double y : f.path_duals) {
    EXPECT_GE(y, -eps);
    dual += y;
  }
  for (Element e = 0; e < cov.element_count(); ++e) {
    double load = 0.0;
    for (auto p : cov.covers[e]) load += f.path_duals[p];
    EXPECT_LE(load, cov.costs[e] + eps) << "element " << e;
  }
  EXPECT_NEAR(primal, dual, 1e-6);
  EXPECT_NEAR(primal, f.objective, 1e-6);
}

TEST(CoveringLp, SingleConstraint) {
  const auto cov = set_system({{0, 1, 2}}, {1, 1, 1});
  const auto f = solve_covering_lp(cov);
  EXPECT_NEAR(f.objective, 1.0, 1e-9);
  expect_certified(cov, f);
}

TEST(CoveringLp, TwoDisjointPaths) {
  const auto cov = set_system({{0, 1}, {2, 3}}, {1, 1, 1, 1});
  const auto f = solve_covering_lp(cov);
  EXPECT_NEAR(f.objective, 2.0, 1e-9);
  expect_certified(cov, f);
}

TEST(CoveringLp, TriangleIsHalfIntegral) {
  const auto cov = set_system({{0, 1}, {1, 2}, {0, 2}}, {1, 1, 1});
  const auto f = solve_covering_lp(cov);
  EXPECT_NEAR(f.objective, 1.5, 1e-9);
  for (Element e = 0; e < 3; ++e) EXPECT_NEAR(f.weights[e], 0.5, 1e-9);
  expect_certified(cov, f);
}

TEST(CoveringLp, UsesCosts) {
  const auto cov = set_system({{0, 1}, {1, 2}}, {1, 5, 1});
  const auto f = solve_covering_lp(cov);
  EXPECT_NEAR(f.objective, 2.0, 1e-9);
  expect_certified(cov, f);
}

TEST(CoveringLp, EmptyFamilyHasZeroObjective) {
  const auto cov = set_system({}, {1, 1});
  const auto f = solve_covering_lp(cov);
  EXPECT_DOUBLE_EQ(f.objective, 0.0);
  EXPECT_EQ(f.weights.size(), 2u);
}

TEST(CoveringLp, UncoverablePathIsInfeasible) {
  auto cov = set_system({{0}, {1}}, {1, 1});
  cov.removable[1] = 0;
  cov.covers[1].clear();
  EXPECT_THROW(solve_covering_lp(cov), InfeasibleError);
}

TEST(CoveringLp, Fig1AtMostTwo) {
  const auto cov = enumerate_paths(gen_fig1().instance);
  const auto f = solve_covering_lp(cov);
  EXPECT_LE(f.objective, 2.0 + 1e-9);
  EXPECT_GE(f.objective, 1.0);
  expect_certified(cov, f);
}

TEST(CoveringLp, RandomInstancesCertifiedAndBelowOpt) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    const std::size_t m = 4 + rng.below(10);
    const std::size_t paths = 1 + rng.below(25);
    std::vector<std::vector<Element>> sets;
    for (std::size_t p = 0; p < paths; ++p) {
      std::vector<Element> s;
      for (Element e = 0; e < m; ++e)
        if (rng.bernoulli(0.3)) s.push_back(e);
      if (s.empty()) s.push_back(static_cast<Element>(rng.below(m)));
      sets.push_back(s);
    }
    std::vector<double> costs;
    for (std::size_t e = 0; e < m; ++e) costs.push_back(static_cast<double>(1 + rng.below(6)));
    const auto cov = set_system(sets, costs);
    LpOptions opts;
    opts.refactor_every = 3;  // exercise refactorisation
    const auto f = solve_covering_lp(cov, opts);
    expect_certified(cov, f);
    EXPECT_LE(f.objective, testing::exhaustive_hitting_set(cov) + 1e-7) << "seed " << seed;
  }
}

}  // namespace
}  // namespace tpcut
