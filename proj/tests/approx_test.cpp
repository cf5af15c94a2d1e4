#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tpcut/tpcut.hpp"

namespace tpcut {
namespace {

TEST(Greedy, PicksHeaviestThenLowestId) {
  // Element 1 meets three paths, the rest one or two.
  const auto cov = testing::set_system({{0, 1}, {1, 2}, {1, 3}, {3, 4}}, {1, 1, 1, 1, 1});
  EXPECT_EQ(greedy_cover(cov), (std::vector<Element>{1, 3}));
  // Ties resolve to the lower id.
  const auto tie = testing::set_system({{2, 5}}, {1, 1, 1, 1, 1, 1});
  EXPECT_EQ(greedy_cover(tie), (std::vector<Element>{2}));
}

TEST(Greedy, CostPerPathRatio) {
  const auto cov = testing::set_system({{0, 1}, {0, 2}}, {3, 1, 1});
  // Element 0 covers 2 paths for 3, elements 1 and 2 cover 1 path for 1.
  EXPECT_EQ(greedy_cover(cov), (std::vector<Element>{1, 2}));
}

TEST(Gen, Fig1) {
  const auto s = gen(gen_fig1().instance);
  EXPECT_EQ(s.algorithm, "GEN");
  EXPECT_TRUE(s.feasible);
  EXPECT_EQ(s.elements, (std::vector<Element>{5, 7}));
  EXPECT_DOUBLE_EQ(s.cost, 2.0);
}

TEST(Gen, TightnessPicksEveryG) {
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto t = gen_tightness(k);
    const TightnessLayout lay{k};
    const auto s = gen(t.instance);
    EXPECT_TRUE(s.feasible);
    EXPECT_DOUBLE_EQ(s.cost, static_cast<double>(k));
    for (std::size_t i = 1; i <= k; ++i)
      EXPECT_TRUE(std::binary_search(s.elements.begin(), s.elements.end(), lay.g(i)));
  }
}

TEST(Gen, AlreadySeparatedIsEmpty) {
  const auto fig = gen_fig1();
  const auto s = gen(Instance(fig.graph, 3.0, {{0, 12}}));
  EXPECT_TRUE(s.elements.empty());
  EXPECT_TRUE(s.feasible);
}

TEST(Fen, SinglePathTakesEveryInnerVertex) {
  auto g = std::make_shared<Graph>(4, true);  // s=0, a=1, b=2, t=3
  g->add_edge(0, 1, 1.0);
  g->add_edge(1, 2, 1.0);
  g->add_edge(2, 3, 1.0);
  const Instance inst(g, 3.0, {{0, 3}});
  const auto r = fen_detailed(inst);
  EXPECT_EQ(r.solution.algorithm, "FEN");
  EXPECT_NEAR(r.relaxation.objective, 1.0, 1e-9);
  // Any optimal split of the unit weight rounds to {a}, {b} or {a, b}.
  EXPECT_TRUE(r.solution.feasible);
  EXPECT_LE(r.solution.cost, 4.0 * r.relaxation.objective + 1e-9);
}

TEST(Fen, RoundingKeepsAtLeastOneOverT0PlusOne) {
  FractionalSolution f;
  f.weights = {0.0, 0.25, 0.2499999999999, 0.24, 1.0};
  EXPECT_EQ(round_fractional(f, 3), (std::vector<Element>{1, 2, 4}));
}

TEST(Fen, EmptyFamilyGivesEmptySolution) {
  const auto fig = gen_fig1();
  const auto s = fen(Instance(fig.graph, 3.5, {{0, 12}}));
  EXPECT_TRUE(s.elements.empty());
  EXPECT_DOUBLE_EQ(s.cost, 0.0);
}

TEST(Fen, Fig1) {
  const auto r = fen_detailed(gen_fig1().instance);
  EXPECT_TRUE(r.solution.feasible);
  EXPECT_LE(r.relaxation.objective, 2.0 + 1e-9);
  EXPECT_LE(r.solution.cost, 5.0 * r.relaxation.objective + 1e-9);
}

TEST(Approx, RatioBoundsOnRandomInstances) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const auto g = testing::random_graph(
        {.n = 10, .arc_probability = 0.3, .max_length = 2, .mixed_costs = true}, seed);
    const Instance inst(g, 4.0, {{0, 9}, {1, 8}}, seed % 2 ? Mode::edge : Mode::vertex);
    if (!validate(inst).empty()) continue;
    const auto cov = enumerate_paths(inst);
    if (cov.candidates().size() > 20) continue;
    ++checked;
    const double best = testing::exhaustive_hitting_set(cov);
    const auto fr = fen_detailed(inst);
    const auto gr = gen(inst);
    EXPECT_TRUE(fr.solution.feasible);
    EXPECT_TRUE(gr.feasible);
    EXPECT_LE(fr.relaxation.objective, best + 1e-6);
    EXPECT_LE(fr.solution.cost, (cov.hop_bound + 1) * fr.relaxation.objective + 1e-6);
    const double P = static_cast<double>(std::max<std::size_t>(1, cov.paths.size()));
    EXPECT_LE(gr.cost, (1.0 + std::log(P)) * best + 1e-6) << "seed " << seed;
    EXPECT_GE(gr.cost, best - 1e-9);
  }
  EXPECT_GE(checked, 20);
}

TEST(Approx, UncoverablePathIsInfeasible) {
  auto g = std::make_shared<Graph>(3, true);
  g->add_edge(0, 1, 1.0);
  g->add_edge(1, 2, 1.0);
  g->set_vertex_cost(1, kUnremovable);
  const Instance inst(g, 2.0, {{0, 2}});
  EXPECT_THROW(gen(inst), InfeasibleError);
  EXPECT_THROW(fen(inst), InfeasibleError);
}

}  // namespace
}  // namespace tpcut
