#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tpcut/tpcut.hpp"

namespace tpcut {
namespace {

std::shared_ptr<Graph> chain_s_a_t() {
  auto g = std::make_shared<Graph>(3, true);
  g->add_edge(0, 1, 1.0);
  g->add_edge(1, 2, 1.0);
  return g;
}

TEST(SampleCount, Formula) {
  // 3 * 1 * ln(2 * 100) / (2 * 0.25) = 6 ln 200 = 31.79...
  EXPECT_EQ(sample_count(1, 10, 0.5), 32u);
  const double expect = std::ceil(3.0 * 9.0 * std::log(2.0 * 400.0) / (2.0 * 0.01));
  EXPECT_EQ(sample_count(3, 20, 0.1), static_cast<std::size_t>(expect));
  EXPECT_THROW(sample_count(1, 10, 0.0), InputError);
  EXPECT_THROW(sample_count(1, 10, 1.0), InputError);
}

TEST(Sigma, AllMissesGiveZero) {
  std::vector<SampledPath> samples(5);
  for (auto& q : samples) q.vertices = {0, 1};
  EXPECT_DOUBLE_EQ(sigma(samples, ElementMask(4, std::vector<Element>{1}), Mode::vertex), 0.0);
}

TEST(Sigma, DeterministicChainEqualsTau) {
  const auto g = chain_s_a_t();
  Rng rng(9);
  PathSampler sampler(*g, Mode::vertex, 2.0);
  std::vector<SampledPath> samples;
  for (int i = 0; i < 17; ++i) samples.push_back(sampler.sample(0, 2, rng));
  EXPECT_DOUBLE_EQ(sigma(samples, ElementMask(3, std::vector<Element>{1}), Mode::vertex), 1.0);
}

TEST(Sigma, Fig1NodeSixWithinThreeStandardErrors) {
  const auto fig = gen_fig1();
  const auto cov = enumerate_paths(fig.instance);
  const double tau = static_cast<double>(count_paths_through(cov, std::vector<Element>{6}));
  ASSERT_EQ(tau, 3.0);
  const ElementMask set(13, std::vector<Element>{6});
  Rng rng(2024);
  PathSampler sampler(*fig.graph, Mode::vertex, 5.0);
  constexpr int kSamples = 100'000;
  std::vector<SampledPath> samples;
  samples.reserve(kSamples);
  double sum_sq = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    samples.push_back(sampler.sample(0, 12, rng));
    const auto& q = samples.back();
    if (q.hit && std::count(q.vertices.begin(), q.vertices.end(), 6u))
      sum_sq += 1.0 / (q.probability * q.probability);
  }
  const double s = sigma(samples, set, Mode::vertex);
  const double se = std::sqrt((sum_sq / kSamples - s * s) / kSamples);
  EXPECT_LE(std::abs(s - tau), 3.0 * se);
}

TEST(Gest, ChainRemovesMiddleInOneIteration) {
  const Instance inst(chain_s_a_t(), 2.0, {{0, 2}});
  GestTrace trace;
  const auto s = gest(inst, {.seed = 5}, &trace);
  EXPECT_EQ(s.elements, (std::vector<Element>{1}));
  EXPECT_EQ(trace.iterations, 1u);
  EXPECT_EQ(trace.fallbacks, 0u);
  EXPECT_EQ(s.algorithm, "GESTA");
  EXPECT_EQ(s.seed, std::optional<std::uint64_t>(5));
}

TEST(Gest, AlreadySeparatedIsEmpty) {
  const auto fig = gen_fig1();
  GestTrace trace;
  const auto s = gest(Instance(fig.graph, 3.0, {{0, 12}}), {.seed = 1}, &trace);
  EXPECT_TRUE(s.elements.empty());
  EXPECT_TRUE(s.feasible);
  EXPECT_EQ(trace.iterations, 0u);
}

TEST(Gest, Fig1FeasibleAcrossSeedsMedianTwo) {
  const auto fig = gen_fig1();
  std::vector<double> costs;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = gest(fig.instance, {.seed = seed});
    ASSERT_TRUE(s.feasible) << "seed " << seed;
    EXPECT_TRUE(is_feasible(fig.instance, s.elements));
    EXPECT_GE(s.size(), 2u);
    EXPECT_LE(s.size(), 4u);
    costs.push_back(s.cost);
  }
  std::nth_element(costs.begin(), costs.begin() + 50, costs.end());
  EXPECT_DOUBLE_EQ(costs[50], 2.0);
}

TEST(Gest, ReproducibleAndThreadIndependent) {
  const auto g = std::make_shared<Graph>(gen_er(40, 90, 3, Weighting::uniform_integer));
  const Instance inst(g, 20.0, {{0, 39}, {5, 17}, {8, 30}});
  GestConfig a{.seed = 77};
  GestConfig b = a;
  b.threads = 3;
  const auto x = gest(inst, a);
  const auto y = gest(inst, a);
  const auto z = gest(inst, b);
  EXPECT_EQ(x.elements, y.elements);
  EXPECT_EQ(x.elements, z.elements);
  EXPECT_TRUE(x.feasible);
  EXPECT_GE(x.size(), 2u);
}

TEST(Gest, SampleOverrideStillFeasible) {
  const auto fig = gen_fig1();
  GestConfig cfg{.seed = 3};
  cfg.sample_override = 1;
  GestTrace trace;
  const auto s = gest(fig.instance, cfg, &trace);
  EXPECT_TRUE(s.feasible);
  EXPECT_EQ(trace.samples_per_pair, 1u);
}

TEST(Gest, WithoutFallbackLabelAndCap) {
  const auto fig = gen_fig1();
  GestConfig cfg{.seed = 4, .fallback = false};
  const auto s = gest(fig.instance, cfg);
  EXPECT_EQ(s.algorithm, "GEST");
  EXPECT_TRUE(s.feasible);

  // A single sample that always dead-ends never scores anything.
  auto g = std::make_shared<Graph>(4, true);
  g->add_edge(0, 1, 1.0);
  g->add_edge(1, 3, 1.0);
  for (int i = 0; i < 200; ++i) g->add_edge(0, 2, 1.0 + i);  // many dead-end arcs in edge mode
  GestConfig stuck{.seed = 1, .max_iterations = 3, .fallback = false};
  stuck.sample_override = 1;
  const Instance inst(g, 2.0, {{0, 3}}, Mode::edge);
  bool threw = false;
  for (std::uint64_t seed = 0; seed < 20 && !threw; ++seed) {
    stuck.seed = seed;
    try {
      gest(inst, stuck);
    } catch (const ResourceError&) {
      threw = true;
    }
  }
  EXPECT_TRUE(threw);
}

TEST(Gest, RandomInstancesAlwaysFeasible) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = testing::random_graph(
        {.n = 12, .arc_probability = 0.25, .max_length = 3, .mixed_costs = true}, seed);
    const Instance inst(g, 5.0, {{0, 11}, {2, 7}}, seed % 3 == 0 ? Mode::edge : Mode::vertex);
    if (!validate(inst).empty()) continue;
    const auto s = gest(inst, {.seed = seed});
    EXPECT_TRUE(is_feasible(inst, s.elements)) << "seed " << seed;
  }
}

TEST(GestaFallback, CheapestInteriorVertex) {
  auto g = std::make_shared<Graph>(4, true);  // s=0, a=1, b=2, t=3
  g->add_edge(0, 1, 1.0);
  g->add_edge(1, 2, 1.0);
  g->add_edge(2, 3, 1.0);
  g->set_vertex_cost(1, 3.0);
  g->set_vertex_cost(2, 1.0);
  const Instance inst(g, 3.0, {{0, 3}});
  Rng rng(0);
  EXPECT_EQ(gesta_fallback(inst, ElementMask(4), rng), 2u);
  g->set_vertex_cost(1, 1.0);
  EXPECT_EQ(gesta_fallback(inst, ElementMask(4), rng), 1u);  // tie: lowest id
}

TEST(GestaFallback, EndpointsForbidden) {
  const Instance inst(chain_s_a_t(), 2.0, {{0, 2}});
  Rng rng(0);
  EXPECT_EQ(gesta_fallback(inst, ElementMask(3), rng), 1u);
}

TEST(GestaFallback, Errors) {
  auto g = std::make_shared<Graph>(2, true);
  g->add_edge(0, 1, 1.0);
  Rng rng(0);
  EXPECT_THROW(gesta_fallback(Instance(g, 1.0, {{0, 1}}), ElementMask(2), rng), InfeasibleError);
  EXPECT_THROW(gesta_fallback(Instance(g, 0.5, {{0, 1}}), ElementMask(2), rng), ContractError);
}

}  // namespace
}  // namespace tpcut
