#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "nashcsg/engine/engine.hpp"
#include "nashcsg/synthesis/synthesis.hpp"
#include "test_games.hpp"

namespace nashcsg {
namespace {

StateSet all(const Csg& g) { return StateSet(g.num_states(), 1); }

StateSet labeled(const Csg& g, const std::string& label) {
  StateSet out(g.num_states(), 0);
  const auto id = g.find_label(label);
  if (id) {
    for (StateId s = 0; s < g.num_states(); ++s) out[s] = g.has_label(s, *id);
  }
  return out;
}

// Every transition leaks 0.2 into an absorbing state carrying all labels, so
// until objectives on the labels satisfy the stopping assumption.
CsgData leaky(CsgData d, int labels) {
  const StateId sink = static_cast<StateId>(d.states.size());
  for (auto& t : d.transitions) {
    for (auto& [s, p] : t.distribution) p *= 0.8;
    t.distribution.emplace_back(sink, 0.2);
  }
  d.states.push_back("sink");
  std::vector<std::string> names;
  for (int l = 0; l < labels; ++l) names.push_back("g" + std::to_string(l));
  d.labels.push_back(names);
  d.availability.push_back(std::vector<std::vector<ActionId>>(d.players.size(), {0}));
  d.transitions.push_back({sink, std::vector<ActionId>(d.players.size(), 0), {{sink, 1.0}}});
  return d;
}

TEST(Synthesis, DeterministicChain) {
  CsgData d = testing::trivial_csg();
  d.states = {"s0", "s1", "goal"};
  d.labels = {{}, {}, {"goal"}};
  d.availability = {{{0}}, {{0}}, {{0}}};
  d.transitions = {{0, {0}, {{1, 1.0}}}, {1, {0}, {{2, 1.0}}}, {2, {0}, {{2, 1.0}}}};
  d.rewards.push_back({"r", {1, 1, 1}, {}});
  const Csg g(d);
  const auto r = solve_reach_reward_vi(g, {reach_reward(0, labeled(g, "goal"))}, Opt::kMin, {});
  const auto v = evaluate_profile(*r.graph, r.strategy);
  EXPECT_DOUBLE_EQ(v[r.graph->root(0)], 2.0);
  EXPECT_DOUBLE_EQ(v[r.graph->root(1)], 1.0);
  EXPECT_DOUBLE_EQ(v[r.graph->root(2)], 0.0);
}

TEST(Synthesis, CoinFlipGeometric) {
  CsgData d = testing::trivial_csg();
  d.states = {"s0", "goal"};
  d.labels = {{}, {"goal"}};
  d.availability = {{{0}}, {{0}}};
  d.transitions = {{0, {0}, {{1, 0.5}, {0, 0.5}}}, {1, {0}, {{1, 1.0}}}};
  d.rewards.push_back({"r", {1, 0}, {}});
  const Csg g(d);
  const auto r = solve_reach_reward_vi(g, {reach_reward(0, labeled(g, "goal"))}, Opt::kMin, {});
  const auto v = evaluate_profile(*r.graph, r.strategy);
  EXPECT_NEAR(v[r.graph->root(0)], 2.0, 1e-12);
  const auto br = best_response_value(*r.graph, r.strategy, 0, Opt::kMin);
  EXPECT_NEAR(br[r.graph->root(0)], 2.0, 1e-12);
}

TEST(Synthesis, FiniteSolutionIsCertified) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const Csg g(testing::random_csg(rng, {.players = 2, .max_actions = 3, .states = 4, .labels = 2}));
    const auto r = solve_bounded_until(
        g, {bounded_until(all(g), labeled(g, "g0"), 3), bounded_until(all(g), labeled(g, "g1"), 2)}, Opt::kMax, {});
    const auto cert = certify_epsilon(*r.graph, r.strategy, Opt::kMax);
    for (std::size_t k = 0; k < r.values.size(); ++k) EXPECT_NEAR(cert.values[k], r.values[k], 1e-9);
    EXPECT_LE(cert.epsilon, 1e-6) << "trial " << trial;
  }
}

TEST(Synthesis, InfiniteSolutionIsCertified) {
  std::mt19937_64 rng(32);
  EngineConfig cfg;
  cfg.vi.epsilon = 1e-10;
  for (int trial = 0; trial < 15; ++trial) {
    const Csg g(leaky(testing::random_csg(rng, {.players = 2, .max_actions = 2, .states = 4, .labels = 2}), 2));
    const auto r = solve_until_vi(g, {until(all(g), labeled(g, "g0")), until(all(g), labeled(g, "g1"))},
                                  Opt::kMax, cfg);
    const auto cert = certify_epsilon(*r.graph, r.strategy, Opt::kMax, cfg.vi.epsilon);
    for (std::size_t k = 0; k < r.values.size(); ++k) EXPECT_NEAR(cert.values[k], r.values[k], 1e-8);
    EXPECT_LE(cert.epsilon, 1e-6) << "trial " << trial;
  }
}

// s0: x reaches the goal surely, y with probability 0.5.
CsgData one_shot() {
  CsgData d;
  d.players = {"p1"};
  d.actions = {{"x", "y"}};
  d.states = {"s0", "goal", "dead"};
  d.labels = {{}, {"goal"}, {}};
  d.initial = {0};
  d.availability = {{{0, 1}}, {{0}}, {{0}}};
  d.transitions = {{0, {0}, {{1, 1.0}}}, {0, {1}, {{1, 0.5}, {2, 0.5}}}, {1, {0}, {{1, 1.0}}}, {2, {0}, {{2, 1.0}}}};
  return d;
}

TEST(Synthesis, PerturbedProfileGap) {
  const Csg g(one_shot());
  const auto r = solve_bounded_until(g, {bounded_until(all(g), labeled(g, "goal"), 1)}, Opt::kMax, {});
  const int root = r.graph->root(0);
  EXPECT_EQ(r.strategy.profiles[root], (MixedProfile{{1, 0}}));
  EXPECT_NEAR(certify_epsilon(*r.graph, r.strategy, Opt::kMax).epsilon, 0.0, 1e-12);

  StrategyTable perturbed = r.strategy;
  perturbed.profiles[root] = {{0.9, 0.1}};
  const auto cert = certify_epsilon(*r.graph, perturbed, Opt::kMax);
  EXPECT_NEAR(cert.epsilon, 0.05, 1e-12);
  EXPECT_EQ(cert.worst_node, root);
  EXPECT_NEAR(cert.values[root], 0.95, 1e-12);
}

TEST(Synthesis, SingleCoalitionBestResponseIsValue) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Csg g(leaky(testing::random_csg(rng, {.players = 1, .max_actions = 3, .states = 5, .labels = 1}), 1));
    EngineConfig cfg;
    cfg.vi.epsilon = 1e-11;
    const auto r = solve_until_vi(g, {until(all(g), labeled(g, "g0"))}, Opt::kMax, cfg);
    const auto v = evaluate_profile(*r.graph, r.strategy);
    const auto br = best_response_value(*r.graph, r.strategy, 0, Opt::kMax, cfg.vi.epsilon);
    for (int n = 0; n < r.graph->num_nodes(); ++n) EXPECT_NEAR(br[n], v[n], 1e-9);
  }
}

TEST(Synthesis, ExportRoundTrip) {
  std::mt19937_64 rng(34);
  const Csg g(testing::random_csg(rng, {.players = 2, .max_actions = 3, .states = 4, .labels = 2}));
  const auto r = solve_bounded_until(
      g, {bounded_until(all(g), labeled(g, "g0"), 3), bounded_until(all(g), labeled(g, "g1"), 2)}, Opt::kMax, {});
  const std::string text = export_strategy(*r.graph, r.strategy);
  const auto back = import_strategy(text, *r.graph);
  EXPECT_EQ(export_strategy(*r.graph, back), text);
  EXPECT_EQ(evaluate_profile(*r.graph, back), evaluate_profile(*r.graph, r.strategy));
  const auto json = nlohmann::json::parse(text);
  EXPECT_EQ(json["kind"], "finite");
  EXPECT_TRUE(json["entries"][0].contains("step"));
}

TEST(Synthesis, MemorylessEntries) {
  // Two non-target states, two coalitions: one entry per state and coalition.
  CsgData d;
  d.players = {"p1", "p2"};
  d.actions = {{"a", "b"}, {"c"}};
  d.states = {"s0", "s1", "goal"};
  d.labels = {{}, {}, {"goal"}};
  d.initial = {0};
  d.availability = {{{0, 1}, {0}}, {{0, 1}, {0}}, {{0}, {0}}};
  d.transitions = {{0, {0, 0}, {{1, 0.5}, {2, 0.5}}}, {0, {1, 0}, {{2, 1.0}}},
                   {1, {0, 0}, {{0, 0.5}, {2, 0.5}}}, {1, {1, 0}, {{2, 1.0}}},
                   {2, {0, 0}, {{2, 1.0}}}};
  const Csg g(d);
  const auto r = solve_until_vi(g, {until(all(g), labeled(g, "goal")), until(all(g), labeled(g, "goal"))},
                                Opt::kMax, {});
  const auto json = nlohmann::json::parse(export_strategy(*r.graph, r.strategy));
  EXPECT_EQ(json["kind"], "memoryless");
  ASSERT_EQ(json["entries"].size(), 4u);
  for (const auto& e : json["entries"]) EXPECT_FALSE(e.contains("step"));
}

TEST(Synthesis, ImportRejectsBadFiles) {
  const Csg g(one_shot());
  const auto r = solve_bounded_until(g, {bounded_until(all(g), labeled(g, "goal"), 1)}, Opt::kMax, {});
  auto json = nlohmann::ordered_json::parse(export_strategy(*r.graph, r.strategy));
  auto bad_sum = json;
  bad_sum["entries"][0]["distribution"] = {{"x", "0.5"}};
  EXPECT_THROW(import_strategy(bad_sum.dump(), *r.graph), Error);
  auto missing = json;
  missing["entries"] = nlohmann::ordered_json::array();
  EXPECT_THROW(import_strategy(missing.dump(), *r.graph), Error);
  auto unknown = json;
  unknown["entries"][0]["distribution"] = {{"z", "1"}};
  EXPECT_THROW(import_strategy(unknown.dump(), *r.graph), Error);
  EXPECT_THROW(import_strategy("{", *r.graph), Error);
}

}  // namespace
}  // namespace nashcsg
