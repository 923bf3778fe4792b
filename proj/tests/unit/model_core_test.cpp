#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "nashcsg/model/coalition.hpp"
#include "nashcsg/model/single_controller.hpp"
#include "nashcsg/model/stage_game.hpp"
#include "test_games.hpp"

namespace nashcsg {
namespace {

TEST(Validate, TrivialGameIsValid) {
  const auto report = validate_csg(testing::trivial_csg());
  EXPECT_TRUE(report.ok()) << report.to_string();
  EXPECT_NO_THROW(Csg(testing::trivial_csg()));
}

TEST(Validate, DistributionSum) {
  CsgData d = testing::trivial_csg();
  d.transitions[0].distribution = {{0, 0.9}};
  const auto report = validate_csg(d);
  ASSERT_TRUE(report.has("distribution sum"));
  EXPECT_EQ(report.violations[0].state, 0);
  EXPECT_EQ(report.violations[0].joint, std::vector<ActionId>{0});
  EXPECT_THROW(Csg{d}, ModelError);
}

TEST(Validate, SumWithinTolerance) {
  CsgData d = testing::trivial_csg();
  d.transitions[0].distribution = {{0, 1.0 - 1e-10}};
  EXPECT_TRUE(validate_csg(d).ok());
}

// Two states; at s1 player 1 only has action b, yet a transition uses a.
TEST(Validate, UndefinedAvailability) {
  CsgData d;
  d.players = {"p1"};
  d.actions = {{"a", "b"}};
  d.states = {"s0", "s1"};
  d.initial = {0};
  d.availability = {{{0, 1}}, {{1}}};
  d.transitions = {{0, {0}, {{1, 1.0}}}, {0, {1}, {{0, 1.0}}}, {1, {1}, {{1, 1.0}}}, {1, {0}, {{0, 1.0}}}};
  const auto report = validate_csg(d);
  ASSERT_TRUE(report.has("undefined availability"));
  EXPECT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].state, 1);
}

TEST(Validate, OtherViolations) {
  CsgData d = testing::trivial_csg();
  d.transitions.push_back(d.transitions[0]);
  EXPECT_TRUE(validate_csg(d).has("duplicate transition"));

  d = testing::trivial_csg();
  d.transitions.clear();
  EXPECT_TRUE(validate_csg(d).has("missing transition"));

  d = testing::trivial_csg();
  d.transitions[0].distribution = {{0, 1.5}, {0, -0.5}};
  EXPECT_TRUE(validate_csg(d).has("negative probability"));

  d = testing::trivial_csg();
  d.availability[0][0] = {kIdle};
  EXPECT_TRUE(validate_csg(d).has("idle in availability"));

  d = testing::trivial_csg();
  d.initial.clear();
  EXPECT_TRUE(validate_csg(d).has("no initial state"));

  d = testing::trivial_csg();
  d.rewards = {{"r", {NAN}, {}}};
  EXPECT_TRUE(validate_csg(d).has("non-finite reward"));
}

TEST(Validate, IdlePlayer) {
  CsgData d;
  d.players = {"p1", "p2"};
  d.actions = {{"a"}, {"b"}};
  d.states = {"s0"};
  d.initial = {0};
  d.availability = {{{0}, {}}};
  d.transitions = {{0, {0, kIdle}, {{0, 1.0}}}};
  ASSERT_TRUE(validate_csg(d).ok()) << validate_csg(d).to_string();
  const Csg g(d);
  EXPECT_EQ(g.num_choices(0), 1);
  EXPECT_EQ(g.local_actions(0, 1)[0], kIdle);
  EXPECT_EQ(g.action_name(1, kIdle), "~");

  d.transitions = {{0, {0, 0}, {{0, 1.0}}}};
  EXPECT_TRUE(validate_csg(d).has("undefined availability"));
}

TEST(Csg, ChoicesAreLexicographic) {
  std::mt19937_64 rng(5);
  CsgData d = testing::random_csg(rng, {.players = 3, .max_actions = 2, .states = 3});
  d.availability[0] = {{0, 1}, {0, 1}, {0, 1}};
  d.transitions.erase(std::remove_if(d.transitions.begin(), d.transitions.end(), [](const auto& t) { return t.state == 0; }),
                      d.transitions.end());
  for (int j = 0; j < 8; ++j) d.transitions.push_back({0, {j >> 2 & 1, j >> 1 & 1, j & 1}, {{j % 3, 1.0}}});
  const Csg g(d);
  ASSERT_EQ(g.num_choices(0), 8);
  for (int c = 0; c < 8; ++c) {
    const auto joint = g.choice_joint(0, c);
    EXPECT_EQ(joint[0] * 4 + joint[1] * 2 + joint[2], c);
    EXPECT_EQ(g.find_choice(0, joint), c);
    EXPECT_EQ(g.successors(0, c)[0].state, c % 3);
  }
}

TEST(Csg, ZeroProbabilitiesDroppedAndDuplicatesMerged) {
  CsgData d = testing::trivial_csg();
  d.states = {"s0", "s1"};
  d.labels = {{}, {}};
  d.availability = {{{0}}, {{0}}};
  d.transitions = {{0, {0}, {{0, 0.25}, {1, 0.0}, {0, 0.75}}}, {1, {0}, {{1, 1.0}}}};
  const Csg g(d);
  const auto succ = g.successors(0, 0);
  ASSERT_EQ(succ.size(), 1u);
  EXPECT_EQ(succ[0].state, 0);
  EXPECT_DOUBLE_EQ(succ[0].prob, 1.0);
}

TEST(Csg, RoundTripThroughData) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Csg g(testing::random_csg(rng, {.players = 2, .max_actions = 3, .states = 4, .labels = 2, .rewards = 1}));
    const Csg h(g.to_data());
    ASSERT_EQ(g.num_total_choices(), h.num_total_choices());
    for (StateId s = 0; s < g.num_states(); ++s) {
      for (int c = 0; c < g.num_choices(s); ++c) {
        EXPECT_EQ(g.action_reward(0, s, c), h.action_reward(0, s, c));
        const auto a = g.successors(s, c);
        const auto b = h.successors(s, c);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].prob, b[k].prob);
      }
    }
  }
}

TEST(Partition, Validation) {
  EXPECT_NO_THROW(validate_partition({{0}, {2, 1}}, 3));
  EXPECT_THROW(validate_partition({{0}, {1}}, 3), ModelError);
  EXPECT_THROW(validate_partition({{0, 1}, {1, 2}}, 3), ModelError);
  EXPECT_THROW(validate_partition({{0, 1, 2}, {}}, 3), ModelError);
  EXPECT_THROW(validate_partition({}, 0), ModelError);
  EXPECT_EQ(isolation_partition(3), (CoalitionPartition{{0}, {1}, {2}}));
}

// Checks that every coalition choice lifts to an original choice with the
// same distribution and rewards, and that the lift is a bijection.
void expect_faithful_lift(const Csg& model, const CoalitionGame& cg) {
  const Csg& g = cg.game();
  ASSERT_EQ(g.num_states(), model.num_states());
  for (StateId s = 0; s < model.num_states(); ++s) {
    EXPECT_EQ(g.num_choices(s), model.num_choices(s));
    std::set<int> images;
    for (int c = 0; c < g.num_choices(s); ++c) {
      const auto joint = g.choice_joint(s, c);
      const auto original = cg.lift(joint);
      const int oc = model.find_choice(s, original);
      ASSERT_GE(oc, 0);
      images.insert(oc);
      std::map<StateId, double> a;
      std::map<StateId, double> b;
      for (const auto& x : g.successors(s, c)) a[x.state] += x.prob;
      for (const auto& x : model.successors(s, oc)) b[x.state] += x.prob;
      EXPECT_EQ(a, b);
      for (int r = 0; r < model.num_rewards(); ++r) {
        EXPECT_EQ(g.action_reward(r, s, c), model.action_reward(r, s, oc));
        EXPECT_EQ(g.state_reward(r, s), model.state_reward(r, s));
      }
    }
    EXPECT_EQ(static_cast<int>(images.size()), model.num_choices(s));
    EXPECT_EQ(g.state_labels(s), model.state_labels(s));
  }
}

TEST(Coalition, IsolationIsIsomorphic) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Csg model(testing::random_csg(rng, {.players = 3, .max_actions = 2, .states = 5, .rewards = 2}));
    const CoalitionGame cg(model, isolation_partition(3));
    for (StateId s = 0; s < model.num_states(); ++s) {
      for (int c = 0; c < model.num_choices(s); ++c) {
        const auto a = model.choice_joint(s, c);
        const auto b = cg.game().choice_joint(s, c);
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
      }
    }
    expect_faithful_lift(model, cg);
  }
}

TEST(Coalition, RandomPartitionsPreserveTransitions) {
  std::mt19937_64 rng(22);
  const std::vector<CoalitionPartition> partitions = {{{0}, {1, 2}}, {{2, 0}, {1}}, {{0, 1, 2}}, {{1}, {0}, {2}}};
  for (int trial = 0; trial < 30; ++trial) {
    const Csg model(testing::random_csg(rng, {.players = 3, .max_actions = 3, .states = 4, .rewards = 1}));
    for (const auto& p : partitions) expect_faithful_lift(model, CoalitionGame(model, p));
  }
}

// Two states, three players. At s0 players 2 and 3 have 2 and 0 actions, at
// s1 both have none.
TEST(Coalition, HandExpansion) {
  CsgData d;
  d.players = {"p1", "p2", "p3"};
  d.actions = {{"x"}, {"a", "b"}, {"c"}};
  d.states = {"s0", "s1"};
  d.initial = {0};
  d.availability = {{{0}, {0, 1}, {}}, {{0}, {}, {}}};
  d.transitions = {{0, {0, 0, kIdle}, {{0, 1.0}}}, {0, {0, 1, kIdle}, {{1, 1.0}}}, {1, {0, kIdle, kIdle}, {{1, 1.0}}}};
  const Csg model(d);
  const CoalitionGame cg(model, {{0}, {1, 2}});
  const Csg& g = cg.game();
  ASSERT_EQ(g.num_players(), 2);
  EXPECT_EQ(g.player_name(1), "p2,p3");
  // (A_2 + idle) x (A_3 + idle) minus all-idle: 3 * 2 - 1 = 5 coalition actions.
  EXPECT_EQ(g.num_actions(1), 5);
  EXPECT_EQ(g.action_name(1, 0), "(~,c)");
  EXPECT_EQ(g.action_name(1, 1), "(a,~)");
  EXPECT_EQ(g.action_name(1, 3), "(b,~)");
  ASSERT_EQ(g.num_local_actions(0, 1), 2);
  EXPECT_EQ(g.action_name(1, g.local_actions(0, 1)[0]), "(a,~)");
  EXPECT_EQ(g.action_name(1, g.local_actions(0, 1)[1]), "(b,~)");
  EXPECT_EQ(g.local_actions(1, 1)[0], kIdle);
  EXPECT_EQ(cg.member_actions(1, g.local_actions(0, 1)[1]), (std::vector<ActionId>{1, kIdle}));
  EXPECT_EQ(cg.member_actions(1, kIdle), (std::vector<ActionId>{kIdle, kIdle}));
  expect_faithful_lift(model, cg);
}

TEST(StageGame, ConstantUtilities) {
  std::mt19937_64 rng(4);
  const Csg model(testing::random_csg(rng, {.players = 2, .max_actions = 2, .states = 2}));
  const auto g = stage_game(model, 0, [](int, PlayerId p) { return p + 0.5; });
  EXPECT_EQ(g.num_joint_actions(), static_cast<std::size_t>(model.num_choices(0)));
  for (std::size_t j = 0; j < g.num_joint_actions(); ++j) {
    EXPECT_EQ(g.utility(j, 0), 0.5);
    EXPECT_EQ(g.utility(j, 1), 1.5);
  }
}

// Three-state chain: from s0 each joint action moves to s1/s2 with its own mix;
// utilities are successor-weighted continuation values.
TEST(StageGame, SuccessorWeightedSums) {
  CsgData d;
  d.players = {"p1", "p2"};
  d.actions = {{"a", "b"}, {"c", "d"}};
  d.states = {"s0", "s1", "s2"};
  d.initial = {0};
  d.availability = {{{0, 1}, {0, 1}}, {{0}, {0}}, {{0}, {0}}};
  d.transitions = {{0, {0, 0}, {{1, 1.0}}},
                   {0, {0, 1}, {{1, 0.5}, {2, 0.5}}},
                   {0, {1, 0}, {{2, 1.0}}},
                   {0, {1, 1}, {{1, 0.25}, {2, 0.75}}},
                   {1, {0, 0}, {{1, 1.0}}},
                   {2, {0, 0}, {{2, 1.0}}}};
  const Csg model(d);
  const double v[3][2] = {{0, 0}, {4, 1}, {2, 3}};
  const auto g = stage_game(model, 0, [&](int c, PlayerId p) {
    double sum = 0;
    for (const auto& x : model.successors(0, c)) sum += x.prob * v[x.state][p];
    return sum;
  });
  const double expected[4][2] = {{4, 1}, {3, 2}, {2, 3}, {2.5, 2.5}};
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_DOUBLE_EQ(g.utility(j, 0), expected[j][0]);
    EXPECT_DOUBLE_EQ(g.utility(j, 1), expected[j][1]);
  }
  EXPECT_EQ(g.action_name(0, 1), "b");
  EXPECT_EQ(g.action_name(1, 1), "d");
}

TEST(StageGame, NonFiniteUtility) {
  const Csg model(testing::trivial_csg());
  try {
    stage_game(model, 0, [](int, PlayerId) { return std::numeric_limits<double>::infinity(); });
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("non-finite utility"), std::string::npos);
  }
}

TEST(SingleController, OnePlayerIsIdentical) {
  std::mt19937_64 rng(8);
  const Csg model(testing::random_csg(rng, {.players = 1, .max_actions = 3, .states = 4}));
  const auto p = pooled_view(model);
  ASSERT_EQ(p.num_states(), model.num_states());
  for (StateId s = 0; s < model.num_states(); ++s) {
    ASSERT_EQ(p.num_choices(s), model.num_choices(s));
    for (int c = 0; c < model.num_choices(s); ++c) {
      const auto a = p.successors(p.first_choice(s) + c);
      const auto b = model.successors(s, c);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].state, b[k].state);
        EXPECT_EQ(a[k].prob, b[k].prob);
      }
    }
  }
}

TEST(SingleController, PooledChoicesAreProducts) {
  CsgData d;
  d.players = {"p1", "p2"};
  d.actions = {{"a", "b"}, {"c", "d"}};
  d.states = {"s0", "s1"};
  d.initial = {0};
  d.availability = {{{0, 1}, {0, 1}}, {{0, 1}, {0, 1}}};
  for (int s = 0; s < 2; ++s) {
    for (int j = 0; j < 4; ++j) d.transitions.push_back({s, {j >> 1, j & 1}, {{j == 3 ? 1 : 0, 1.0}}});
  }
  const Csg model(d);
  const auto p = pooled_view(model);
  EXPECT_EQ(p.num_choices(0), 4);
  EXPECT_EQ(p.num_choices(1), 4);
  EXPECT_EQ(p.num_total_choices(), 8u);
}

// Player 2 plays uniformly; player 1's choice a mixes (a,c)->s0 and
// (a,d)->s1, choice b mixes (b,c)->s1 and (b,d)->{s0:0.5, s1:0.5}.
TEST(SingleController, ResidualMixture) {
  CsgData d;
  d.players = {"p1", "p2"};
  d.actions = {{"a", "b"}, {"c", "d"}};
  d.states = {"s0", "s1"};
  d.initial = {0};
  d.availability = {{{0, 1}, {0, 1}}, {{0}, {0}}};
  d.transitions = {{0, {0, 0}, {{0, 1.0}}},
                   {0, {0, 1}, {{1, 1.0}}},
                   {0, {1, 0}, {{1, 1.0}}},
                   {0, {1, 1}, {{0, 0.5}, {1, 0.5}}},
                   {1, {0, 0}, {{1, 1.0}}}};
  const Csg model(d);
  const std::vector<double> uniform = {0.5, 0.5};
  const std::vector<double> one = {1.0};
  const auto rp = residual_process(model, 0, [&](StateId s, PlayerId) -> std::span<const double> {
    return s == 0 ? std::span<const double>(uniform) : std::span<const double>(one);
  });
  ASSERT_EQ(rp.process.num_choices(0), 2);
  auto dist = [&](int global) {
    std::map<int, double> out;
    for (const auto& x : rp.process.successors(global)) out[x.state] += x.prob;
    return out;
  };
  EXPECT_EQ(dist(0), (std::map<int, double>{{0, 0.5}, {1, 0.5}}));
  EXPECT_EQ(dist(1), (std::map<int, double>{{0, 0.25}, {1, 0.75}}));
  ASSERT_EQ(rp.mixture[1].size(), 2u);
  EXPECT_EQ(rp.mixture[1][0], (std::pair<int, double>{2, 0.5}));
  EXPECT_EQ(rp.process.num_choices(1), 1);
}

TEST(SingleController, ReachTargetSurely) {
  // s0 -> {s1 | s2}; s1 -> goal; s2 -> {goal | s2 self-loop}; s3 goal.
  DecisionProcess p;
  p.begin_state();
  p.begin_choice();
  p.add_successor(1, 1.0);
  p.begin_choice();
  p.add_successor(2, 1.0);
  p.begin_state();
  p.begin_choice();
  p.add_successor(3, 1.0);
  p.begin_state();
  p.begin_choice();
  p.add_successor(3, 0.5);
  p.add_successor(2, 0.5);
  p.begin_choice();
  p.add_successor(2, 1.0);
  p.begin_state();
  p.begin_choice();
  p.add_successor(3, 1.0);
  const auto sure = reach_target_surely(p, {0, 0, 0, 1});
  EXPECT_EQ(sure, (std::vector<char>{0, 1, 0, 1}));

  // Without the self-loop choice at s2 every state reaches the goal surely.
  DecisionProcess q;
  q.begin_state();
  q.begin_choice();
  q.add_successor(1, 1.0);
  q.begin_choice();
  q.add_successor(2, 1.0);
  q.begin_state();
  q.begin_choice();
  q.add_successor(3, 1.0);
  q.begin_state();
  q.begin_choice();
  q.add_successor(3, 0.5);
  q.add_successor(2, 0.5);
  q.begin_state();
  q.begin_choice();
  q.add_successor(3, 1.0);
  EXPECT_EQ(reach_target_surely(q, {0, 0, 0, 1}), (std::vector<char>{1, 1, 1, 1}));
}

}  // namespace
}  // namespace nashcsg
