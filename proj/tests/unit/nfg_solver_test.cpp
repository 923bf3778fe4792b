#include <gtest/gtest.h>

#include <random>

#include "nashcsg/nfg/solver.hpp"
#include "test_games.hpp"

namespace nashcsg {
namespace {

using testing::matching_pennies_dummy;
using testing::prisoners_dilemma3;
using testing::public_good_nfg;

TEST(ExpectedUtility, PureProfileReadsTable) {
  const auto g = prisoners_dilemma3();
  const std::vector<int> ccc{0, 0, 0};
  EXPECT_DOUBLE_EQ(expected_utility(g, pure_profile(g, ccc), 0), 7.0);
}

TEST(ExpectedUtility, UniformIsCellAverage) {
  const auto g = prisoners_dilemma3();
  double sum = 0.0;
  for (std::size_t j = 0; j < 8; ++j) sum += g.utility(j, 0);
  EXPECT_NEAR(expected_utility(g, uniform_profile(g), 0), sum / 8.0, 1e-12);
}

TEST(Regret, AllCooperateInPrisonersDilemma) {
  const auto g = prisoners_dilemma3();
  const std::vector<int> ccc{0, 0, 0};
  EXPECT_DOUBLE_EQ(regret(g, pure_profile(g, ccc), 0), 2.0);
}

TEST(Regret, UniformMatchingPenniesIsEquilibrium) {
  const auto g = matching_pennies_dummy();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(regret(g, uniform_profile(g), i), 0.0, 1e-12);
}

TEST(FilterDominated, PrisonersDilemmaKeepsDefection) {
  const auto reduced = filter_dominated(prisoners_dilemma3());
  for (int i = 0; i < 3; ++i) {
    ASSERT_EQ(reduced.kept[i].size(), 1u);
    EXPECT_EQ(reduced.kept[i][0], 1);
  }
  EXPECT_EQ(reduced.log.size(), 3u);
}

TEST(FilterDominated, IdenticalRowsSurvive) {
  NormalFormGame g({2, 2});
  for (std::size_t j = 0; j < 4; ++j) {
    g.set_utility(j, 0, static_cast<double>(g.action_of(j, 1)));
    g.set_utility(j, 1, 1.0);
  }
  const auto reduced = filter_dominated(g);
  EXPECT_EQ(reduced.kept[0].size(), 2u);
  EXPECT_EQ(reduced.kept[1].size(), 2u);
  EXPECT_TRUE(reduced.log.empty());
}

TEST(FilterDominated, IteratedRemovalAcrossRounds) {
  // Row 2 is dominated by row 0; only then are columns 0 and 2 dominated by
  // column 1, after which row 0 is dominated by row 1.
  NormalFormGame g({3, 3});
  const double u1[3][3] = {{4, 3, 5}, {3, 4, 3}, {2, 1, 4}};
  const double u2[3][3] = {{1, 2, 0}, {2, 3, 1}, {0, 0, 9}};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const std::vector<int> ab{a, b};
      g.set_utility(g.joint_index(ab), 0, u1[a][b]);
      g.set_utility(g.joint_index(ab), 1, u2[a][b]);
    }
  }
  const auto reduced = filter_dominated(g);
  ASSERT_EQ(reduced.log.size(), 4u);
  EXPECT_EQ(reduced.log[0].player, 0);
  EXPECT_EQ(reduced.log[0].action, 2);
  EXPECT_EQ(reduced.log[1].player, 1);
  EXPECT_EQ(reduced.kept[0], (std::vector<int>{1}));
  EXPECT_EQ(reduced.kept[1], (std::vector<int>{1}));
  for (std::size_t k = 1; k < reduced.log.size(); ++k) EXPECT_LE(reduced.log[k - 1].round, reduced.log[k].round);
  // Every surviving pure NE is an NE of the original game.
  for (std::size_t j = 0; j < reduced.game.num_joint_actions(); ++j) {
    const auto a = reduced.game.joint_actions(j);
    if (!check_pure_profile(reduced.game, a).is_ne) continue;
    std::vector<int> original{reduced.kept[0][a[0]], reduced.kept[1][a[1]]};
    EXPECT_TRUE(check_pure_profile(g, original).is_ne);
  }
}

TEST(EnumerateSupports, Counts) {
  EXPECT_EQ(enumerate_supports({3, 3, 3}).size(), 343u);
  EXPECT_EQ(enumerate_supports({2, 2, 2, 2}).size(), 81u);
  EXPECT_EQ(enumerate_supports({1, 1}).size(), 1u);
  EXPECT_EQ(count_supports({4, 4, 4}), 3375u);
}

TEST(EnumerateSupports, PureSupportsFirstInJointOrder) {
  const auto supports = enumerate_supports({2, 3});
  for (int k = 0; k < 6; ++k) {
    EXPECT_TRUE(supports[k].is_pure());
    EXPECT_EQ(supports[k].actions(0)[0], k / 3);
    EXPECT_EQ(supports[k].actions(1)[0], k % 3);
  }
  for (std::size_t k = 1; k < supports.size(); ++k) {
    EXPECT_LE(supports[k - 1].total_size(), supports[k].total_size());
  }
}

TEST(CheckPureProfile, Examples) {
  const auto pd = prisoners_dilemma3();
  const std::vector<int> ddd{1, 1, 1};
  const auto r = check_pure_profile(pd, ddd);
  EXPECT_TRUE(r.is_ne);
  EXPECT_EQ(r.values, (std::vector<double>{1, 1, 1}));

  const auto pg = public_good_nfg(2.0);
  const std::vector<int> none{0, 0, 0};
  const std::vector<int> all{2, 2, 2};
  EXPECT_TRUE(check_pure_profile(pg, none).is_ne);
  const auto all_check = check_pure_profile(pg, all);
  EXPECT_FALSE(all_check.is_ne);
  // Investing half already gains 35/3 - 10; investing nothing gains more.
  EXPECT_GE(all_check.gains[0], 35.0 / 3.0 - 10.0);
  EXPECT_NEAR(all_check.gains[0], 40.0 / 3.0 - 10.0, 1e-12);
}

TEST(PresolveSupport, Examples) {
  const auto pd = prisoners_dilemma3();
  Support full{{3, 3, 3}};
  EXPECT_FALSE(presolve_support(pd, full));
  Support pure{{1, 1, 1}};
  EXPECT_TRUE(presolve_support(pd, pure));
  const auto mp = matching_pennies_dummy();
  Support mixed{{3, 3, 1}};
  EXPECT_TRUE(presolve_support(mp, mixed));
}

TEST(SolveSupport, PrisonersDilemma) {
  const auto pd = prisoners_dilemma3();
  const auto pure = solve_support(pd, Support{{2, 2, 2}}, {});
  ASSERT_EQ(pure.status, SupportStatus::kFeasible);
  for (double v : pure.candidate->values) EXPECT_NEAR(v, 1.0, 1e-12);
  const auto full = solve_support(pd, Support{{3, 3, 3}}, {});
  EXPECT_NE(full.status, SupportStatus::kFeasible);
}

TEST(SolveSupport, MatchingPenniesMixed) {
  const auto mp = matching_pennies_dummy();
  const auto r = solve_support(mp, Support{{3, 3, 1}}, {});
  ASSERT_EQ(r.status, SupportStatus::kFeasible);
  EXPECT_NEAR(r.candidate->profile[0][0], 0.5, 1e-8);
  EXPECT_NEAR(r.candidate->profile[1][0], 0.5, 1e-8);
  EXPECT_NEAR(r.candidate->values[0], 0.5, 1e-8);
  EXPECT_NEAR(r.candidate->values[1], 0.5, 1e-8);
  EXPECT_NEAR(r.candidate->values[2], 0.0, 1e-12);
}

TEST(Swne, PublicGoodNoInvestment) {
  const auto s = swne(public_good_nfg(2.0));
  for (double v : s.values) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(Swne, PublicGoodFactorThree) {
  const auto s = swne(public_good_nfg(3.0));
  for (double v : s.values) EXPECT_NEAR(v, 20.0, 1e-9);
  EXPECT_NEAR(s.welfare, 60.0, 1e-9);
}

TEST(Swne, PrisonersDilemma) {
  const auto s = swne(prisoners_dilemma3());
  for (double v : s.values) EXPECT_NEAR(v, 1.0, 1e-12);
  for (double r : s.regrets) EXPECT_LE(r, 1e-12);
}

TEST(Swne, MatchingPenniesNeedsMixing) {
  const auto s = swne(matching_pennies_dummy());
  EXPECT_NEAR(s.values[0], 0.5, 1e-7);
  EXPECT_NEAR(s.values[1], 0.5, 1e-7);
  for (double r : s.regrets) EXPECT_LE(r, 1e-7);
}

TEST(Scne, SingleJointAction) {
  NormalFormGame g({1, 1});
  g.set_utility(0, 0, 3.0);
  g.set_utility(0, 1, 4.0);
  const auto s = scne(g);
  EXPECT_EQ(s.values, (std::vector<double>{3.0, 4.0}));
}

TEST(Scne, CostPrisonersDilemmaMinimizesOverPureEquilibria) {
  // As costs, cooperation is dominant; the unique NE of the negated game is all-c.
  const auto s = scne(prisoners_dilemma3());
  for (double v : s.values) EXPECT_NEAR(v, 7.0, 1e-9);
}

TEST(Scne, IsNegatedSwneOnRandomGames) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testing::random_nfg(rng, {2, 2, 2});
    const auto a = scne(g);
    const auto b = swne(g.negated());
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(a.values[i], -b.values[i], 1e-12);
  }
}

}  // namespace
}  // namespace nashcsg
