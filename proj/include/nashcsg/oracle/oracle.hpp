#pragma once

#include <optional>
#include <vector>

#include "nashcsg/engine/product.hpp"
#include "nashcsg/formula/ast.hpp"
#include "nashcsg/model/csg.hpp"
#include "nashcsg/model/nfg.hpp"
#include "nashcsg/model/single_controller.hpp"

// Independent reference computations used to cross-check the solvers. They
// share only data types with the production code.
namespace nashcsg::oracle {

struct PureEquilibrium {
  std::size_t joint = 0;
  std::vector<int> actions;
  std::vector<double> values;
  double welfare = 0.0;
};

// Every pure NE in joint-index order: no player gains more than tolerance by
// a unilateral deviation.
std::vector<PureEquilibrium> brute_force_pure_ne(const NormalFormGame& game, double tolerance = 1e-9);

// Welfare-optimal pure NE (cost-optimal for opt = kMin, where utilities are
// costs), keeping the first in joint order unless a later one is better by
// more than tie_tolerance. Empty when the game has no pure NE.
std::optional<PureEquilibrium> best_pure_ne(const NormalFormGame& game, Opt opt, double tolerance = 1e-9,
                                            double tie_tolerance = 1e-6);

// Subgame-perfect values of finite objectives, computed by memoized recursion
// over (step, state, satisfied, failed) with pure stage equilibria only.
// Abstains (empty result) as soon as some reachable stage game has no pure NE.
std::optional<std::vector<std::vector<double>>> reference_backward_induction(
    const Csg& game, const std::vector<CompiledObjective>& objectives, Opt opt);

// Classical single-controller optimal values. Rewards are per state and per
// global choice of the process.
std::vector<double> optimal_bounded_until(const DecisionProcess& process, const StateSet& left, const StateSet& right,
                                          int bound, bool maximize);
std::vector<double> optimal_until(const DecisionProcess& process, const StateSet& left, const StateSet& right,
                                  bool maximize);
std::vector<double> optimal_cumulative(const DecisionProcess& process, const std::vector<double>& state_reward,
                                       const std::vector<double>& choice_reward, int bound, bool maximize);
// Expected reward accumulated before the target is first reached. Requires
// the target to be reached with probability 1 under every policy.
std::vector<double> optimal_reach_reward(const DecisionProcess& process, const std::vector<double>& state_reward,
                                         const std::vector<double>& choice_reward, const StateSet& target,
                                         bool maximize);

// Absorption probabilities of a Markov chain given as a row-stochastic dense
// matrix: probability of eventually entering target.
std::vector<double> chain_reachability(const std::vector<std::vector<double>>& matrix, const StateSet& target);

}  // namespace nashcsg::oracle
