#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nashcsg/engine/product.hpp"
#include "nashcsg/formula/ast.hpp"
#include "nashcsg/model/coalition.hpp"
#include "nashcsg/nfg/solver.hpp"

namespace nashcsg {

struct VIConfig {
  double epsilon = 1e-6;     // sup-norm residual threshold
  int window = 2;            // consecutive iterations below epsilon
  int max_iterations = 10000;
};

struct EngineConfig {
  SolverConfig solver;
  VIConfig vi;
  int threads = 1;  // workers for independent stage games; 0 = hardware
};

// Per unsettled product node, the equilibrium of its stage game (one
// distribution per coalition over the local actions of the node's state).
// Settled nodes have an empty profile.
struct StrategyTable {
  bool finite = true;
  std::vector<MixedProfile> profiles;
};

struct SolveResult {
  std::shared_ptr<const ProductSpace> space;
  std::shared_ptr<const ProductGraph> graph;
  int m = 0;                   // objectives
  std::vector<double> values;  // num_nodes x m, row-major
  StrategyTable strategy;
  int iterations = 0;          // value iteration only
  double residual = 0.0;       // last sup-norm change (value iteration only)
  std::size_t stage_games = 0; // stage NFGs solved
  std::size_t ties = 0;        // stage solutions with an equally good alternative

  double value(int node, int l) const { return values[static_cast<std::size_t>(node) * m + l]; }
};

class AssumptionError : public Error {
 public:
  using Error::Error;
};

struct StoppingReport {
  struct Failure {
    int objective;
    std::vector<StateId> states;  // states from which the target can be avoided forever
  };
  std::vector<Failure> failures;

  bool ok() const { return failures.empty(); }
  std::string to_string(const Csg& game) const;
};

// Every infinite objective's target (not phi_1 or phi_2 for until, phi for
// reachability rewards) must be reached with probability 1 from every state
// under every profile. Finite objectives are skipped.
StoppingReport check_stopping_assumption(const Csg& game, const std::vector<CompiledObjective>& objectives);

// Backward induction over steps for finite objectives. opt = kMax solves
// stage games for SWNE, kMin for SCNE.
SolveResult solve_finite(std::shared_ptr<const ProductSpace> space, Opt opt, const EngineConfig& config);
// Value iteration for infinite objectives. Throws NotConvergedError at the
// iteration cap. The caller is responsible for the stopping assumption.
SolveResult solve_infinite(std::shared_ptr<const ProductSpace> space, Opt opt, const EngineConfig& config);
// Dispatches on the horizon of the space.
SolveResult solve(std::shared_ptr<const ProductSpace> space, Opt opt, const EngineConfig& config);

// Convenience entry points for a single objective family.
SolveResult solve_bounded_until(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                                const EngineConfig& config);
SolveResult solve_instantaneous(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                                const EngineConfig& config);
SolveResult solve_cumulative(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                             const EngineConfig& config);
SolveResult solve_until_vi(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                           const EngineConfig& config);
SolveResult solve_reach_reward_vi(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                                  const EngineConfig& config);

struct NashResult {
  Horizon horizon = Horizon::kFinite;
  std::shared_ptr<const Csg> model;
  std::shared_ptr<const CoalitionGame> coalition_game;
  std::shared_ptr<const ProductSpace> space;
  SolveResult solution;
  std::vector<std::vector<double>> values;  // per state, one entry per coalition
  std::vector<double> sums;                 // per state
  std::vector<char> satisfied;              // per state; empty for numeric queries
};

// Builds the coalition game for the formula's partition, evaluates the
// objectives' state formulae (nested Nash formulae first), checks the
// stopping assumption for infinite objectives and solves. Throws Error
// ("unsupported-mixed-horizon ...") for mixed horizons and AssumptionError
// when the stopping assumption fails.
NashResult check_nash_formula(std::shared_ptr<const Csg> model, const NashFormula& formula, const EngineConfig& config);

// Satisfaction set of a state formula; nested Nash formulae must be threshold queries.
StateSet check_state_formula(std::shared_ptr<const Csg> model, const StateFormula& formula, const EngineConfig& config);

}  // namespace nashcsg
