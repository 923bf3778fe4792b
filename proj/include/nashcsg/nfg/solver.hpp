#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nashcsg/model/nfg.hpp"

namespace nashcsg {

struct SolverConfig {
  double tau_feas = 1e-8;     // constraint tolerance on utilities normalized to [0, 1]
  double tau_welfare = 1e-6;  // welfare comparison tolerance, original units
  double delta_supp = 1e-6;   // minimum probability of an in-support action
  int multistarts = 8;        // pseudorandom starts besides the support centroid
  int max_iterations = 200;   // Levenberg-Marquardt iterations per start
  bool strict = false;        // fail on inconclusive supports instead of skipping them
  int threads = 1;            // workers for mixed-support analysis
};

double expected_utility(const NormalFormGame& game, const MixedProfile& profile, PlayerId player);
// max over pure deviations of player minus current utility.
double regret(const NormalFormGame& game, const MixedProfile& profile, PlayerId player);

struct Removal {
  PlayerId player;
  int action;        // original index
  int dominated_by;  // original index
  int round;
};

struct ReducedGame {
  NormalFormGame game;
  std::vector<std::vector<int>> kept;  // per player, reduced index -> original index
  std::vector<Removal> log;

  MixedProfile expand(const MixedProfile& reduced, const NormalFormGame& original) const;
};

// Iterated removal of actions strictly dominated by another pure action:
// b dominates a when u(b, c) - u(a, c) > margin for every surviving opponent cell c.
ReducedGame filter_dominated(const NormalFormGame& game, double margin = 0.0);

// Per-player action bitmasks.
struct Support {
  std::vector<std::uint64_t> masks;

  bool contains(PlayerId player, int action) const { return (masks[player] >> action) & 1u; }
  int size(PlayerId player) const;
  int total_size() const;
  bool is_pure() const;
  std::vector<int> actions(PlayerId player) const;
  std::string to_string() const;
  bool operator==(const Support&) const = default;
};

// Canonical order: ascending total size, then lexicographic over the masks
// (player 0 first). All-singleton supports come first, in joint-index order.
std::vector<Support> enumerate_supports(const std::vector<int>& action_counts);
// prod_i (2^{|A_i|} - 1).
std::uint64_t count_supports(const std::vector<int>& action_counts);

struct PureCheck {
  bool is_ne = false;
  std::vector<double> values;
  std::vector<double> gains;  // best deviation gain per player (<= tolerance for an NE)
};

// No player gains more than tolerance by a unilateral pure deviation.
PureCheck check_pure_profile(const NormalFormGame& game, std::span<const int> actions, double tolerance = 0.0);

// False when a sound necessary condition for an equilibrium on the support
// fails: an in-support action strictly dominated (restricted to the opponents'
// support) by another in-support action, or an outside action strictly
// dominating every in-support action. Pure supports are always kept.
bool presolve_support(const NormalFormGame& game, const Support& support, double margin = 0.0);

struct EquilibriumCandidate {
  MixedProfile profile;
  std::vector<double> values;
  double welfare = 0.0;
  Support support;
  double residual = 0.0;  // max violation, in the units of the solved game
};

enum class SupportStatus { kFeasible, kInfeasible, kInconclusive, kPruned };

struct SupportResult {
  SupportStatus status = SupportStatus::kInfeasible;
  std::optional<EquilibriumCandidate> candidate;
  int iterations = 0;
};

// Searches for an equilibrium with exactly the given support: indifference
// among support actions, no profitable outside action, in-support
// probabilities at least delta_supp, and among feasible points found from all
// starts the one with the largest welfare. Feasibility tolerances apply to the
// game as given; swne normalizes utilities before calling this.
SupportResult solve_support(const NormalFormGame& game, const Support& support, const SolverConfig& config);

struct NfgSolution {
  MixedProfile profile;
  std::vector<double> values;
  double welfare = 0.0;
  std::vector<double> regrets;
  Support support;  // in original action indices
  bool tie = false;  // another candidate within tau_welfare had a different profile
  std::uint64_t supports_total = 0;
  std::uint64_t supports_solved = 0;
  std::uint64_t supports_pruned = 0;
  std::uint64_t supports_inconclusive = 0;
  std::uint64_t candidates = 0;
};

// Social-welfare optimal NE. Throws SolverError when no equilibrium is found,
// or (strict mode) when some support was inconclusive.
NfgSolution swne(const NormalFormGame& game, const SolverConfig& config = {});
// Social-cost optimal NE of a game whose utilities are costs: swne of the
// negated game, with values negated back.
NfgSolution scne(const NormalFormGame& game, const SolverConfig& config = {});

}  // namespace nashcsg
