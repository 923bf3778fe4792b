#include "nashcsg/model/stage_game.hpp"

#include <cmath>

namespace nashcsg {

NormalFormGame stage_game(const Csg& game, StateId state, const UtilityAssembler& utility, bool with_names) {
  const int n = game.num_players();
  std::vector<int> counts(n);
  std::vector<std::vector<std::string>> names(n);
  for (PlayerId i = 0; i < n; ++i) {
    counts[i] = game.num_local_actions(state, i);
    if (!with_names) continue;
    for (ActionId a : game.local_actions(state, i)) names[i].push_back(game.action_name(i, a));
  }
  NormalFormGame nfg(counts);
  if (with_names) nfg.set_action_names(std::move(names));
  for (int c = 0; c < game.num_choices(state); ++c) {
    for (PlayerId i = 0; i < n; ++i) {
      const double u = utility(c, i);
      if (!std::isfinite(u)) {
        throw SolverError("non-finite utility for player " + game.player_name(i) + " at state " +
                          game.state_name(state));
      }
      nfg.set_utility(static_cast<std::size_t>(c), i, u);
    }
  }
  return nfg;
}

}  // namespace nashcsg
