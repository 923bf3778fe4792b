#pragma once

#include <functional>

#include "nashcsg/model/csg.hpp"
#include "nashcsg/model/nfg.hpp"

namespace nashcsg {

// Supplies u_player(choice) for an enabled choice at the state being built.
using UtilityAssembler = std::function<double(int choice, PlayerId player)>;

// The one-shot game at state: player i's actions are local_actions(state, i),
// and the NFG joint index coincides with the choice index. Throws
// SolverError("non-finite utility ...") if the assembler yields NaN or inf.
// Action names are copied from the game unless with_names is false.
NormalFormGame stage_game(const Csg& game, StateId state, const UtilityAssembler& utility, bool with_names = true);

}  // namespace nashcsg
