#pragma once

#include <functional>
#include <vector>

#include "nashcsg/formula/ast.hpp"
#include "nashcsg/model/csg.hpp"

namespace nashcsg {

using StateSet = std::vector<char>;  // one flag per state

// Per-state truth of an embedded Nash formula.
using NashResolver = std::function<StateSet(const NashFormula&)>;

// Satisfaction set of a state formula. Atomic propositions must be labels of
// the model (FormulaError otherwise); Nash subformulae go to the resolver.
StateSet sat_states(const Csg& model, const StateFormula& formula, const NashResolver& resolver);

// Maps coalition member names (player names or 1-based indices) to player ids
// and checks that the coalitions partition the players. Throws FormulaError.
std::vector<std::vector<PlayerId>> resolve_coalitions(const Csg& model, const NashFormula& formula);

}  // namespace nashcsg
