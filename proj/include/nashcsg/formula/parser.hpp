#pragma once

#include <string_view>

#include "nashcsg/formula/ast.hpp"

namespace nashcsg {

// Parses a state formula. F phi and F<=k phi are expanded to true U phi and
// true U<=k phi. Throws FormulaError with the column of the offending input
// on syntax errors, unknown operators, overlapping coalitions, a coalition
// count different from the objective count, or mixed probability and reward
// objectives.
StatePtr parse_formula(std::string_view text);

}  // namespace nashcsg
