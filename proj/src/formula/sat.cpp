#include "nashcsg/formula/sat.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace nashcsg {

StateSet sat_states(const Csg& model, const StateFormula& formula, const NashResolver& resolver) {
  const int n = model.num_states();
  switch (formula.kind) {
    case StateFormula::Kind::kTrue: return StateSet(n, 1);
    case StateFormula::Kind::kAtom: {
      const auto label = model.find_label(formula.atom);
      if (!label) throw FormulaError("unknown atomic proposition \"" + formula.atom + "\"");
      StateSet out(n);
      for (StateId s = 0; s < n; ++s) out[s] = model.has_label(s, *label);
      return out;
    }
    case StateFormula::Kind::kNot: {
      StateSet out = sat_states(model, *formula.lhs, resolver);
      for (auto& v : out) v = !v;
      return out;
    }
    case StateFormula::Kind::kAnd: {
      StateSet out = sat_states(model, *formula.lhs, resolver);
      const StateSet rhs = sat_states(model, *formula.rhs, resolver);
      for (StateId s = 0; s < n; ++s) out[s] = out[s] && rhs[s];
      return out;
    }
    case StateFormula::Kind::kNash: return resolver(*formula.nash);
  }
  return StateSet(n, 0);
}

std::vector<std::vector<PlayerId>> resolve_coalitions(const Csg& model, const NashFormula& formula) {
  std::vector<std::vector<PlayerId>> out;
  std::set<PlayerId> seen;
  for (const auto& coalition : formula.coalitions) {
    std::vector<PlayerId> ids;
    for (const auto& name : coalition) {
      std::optional<PlayerId> id = model.find_player(name);
      if (!id && !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) { return std::isdigit(c); })) {
        const int index = std::stoi(name);
        if (index >= 1 && index <= model.num_players()) id = index - 1;
      }
      if (!id) throw FormulaError("unknown player '" + name + "'");
      if (!seen.insert(*id).second) throw FormulaError("player '" + name + "' appears in more than one coalition");
      ids.push_back(*id);
    }
    out.push_back(std::move(ids));
  }
  if (static_cast<int>(seen.size()) != model.num_players()) {
    std::string missing;
    for (PlayerId p = 0; p < model.num_players(); ++p) {
      if (!seen.count(p)) missing += (missing.empty() ? "" : ", ") + model.player_name(p);
    }
    throw FormulaError("coalitions do not cover every player (missing " + missing + ")");
  }
  return out;
}

}  // namespace nashcsg
