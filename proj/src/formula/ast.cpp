#include "nashcsg/formula/ast.hpp"

#include "nashcsg/common.hpp"

namespace nashcsg {

bool NashFormula::compare(double sum) const {
  switch (*comparison) {
    case Comparison::kGe: return sum >= threshold;
    case Comparison::kGt: return sum > threshold;
    case Comparison::kLe: return sum <= threshold;
    case Comparison::kLt: return sum < threshold;
  }
  return false;
}

StatePtr make_true() { return std::make_shared<StateFormula>(); }

StatePtr make_atom(std::string name) {
  auto f = std::make_shared<StateFormula>();
  f->kind = StateFormula::Kind::kAtom;
  f->atom = std::move(name);
  return f;
}

StatePtr make_not(StatePtr operand) {
  auto f = std::make_shared<StateFormula>();
  f->kind = StateFormula::Kind::kNot;
  f->lhs = std::move(operand);
  return f;
}

StatePtr make_and(StatePtr lhs, StatePtr rhs) {
  auto f = std::make_shared<StateFormula>();
  f->kind = StateFormula::Kind::kAnd;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

StatePtr make_nash(NashFormula nash) {
  auto f = std::make_shared<StateFormula>();
  f->kind = StateFormula::Kind::kNash;
  f->nash = std::make_shared<const NashFormula>(std::move(nash));
  return f;
}

namespace {

bool same(const StatePtr& a, const StatePtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

}  // namespace

bool operator==(const StateFormula& a, const StateFormula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case StateFormula::Kind::kTrue: return true;
    case StateFormula::Kind::kAtom: return a.atom == b.atom;
    case StateFormula::Kind::kNot: return same(a.lhs, b.lhs);
    case StateFormula::Kind::kAnd: return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
    case StateFormula::Kind::kNash: return *a.nash == *b.nash;
  }
  return false;
}

bool operator==(const Objective& a, const Objective& b) {
  return a.kind == b.kind && same(a.left, b.left) && same(a.right, b.right) && a.bound == b.bound &&
         a.reward == b.reward;
}

bool operator==(const NashFormula& a, const NashFormula& b) {
  return a.coalitions == b.coalitions && a.opt == b.opt && a.comparison == b.comparison &&
         (a.is_numeric() || a.threshold == b.threshold) && a.objectives == b.objectives;
}

std::string to_string(Comparison comparison) {
  switch (comparison) {
    case Comparison::kGe: return ">=";
    case Comparison::kGt: return ">";
    case Comparison::kLe: return "<=";
    case Comparison::kLt: return "<";
  }
  return "?";
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_string(const StateFormula& f) {
  switch (f.kind) {
    case StateFormula::Kind::kTrue: return "true";
    case StateFormula::Kind::kAtom: return quote(f.atom);
    case StateFormula::Kind::kNot: return "!" + to_string(*f.lhs);
    case StateFormula::Kind::kAnd: return "(" + to_string(*f.lhs) + " & " + to_string(*f.rhs) + ")";
    case StateFormula::Kind::kNash: return to_string(*f.nash);
  }
  return "";
}

std::string to_string(const Objective& o) {
  switch (o.kind) {
    case Objective::Kind::kNext: return "P[ X " + to_string(*o.right) + " ]";
    case Objective::Kind::kBoundedUntil:
      return "P[ " + to_string(*o.left) + " U<=" + std::to_string(o.bound) + " " + to_string(*o.right) + " ]";
    case Objective::Kind::kUntil: return "P[ " + to_string(*o.left) + " U " + to_string(*o.right) + " ]";
    case Objective::Kind::kInstantaneous: return "R{" + quote(o.reward) + "}[ I=" + std::to_string(o.bound) + " ]";
    case Objective::Kind::kCumulative: return "R{" + quote(o.reward) + "}[ C<=" + std::to_string(o.bound) + " ]";
    case Objective::Kind::kReach: return "R{" + quote(o.reward) + "}[ F " + to_string(*o.right) + " ]";
  }
  return "";
}

std::string to_string(const NashFormula& f) {
  std::string out = "<<";
  for (std::size_t i = 0; i < f.coalitions.size(); ++i) {
    if (i > 0) out += ":";
    for (std::size_t k = 0; k < f.coalitions[i].size(); ++k) {
      if (k > 0) out += ",";
      out += f.coalitions[i][k];
    }
  }
  out += ">>";
  out += f.opt == Opt::kMax ? "max" : "min";
  out += f.is_numeric() ? "=?" : to_string(*f.comparison) + format_double(f.threshold, 17);
  out += " (";
  for (std::size_t i = 0; i < f.objectives.size(); ++i) {
    if (i > 0) out += " + ";
    out += to_string(f.objectives[i]);
  }
  return out + ")";
}

Horizon classify_horizon(const NashFormula& f) {
  bool finite = false;
  bool infinite = false;
  for (const auto& o : f.objectives) (o.is_finite() ? finite : infinite) = true;
  if (finite && infinite) return Horizon::kMixed;
  return infinite ? Horizon::kInfinite : Horizon::kFinite;
}

std::string to_string(Horizon horizon) {
  switch (horizon) {
    case Horizon::kFinite: return "finite";
    case Horizon::kInfinite: return "infinite";
    case Horizon::kMixed: return "mixed";
  }
  return "";
}

}  // namespace nashcsg
