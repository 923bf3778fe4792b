#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nashcsg {

struct StateFormula;
struct NashFormula;
using StatePtr = std::shared_ptr<const StateFormula>;

struct Objective {
  enum class Kind {
    kNext,          // P[ X right ]
    kBoundedUntil,  // P[ left U<=bound right ]
    kUntil,         // P[ left U right ]
    kInstantaneous, // R{reward}[ I=bound ]
    kCumulative,    // R{reward}[ C<=bound ]
    kReach,         // R{reward}[ F right ]
  };

  Kind kind = Kind::kUntil;
  StatePtr left;
  StatePtr right;
  int bound = 0;
  std::string reward;

  bool is_reward() const { return kind >= Kind::kInstantaneous; }
  bool is_finite() const {
    return kind == Kind::kNext || kind == Kind::kBoundedUntil || kind == Kind::kInstantaneous ||
           kind == Kind::kCumulative;
  }
};

enum class Opt { kMax, kMin };
enum class Comparison { kGe, kGt, kLe, kLt };

struct NashFormula {
  // Coalition member names as written (player names or 1-based indices).
  std::vector<std::vector<std::string>> coalitions;
  Opt opt = Opt::kMax;
  std::optional<Comparison> comparison;  // empty for a numeric query (=?)
  double threshold = 0.0;
  std::vector<Objective> objectives;

  bool is_numeric() const { return !comparison.has_value(); }
  bool compare(double sum) const;
};

struct StateFormula {
  enum class Kind { kTrue, kAtom, kNot, kAnd, kNash };

  Kind kind = Kind::kTrue;
  std::string atom;
  StatePtr lhs;  // operand of kNot, left operand of kAnd
  StatePtr rhs;
  std::shared_ptr<const NashFormula> nash;
};

StatePtr make_true();
StatePtr make_atom(std::string name);
StatePtr make_not(StatePtr operand);
StatePtr make_and(StatePtr lhs, StatePtr rhs);
StatePtr make_nash(NashFormula nash);

bool operator==(const StateFormula& a, const StateFormula& b);
bool operator==(const NashFormula& a, const NashFormula& b);
bool operator==(const Objective& a, const Objective& b);

// Text in the input grammar; parse_formula(to_string(f)) == f.
std::string to_string(const StateFormula& formula);
std::string to_string(const NashFormula& formula);
std::string to_string(const Objective& objective);
std::string to_string(Comparison comparison);

enum class Horizon { kFinite, kInfinite, kMixed };

Horizon classify_horizon(const NashFormula& formula);
std::string to_string(Horizon horizon);

}  // namespace nashcsg
