#include "nashcsg/formula/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

#include "nashcsg/common.hpp"

namespace nashcsg {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  StatePtr parse() {
    StatePtr f = state();
    skip();
    if (pos_ != text_.size()) fail("unexpected input '" + std::string(rest(12)) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw FormulaError(message, pos_); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t at) const { throw FormulaError(message, at); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view rest(std::size_t n) const { return text_.substr(pos_, n); }

  bool peek(std::string_view token) {
    skip();
    return text_.substr(pos_, token.size()) == token;
  }

  // A keyword must not run into an identifier character.
  bool peek_word(std::string_view word) {
    if (!peek(word)) return false;
    const std::size_t end = pos_ + word.size();
    return end >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_');
  }

  bool accept(std::string_view token) {
    if (!peek(token)) return false;
    pos_ += token.size();
    return true;
  }

  bool accept_word(std::string_view word) {
    if (!peek_word(word)) return false;
    pos_ += word.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) {
      fail("expected '" + std::string(token) + "'" + (pos_ < text_.size() ? " before '" + std::string(rest(12)) + "'" : " at end of input"));
    }
  }

  StatePtr state() {
    StatePtr lhs = unary();
    while (accept("&")) lhs = make_and(lhs, unary());
    return lhs;
  }

  StatePtr unary() {
    skip();
    if (accept("!")) return make_not(unary());
    if (accept_word("true")) return make_true();
    if (peek("\"")) return make_atom(string_literal());
    if (peek("<<")) return nash();
    if (accept("(")) {
      StatePtr inner = state();
      expect(")");
      return inner;
    }
    if (pos_ >= text_.size()) fail("unexpected end of input, expected a state formula");
    fail("unexpected '" + std::string(rest(12)) + "', expected a state formula");
  }

  std::string string_literal() {
    skip();
    expect("\"");
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail("unterminated string literal");
    ++pos_;
    return out;
  }

  std::string name() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '.' ||
            text_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a player name or index");
    return std::string(text_.substr(start, pos_ - start));
  }

  int natural() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer bound");
    const std::string digits(text_.substr(start, pos_ - start));
    if (digits.size() > 9) fail_at("bound too large", start);
    return std::stoi(digits);
  }

  double number() {
    skip();
    const std::string tail(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(tail.c_str(), &end);
    if (end == tail.c_str()) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - tail.c_str());
    return v;
  }

  StatePtr nash() {
    expect("<<");
    NashFormula f;
    std::set<std::string> seen;
    do {
      std::vector<std::string> coalition;
      do {
        const std::size_t at = (skip(), pos_);
        std::string n = name();
        if (!seen.insert(n).second) fail_at("player '" + n + "' appears in more than one coalition", at);
        coalition.push_back(std::move(n));
      } while (accept(","));
      f.coalitions.push_back(std::move(coalition));
    } while (accept(":"));
    expect(">>");

    if (accept_word("max")) {
      f.opt = Opt::kMax;
    } else if (accept_word("min")) {
      f.opt = Opt::kMin;
    } else {
      fail("expected 'max' or 'min'");
    }

    if (accept("=?")) {
      // numeric query
    } else if (accept(">=")) {
      f.comparison = Comparison::kGe;
    } else if (accept("<=")) {
      f.comparison = Comparison::kLe;
    } else if (accept(">")) {
      f.comparison = Comparison::kGt;
    } else if (accept("<")) {
      f.comparison = Comparison::kLt;
    } else {
      fail("expected '=?' or a comparison (>=, >, <=, <)");
    }
    if (f.comparison) f.threshold = number();

    expect("(");
    const std::size_t objectives_at = (skip(), pos_);
    do {
      f.objectives.push_back(objective());
    } while (accept("+"));
    expect(")");

    if (f.objectives.size() != f.coalitions.size()) {
      fail_at("nash formula has " + std::to_string(f.coalitions.size()) + " coalitions but " +
                  std::to_string(f.objectives.size()) + " objectives",
              objectives_at);
    }
    for (const auto& o : f.objectives) {
      if (o.is_reward() != f.objectives.front().is_reward()) {
        fail_at("objectives must be all probabilistic or all reward", objectives_at);
      }
    }
    return make_nash(std::move(f));
  }

  Objective objective() {
    skip();
    Objective o;
    if (accept("P")) {
      expect("[");
      path(o);
      expect("]");
      return o;
    }
    if (accept("R")) {
      expect("{");
      o.reward = string_literal();
      expect("}");
      expect("[");
      reward(o);
      expect("]");
      return o;
    }
    fail("unknown objective operator '" + std::string(rest(8)) + "', expected P[...] or R{...}[...]");
  }

  void path(Objective& o) {
    skip();
    if (accept_word("X")) {
      o.kind = Objective::Kind::kNext;
      o.right = state();
      return;
    }
    if (peek("F<=")) {
      pos_ += 3;
      o.kind = Objective::Kind::kBoundedUntil;
      o.bound = natural();
      o.left = make_true();
      o.right = state();
      return;
    }
    if (accept_word("F")) {
      o.kind = Objective::Kind::kUntil;
      o.left = make_true();
      o.right = state();
      return;
    }
    if (peek_word("G") || peek_word("W") || peek_word("R")) fail("unknown path operator '" + std::string(rest(1)) + "'");
    o.left = state();
    skip();
    if (accept("U<=")) {
      o.kind = Objective::Kind::kBoundedUntil;
      o.bound = natural();
    } else if (accept_word("U")) {
      o.kind = Objective::Kind::kUntil;
    } else {
      fail("expected 'U' or 'U<=k' in path formula");
    }
    o.right = state();
  }

  void reward(Objective& o) {
    skip();
    if (accept("I=")) {
      o.kind = Objective::Kind::kInstantaneous;
      o.bound = natural();
    } else if (accept("C<=")) {
      o.kind = Objective::Kind::kCumulative;
      o.bound = natural();
    } else if (accept_word("F")) {
      o.kind = Objective::Kind::kReach;
      o.right = state();
    } else {
      fail("unknown reward operator '" + std::string(rest(4)) + "', expected I=k, C<=k or F");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

StatePtr parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace nashcsg
