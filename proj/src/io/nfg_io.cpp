#include "nashcsg/io/nfg_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "nashcsg/io/model_io.hpp"

namespace nashcsg {

namespace {

double parse_decimal(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ModelError("bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

double parse_number(const std::string& token) {
  const auto slash = token.find('/');
  if (slash == std::string::npos) return parse_decimal(token);
  const double num = parse_decimal(std::string_view(token).substr(0, slash));
  const double den = parse_decimal(std::string_view(token).substr(slash + 1));
  if (den == 0.0) throw ModelError("zero denominator in '" + token + "'");
  return num / den;
}

NormalFormGame parse_nfg(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  int players = -1;
  std::vector<std::vector<std::string>> names;
  std::vector<char> named;
  NormalFormGame game;
  std::vector<char> seen;
  const auto fail = [&](const std::string& what) -> void {
    throw ModelError("NFG line " + std::to_string(line_no) + ": " + what);
  };
  const auto ensure_game = [&] {
    if (!seen.empty()) return;
    for (int i = 0; i < players; ++i) {
      if (!named[i]) fail("actions of player " + std::to_string(i + 1) + " must precede utilities");
    }
    std::vector<int> counts;
    for (const auto& n : names) counts.push_back(static_cast<int>(n.size()));
    game = NormalFormGame(counts);
    game.set_action_names(names);
    seen.assign(game.num_joint_actions(), 0);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "players") {
      if (players >= 0) fail("duplicate 'players' line");
      if (tok.size() != 2) fail("expected 'players n'");
      players = std::atoi(tok[1].c_str());
      if (players < 1) fail("player count must be positive");
      names.assign(players, {});
      named.assign(players, 0);
    } else if (tok[0] == "actions") {
      if (players < 0) fail("'players' line must come first");
      if (!seen.empty()) fail("actions after utilities");
      if (tok.size() < 3) fail("expected 'actions i a_1 ...'");
      const int i = std::atoi(tok[1].c_str());
      if (i < 1 || i > players) fail("player index out of range: " + tok[1]);
      if (named[i - 1]) fail("duplicate actions line for player " + tok[1]);
      named[i - 1] = 1;
      names[i - 1].assign(tok.begin() + 2, tok.end());
      for (std::size_t a = 0; a < names[i - 1].size(); ++a) {
        for (std::size_t b = 0; b < a; ++b) {
          if (names[i - 1][a] == names[i - 1][b]) fail("duplicate action '" + names[i - 1][a] + "'");
        }
      }
    } else if (tok[0] == "u") {
      if (players < 0) fail("'players' line must come first");
      ensure_game();
      if (static_cast<int>(tok.size()) != 1 + 2 * players) fail("expected 'u' followed by n actions and n values");
      std::vector<int> joint(players);
      for (int i = 0; i < players; ++i) {
        int found = -1;
        for (std::size_t a = 0; a < names[i].size(); ++a) {
          if (names[i][a] == tok[1 + i]) found = static_cast<int>(a);
        }
        if (found < 0) fail("unknown action '" + tok[1 + i] + "' for player " + std::to_string(i + 1));
        joint[i] = found;
      }
      const std::size_t j = game.joint_index(joint);
      if (seen[j]) fail("duplicate utilities for a joint action");
      seen[j] = 1;
      for (int i = 0; i < players; ++i) {
        try {
          game.set_utility(j, i, parse_number(tok[1 + players + i]));
        } catch (const ModelError& e) {
          fail(e.what());
        }
      }
    } else {
      fail("unknown directive '" + tok[0] + "'");
    }
  }
  if (players < 0) throw ModelError("NFG: missing 'players' line");
  ensure_game();
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (seen[j]) continue;
    std::string joint;
    const auto actions = game.joint_actions(j);
    for (int i = 0; i < players; ++i) joint += (i ? " " : "") + names[i][actions[i]];
    throw ModelError("NFG: missing utilities for joint action (" + joint + ")");
  }
  return game;
}

NormalFormGame load_nfg(const std::string& path) {
  try {
    return parse_nfg(read_file(path));
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

std::string write_nfg(const NormalFormGame& game) {
  std::ostringstream out;
  const int n = game.num_players();
  out << "players " << n << "\n";
  const auto name = [&](int i, int a) {
    return game.has_action_names() ? game.action_name(i, a) : "a" + std::to_string(a + 1);
  };
  for (int i = 0; i < n; ++i) {
    out << "actions " << i + 1;
    for (int a = 0; a < game.num_actions(i); ++a) out << " " << name(i, a);
    out << "\n";
  }
  for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
    out << "u";
    const auto actions = game.joint_actions(j);
    for (int i = 0; i < n; ++i) out << " " << name(i, actions[i]);
    for (int i = 0; i < n; ++i) out << " " << format_double(game.utility(j, i), 17);
    out << "\n";
  }
  return out.str();
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << "\r\n";
}

std::string csv_number(double value) { return format_double(value, 12); }

}  // namespace nashcsg
