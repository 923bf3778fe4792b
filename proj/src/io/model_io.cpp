#include "nashcsg/io/model_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace nashcsg {

namespace {

class ExpressionParser {
 public:
  ExpressionParser(const std::string& text, const Constants& constants) : text_(text), constants_(constants) {}

  double run() {
    const double v = sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ModelError("bad expression \"" + text_ + "\" at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double sum() {
    double v = product();
    while (true) {
      if (accept('+')) {
        v += product();
      } else if (accept('-')) {
        v -= product();
      } else {
        return v;
      }
    }
  }

  double product() {
    double v = unary();
    while (true) {
      if (accept('*')) {
        v *= unary();
      } else if (accept('/')) {
        v /= unary();
      } else {
        return v;
      }
    }
  }

  // -a^b is -(a^b); exponents may carry their own sign.
  double unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  double power() {
    const double base = primary();
    if (accept('^')) return std::pow(base, unary());
    return base;
  }

  double primary() {
    skip();
    if (accept('(')) {
      const double v = sum();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (accept('(')) {
        const double a = sum();
        if (!accept(',')) fail("expected ','");
        const double b = sum();
        if (!accept(')')) fail("expected ')'");
        if (name == "min") return std::min(a, b);
        if (name == "max") return std::max(a, b);
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      const auto it = constants_.find(name);
      if (it == constants_.end()) {
        pos_ = start;
        fail("unknown constant '" + name + "'");
      }
      return it->second;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const Constants& constants_;
  std::size_t pos_ = 0;
};

using Json = nlohmann::json;

std::string as_id(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ModelError(where + ": expected a string or integer id, got " + v.dump());
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ModelError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double as_value(const Json& v, const Constants& constants, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return evaluate_expression(v.get<std::string>(), constants);
  throw ModelError(where + ": expected a number or expression, got " + v.dump());
}

template <typename Map>
int lookup(const Map& map, const std::string& name, const std::string& what, const std::string& where) {
  const auto it = map.find(name);
  if (it == map.end()) throw ModelError(where + ": unknown " + what + " '" + name + "'");
  return it->second;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Report line and column of the byte offset.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ModelError("model parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": " + e.what());
  }
}

Constants declared_constants(const Json& doc) {
  Constants out;
  if (!doc.contains("constants")) return out;
  for (const auto& [name, v] : doc.at("constants").items()) {
    if (!v.is_number()) throw ModelError("constant '" + name + "' must be a number");
    out[name] = v.get<double>();
  }
  return out;
}

}  // namespace

double evaluate_expression(const std::string& text, const Constants& constants) {
  return ExpressionParser(text, constants).run();
}

Constants model_constants(const std::string& text) { return declared_constants(parse_json(text)); }

namespace {

CsgData parse_document(const Json& doc, const Constants& overrides) {
  if (!doc.is_object()) throw ModelError("model must be a JSON object");
  Constants constants = declared_constants(doc);
  for (const auto& [name, v] : overrides) {
    if (!constants.contains(name)) throw ModelError("model declares no constant '" + name + "'");
    constants[name] = v;
  }

  CsgData d;
  std::map<std::string, int> player_ids, state_ids;
  std::vector<std::map<std::string, int>> action_ids;
  for (const auto& p : member(doc, "players", "model")) {
    const std::string name = member(p, "name", "player").get<std::string>();
    if (player_ids.contains(name)) throw ModelError("duplicate player '" + name + "'");
    player_ids[name] = static_cast<int>(d.players.size());
    d.players.push_back(name);
    std::map<std::string, int> ids;
    std::vector<std::string> names;
    for (const auto& a : member(p, "actions", "player " + name)) {
      const std::string an = a.get<std::string>();
      if (an == "~") throw ModelError("player " + name + ": '~' is reserved for the idle action");
      if (ids.contains(an)) throw ModelError("player " + name + ": duplicate action '" + an + "'");
      ids[an] = static_cast<int>(names.size());
      names.push_back(an);
    }
    action_ids.push_back(std::move(ids));
    d.actions.push_back(std::move(names));
  }
  for (const auto& s : member(doc, "states", "model")) {
    const std::string id = as_id(member(s, "id", "state"), "state");
    if (state_ids.contains(id)) throw ModelError("duplicate state '" + id + "'");
    state_ids[id] = static_cast<int>(d.states.size());
    d.states.push_back(id);
    std::vector<std::string> labels;
    if (s.contains("labels")) {
      for (const auto& l : s.at("labels")) labels.push_back(l.get<std::string>());
    }
    d.labels.push_back(std::move(labels));
  }
  for (const auto& s : member(doc, "initial", "model")) {
    d.initial.push_back(lookup(state_ids, as_id(s, "initial"), "state", "initial"));
  }

  const int n = static_cast<int>(d.players.size());
  d.availability.assign(d.states.size(), std::vector<std::vector<ActionId>>(n));
  if (doc.contains("availability")) {
    for (const auto& [sid, per_player] : doc.at("availability").items()) {
      const std::string where = "availability of state " + sid;
      const int s = lookup(state_ids, sid, "state", "availability");
      for (const auto& [pname, actions] : per_player.items()) {
        const int i = lookup(player_ids, pname, "player", where);
        for (const auto& a : actions) d.availability[s][i].push_back(lookup(action_ids[i], a.get<std::string>(), "action", where));
      }
    }
  }

  const auto parse_joint = [&](const Json& joint, const std::string& where) {
    if (!joint.is_array() || static_cast<int>(joint.size()) != n) {
      throw ModelError(where + ": joint action must list one action per player");
    }
    std::vector<ActionId> out;
    for (int i = 0; i < n; ++i) {
      const std::string a = joint[i].get<std::string>();
      out.push_back(a == "~" ? kIdle : lookup(action_ids[i], a, "action", where));
    }
    return out;
  };

  int index = 0;
  for (const auto& t : member(doc, "transitions", "model")) {
    const std::string where = "transition " + std::to_string(index++);
    CsgData::Transition tr;
    tr.state = lookup(state_ids, as_id(member(t, "state", where), where), "state", where);
    tr.joint = parse_joint(member(t, "joint", where), where);
    for (const auto& [target, p] : member(t, "dist", where).items()) {
      tr.distribution.emplace_back(lookup(state_ids, target, "state", where), as_value(p, constants, where));
    }
    d.transitions.push_back(std::move(tr));
  }

  if (doc.contains("rewards")) {
    for (const auto& [name, body] : doc.at("rewards").items()) {
      const std::string where = "reward " + name;
      CsgData::Reward r;
      r.name = name;
      if (body.contains("state")) {
        r.state_rewards.assign(d.states.size(), 0.0);
        for (const auto& [sid, v] : body.at("state").items()) {
          r.state_rewards[lookup(state_ids, sid, "state", where)] = as_value(v, constants, where);
        }
      }
      if (body.contains("action")) {
        for (const auto& a : body.at("action")) {
          CsgData::ActionReward ar;
          ar.state = lookup(state_ids, as_id(member(a, "state", where), where), "state", where);
          ar.joint = parse_joint(member(a, "joint", where), where);
          ar.value = as_value(member(a, "v", where), constants, where);
          r.action_rewards.push_back(std::move(ar));
        }
      }
      d.rewards.push_back(std::move(r));
    }
  }
  return d;
}

}  // namespace

CsgData parse_model(const std::string& text, const Constants& overrides) {
  const Json doc = parse_json(text);
  try {
    return parse_document(doc, overrides);
  } catch (const Json::exception& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const Csg> load_model(const std::string& path, const Constants& overrides) {
  try {
    return std::make_shared<const Csg>(parse_model(read_file(path), overrides));
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

std::string save_model(const Csg& game) {
  const CsgData d = game.to_data();
  nlohmann::ordered_json doc;
  const auto joint_names = [&](const std::vector<ActionId>& joint) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < joint.size(); ++i) out.push_back(joint[i] == kIdle ? std::string("~") : d.actions[i][joint[i]]);
    return out;
  };
  doc["players"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < d.players.size(); ++i) {
    doc["players"].push_back({{"name", d.players[i]}, {"actions", d.actions[i]}});
  }
  doc["states"] = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < d.states.size(); ++s) {
    nlohmann::ordered_json st{{"id", d.states[s]}};
    if (!d.labels[s].empty()) st["labels"] = d.labels[s];
    doc["states"].push_back(st);
  }
  doc["initial"] = nlohmann::ordered_json::array();
  for (StateId s : d.initial) doc["initial"].push_back(d.states[s]);
  doc["availability"] = nlohmann::ordered_json::object();
  for (std::size_t s = 0; s < d.states.size(); ++s) {
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < d.players.size(); ++i) {
      if (d.availability[s][i].empty()) continue;
      nlohmann::ordered_json names = nlohmann::ordered_json::array();
      for (ActionId a : d.availability[s][i]) names.push_back(d.actions[i][a]);
      per[d.players[i]] = names;
    }
    doc["availability"][d.states[s]] = per;
  }
  doc["transitions"] = nlohmann::ordered_json::array();
  for (const auto& t : d.transitions) {
    nlohmann::ordered_json dist = nlohmann::ordered_json::object();
    for (const auto& [s, p] : t.distribution) dist[d.states[s]] = p;
    doc["transitions"].push_back({{"state", d.states[t.state]}, {"joint", joint_names(t.joint)}, {"dist", dist}});
  }
  if (!d.rewards.empty()) {
    doc["rewards"] = nlohmann::ordered_json::object();
    for (const auto& r : d.rewards) {
      nlohmann::ordered_json body = nlohmann::ordered_json::object();
      if (!r.state_rewards.empty()) {
        body["state"] = nlohmann::ordered_json::object();
        for (std::size_t s = 0; s < r.state_rewards.size(); ++s) {
          if (r.state_rewards[s] != 0.0) body["state"][d.states[s]] = r.state_rewards[s];
        }
      }
      if (!r.action_rewards.empty()) {
        body["action"] = nlohmann::ordered_json::array();
        for (const auto& a : r.action_rewards) {
          body["action"].push_back({{"state", d.states[a.state]}, {"joint", joint_names(a.joint)}, {"v", a.value}});
        }
      }
      doc["rewards"][r.name] = body;
    }
  }
  return doc.dump(1) + "\n";
}

}  // namespace nashcsg
