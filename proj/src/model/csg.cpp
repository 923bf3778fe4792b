#include "nashcsg/model/csg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace nashcsg {

namespace {

std::string joint_to_string(const CsgData& data, const std::vector<ActionId>& joint) {
  std::string out = "(";
  for (std::size_t i = 0; i < joint.size(); ++i) {
    if (i > 0) out += ",";
    const ActionId a = joint[i];
    if (a == kIdle) {
      out += "~";
    } else if (i < data.actions.size() && a >= 0 && a < static_cast<ActionId>(data.actions[i].size())) {
      out += data.actions[i][a];
    } else {
      out += "#" + std::to_string(a);
    }
  }
  return out + ")";
}

// Enabled local lists: the available actions, or {kIdle} when there are none.
std::vector<ActionId> local_list(const std::vector<ActionId>& available) {
  if (available.empty()) return {kIdle};
  return available;
}

template <typename F>
void for_each_joint(const std::vector<std::vector<ActionId>>& lists, F&& f) {
  const std::size_t n = lists.size();
  std::vector<int> idx(n, 0);
  std::vector<ActionId> joint(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) joint[i] = lists[i][idx[i]];
    f(joint, idx);
    int i = static_cast<int>(n) - 1;
    while (i >= 0) {
      if (++idx[i] < static_cast<int>(lists[i].size())) break;
      idx[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
}

}  // namespace

bool ValidationReport::has(const std::string& kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << v.kind;
    if (v.state >= 0) out << " at state #" << v.state;
    if (!v.detail.empty()) out << ": " << v.detail;
    out << "\n";
  }
  return out.str();
}

ValidationReport validate_csg(const CsgData& data) {
  ValidationReport report;
  auto add = [&](std::string kind, StateId s, std::vector<ActionId> joint, std::string detail) {
    report.violations.push_back({std::move(kind), s, std::move(joint), std::move(detail)});
  };

  const int n = static_cast<int>(data.players.size());
  const int num_states = static_cast<int>(data.states.size());
  if (n == 0) add("no players", -1, {}, "");
  if (static_cast<int>(data.actions.size()) != n) {
    add("action table", -1, {}, "one action list per player required");
    return report;
  }
  if (num_states == 0) {
    add("no states", -1, {}, "");
    return report;
  }
  {
    std::set<std::string> seen;
    for (const auto& p : data.players) {
      if (!seen.insert(p).second) add("duplicate name", -1, {}, "player " + p);
    }
    seen.clear();
    for (const auto& s : data.states) {
      if (!seen.insert(s).second) add("duplicate name", -1, {}, "state " + s);
    }
    for (int i = 0; i < n; ++i) {
      seen.clear();
      for (const auto& a : data.actions[i]) {
        if (a == "~") add("reserved name", -1, {}, "action name ~ denotes idle");
        if (!seen.insert(a).second) add("duplicate name", -1, {}, "action " + a + " of player " + data.players[i]);
      }
    }
  }
  if (!data.labels.empty() && static_cast<int>(data.labels.size()) != num_states) {
    add("label table", -1, {}, "one label list per state required");
  }
  if (data.initial.empty()) add("no initial state", -1, {}, "");
  for (StateId s : data.initial) {
    if (s < 0 || s >= num_states) add("bad state reference", -1, {}, "initial state #" + std::to_string(s));
  }
  if (static_cast<int>(data.availability.size()) != num_states) {
    add("availability table", -1, {}, "one availability entry per state required");
    return report;
  }
  bool availability_ok = true;
  for (StateId s = 0; s < num_states; ++s) {
    if (static_cast<int>(data.availability[s].size()) != n) {
      add("availability table", s, {}, "one action set per player required");
      availability_ok = false;
      continue;
    }
    for (int i = 0; i < n; ++i) {
      std::set<ActionId> seen;
      for (ActionId a : data.availability[s][i]) {
        if (a == kIdle) {
          add("idle in availability", s, {}, "player " + data.players[i]);
          availability_ok = false;
        } else if (a < 0 || a >= static_cast<ActionId>(data.actions[i].size())) {
          add("bad action reference", s, {}, "player " + data.players[i]);
          availability_ok = false;
        } else if (!seen.insert(a).second) {
          add("duplicate action", s, {}, data.actions[i][a] + " of player " + data.players[i]);
        }
      }
    }
  }
  if (!availability_ok) return report;

  auto enabled = [&](StateId s, const std::vector<ActionId>& joint, std::string* why) {
    if (static_cast<int>(joint.size()) != n) {
      *why = "joint action has " + std::to_string(joint.size()) + " components";
      return false;
    }
    for (int i = 0; i < n; ++i) {
      const auto& avail = data.availability[s][i];
      if (avail.empty()) {
        if (joint[i] != kIdle) {
          *why = "player " + data.players[i] + " has no available action and must idle";
          return false;
        }
      } else if (std::find(avail.begin(), avail.end(), joint[i]) == avail.end()) {
        *why = "component " + std::to_string(i + 1) + " not available to player " + data.players[i];
        return false;
      }
    }
    return true;
  };

  std::vector<std::set<std::vector<ActionId>>> defined(num_states);
  for (const auto& t : data.transitions) {
    if (t.state < 0 || t.state >= num_states) {
      add("bad state reference", -1, t.joint, "transition source #" + std::to_string(t.state));
      continue;
    }
    std::string why;
    if (!enabled(t.state, t.joint, &why)) {
      add("undefined availability", t.state, t.joint, joint_to_string(data, t.joint) + ": " + why);
      continue;
    }
    if (!defined[t.state].insert(t.joint).second) {
      add("duplicate transition", t.state, t.joint, joint_to_string(data, t.joint));
    }
    double sum = 0.0;
    bool ok = true;
    for (const auto& [succ, p] : t.distribution) {
      if (succ < 0 || succ >= num_states) {
        add("bad state reference", t.state, t.joint, "successor #" + std::to_string(succ));
        ok = false;
      }
      if (!std::isfinite(p) || p < 0.0) {
        add("negative probability", t.state, t.joint, joint_to_string(data, t.joint));
        ok = false;
      }
      sum += p;
    }
    if (ok && std::abs(sum - 1.0) > kProbTolerance) {
      add("distribution sum", t.state, t.joint,
          joint_to_string(data, t.joint) + " sums to " + format_double(sum, 15));
    }
  }
  for (StateId s = 0; s < num_states; ++s) {
    std::vector<std::vector<ActionId>> lists;
    for (int i = 0; i < n; ++i) lists.push_back(local_list(data.availability[s][i]));
    for_each_joint(lists, [&](const std::vector<ActionId>& joint, const std::vector<int>&) {
      if (!defined[s].count(joint)) {
        add("missing transition", s, joint, joint_to_string(data, joint));
      }
    });
  }

  std::set<std::string> reward_names;
  for (const auto& r : data.rewards) {
    if (!reward_names.insert(r.name).second) add("duplicate name", -1, {}, "reward " + r.name);
    if (!r.state_rewards.empty() && static_cast<int>(r.state_rewards.size()) != num_states) {
      add("reward table", -1, {}, "reward " + r.name + " state rewards need one entry per state");
    }
    for (double v : r.state_rewards) {
      if (!std::isfinite(v)) add("non-finite reward", -1, {}, "reward " + r.name);
    }
    std::set<std::pair<StateId, std::vector<ActionId>>> seen;
    for (const auto& ar : r.action_rewards) {
      if (ar.state < 0 || ar.state >= num_states) {
        add("bad state reference", -1, ar.joint, "reward " + r.name);
        continue;
      }
      std::string why;
      if (!enabled(ar.state, ar.joint, &why)) {
        add("undefined availability", ar.state, ar.joint, "reward " + r.name + ": " + why);
        continue;
      }
      if (!std::isfinite(ar.value)) add("non-finite reward", ar.state, ar.joint, "reward " + r.name);
      if (!seen.insert({ar.state, ar.joint}).second) {
        add("duplicate reward", ar.state, ar.joint, "reward " + r.name);
      }
    }
  }
  return report;
}

Csg::Csg(CsgData data) : data_(std::move(data)) {
  ValidationReport report = validate_csg(data_);
  if (!report.ok()) throw ModelError("invalid game:\n" + report.to_string());

  const int n = num_players();
  const int num_s = num_states();
  if (data_.labels.empty()) data_.labels.assign(num_s, {});

  local_.resize(num_s);
  choice_offset_.assign(num_s + 1, 0);
  succ_offset_.push_back(0);

  std::vector<std::map<std::vector<ActionId>, const CsgData::Transition*>> by_joint(num_s);
  for (const auto& t : data_.transitions) by_joint[t.state][t.joint] = &t;

  for (StateId s = 0; s < num_s; ++s) {
    local_[s].resize(n);
    for (int i = 0; i < n; ++i) local_[s][i] = local_list(data_.availability[s][i]);
    int count = 0;
    for_each_joint(local_[s], [&](const std::vector<ActionId>& joint, const std::vector<int>& idx) {
      const auto* t = by_joint[s].at(joint);
      choice_joint_.insert(choice_joint_.end(), joint.begin(), joint.end());
      choice_local_.insert(choice_local_.end(), idx.begin(), idx.end());
      // Merge repeated successors, drop zero-probability entries.
      std::vector<std::pair<StateId, double>> merged;
      for (const auto& [succ, p] : t->distribution) {
        if (p <= 0.0) continue;
        auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& e) { return e.first == succ; });
        if (it == merged.end()) {
          merged.emplace_back(succ, p);
        } else {
          it->second += p;
        }
      }
      for (const auto& [succ, p] : merged) succ_.push_back({succ, p});
      succ_offset_.push_back(static_cast<int>(succ_.size()));
      ++count;
    });
    choice_offset_[s + 1] = choice_offset_[s] + count;
  }

  std::map<std::string, int> label_index;
  for (StateId s = 0; s < num_s; ++s) {
    for (const auto& l : data_.labels[s]) {
      if (!label_index.count(l)) {
        label_index[l] = static_cast<int>(label_names_.size());
        label_names_.push_back(l);
        label_sets_.emplace_back(num_s, 0);
      }
      label_sets_[label_index[l]][s] = 1;
    }
  }

  for (const auto& r : data_.rewards) {
    std::vector<double> sr = r.state_rewards;
    if (sr.empty()) sr.assign(num_s, 0.0);
    state_rewards_.push_back(std::move(sr));
    std::vector<double> ar(num_total_choices(), 0.0);
    for (const auto& a : r.action_rewards) {
      const int c = find_choice(a.state, a.joint);
      ar[global_choice(a.state, c)] = a.value;
    }
    action_rewards_.push_back(std::move(ar));
  }
}

std::optional<PlayerId> Csg::find_player(const std::string& name) const {
  for (int i = 0; i < num_players(); ++i) {
    if (data_.players[i] == name) return i;
  }
  return std::nullopt;
}

const std::string& Csg::action_name(PlayerId player, ActionId action) const {
  static const std::string kIdleName = "~";
  if (action == kIdle) return kIdleName;
  return data_.actions[player][action];
}

std::optional<StateId> Csg::find_state(const std::string& name) const {
  for (StateId s = 0; s < num_states(); ++s) {
    if (data_.states[s] == name) return s;
  }
  return std::nullopt;
}

std::span<const ActionId> Csg::local_actions(StateId state, PlayerId player) const {
  return local_[state][player];
}

std::span<const ActionId> Csg::choice_joint(StateId state, int choice) const {
  const std::size_t n = static_cast<std::size_t>(num_players());
  return {choice_joint_.data() + static_cast<std::size_t>(global_choice(state, choice)) * n, n};
}

int Csg::choice_local(StateId state, int choice, PlayerId player) const {
  return choice_local_[static_cast<std::size_t>(global_choice(state, choice)) * num_players() + player];
}

std::span<const Successor> Csg::successors(StateId state, int choice) const {
  const int g = global_choice(state, choice);
  return {succ_.data() + succ_offset_[g], static_cast<std::size_t>(succ_offset_[g + 1] - succ_offset_[g])};
}

int Csg::choice_from_local(StateId state, std::span<const int> local) const {
  int index = 0;
  for (int i = 0; i < num_players(); ++i) {
    index = index * static_cast<int>(local_[state][i].size()) + local[i];
  }
  return index;
}

int Csg::find_choice(StateId state, std::span<const ActionId> joint) const {
  if (static_cast<int>(joint.size()) != num_players()) return -1;
  std::vector<int> local(num_players());
  for (int i = 0; i < num_players(); ++i) {
    const auto& list = local_[state][i];
    auto it = std::find(list.begin(), list.end(), joint[i]);
    if (it == list.end()) return -1;
    local[i] = static_cast<int>(it - list.begin());
  }
  return choice_from_local(state, local);
}

std::optional<int> Csg::find_label(const std::string& name) const {
  for (int l = 0; l < num_labels(); ++l) {
    if (label_names_[l] == name) return l;
  }
  return std::nullopt;
}

std::optional<int> Csg::find_reward(const std::string& name) const {
  for (int r = 0; r < num_rewards(); ++r) {
    if (data_.rewards[r].name == name) return r;
  }
  return std::nullopt;
}

CsgData Csg::to_data() const {
  CsgData out;
  out.players = data_.players;
  out.actions = data_.actions;
  out.states = data_.states;
  out.labels = data_.labels;
  out.initial = data_.initial;
  out.availability = data_.availability;
  for (StateId s = 0; s < num_states(); ++s) {
    for (int c = 0; c < num_choices(s); ++c) {
      CsgData::Transition t;
      t.state = s;
      auto joint = choice_joint(s, c);
      t.joint.assign(joint.begin(), joint.end());
      for (const auto& succ : successors(s, c)) t.distribution.emplace_back(succ.state, succ.prob);
      out.transitions.push_back(std::move(t));
    }
  }
  for (int r = 0; r < num_rewards(); ++r) {
    CsgData::Reward reward;
    reward.name = reward_name(r);
    reward.state_rewards = state_rewards_[r];
    for (StateId s = 0; s < num_states(); ++s) {
      for (int c = 0; c < num_choices(s); ++c) {
        const double v = action_reward(r, s, c);
        if (v != 0.0) {
          auto joint = choice_joint(s, c);
          reward.action_rewards.push_back({s, std::vector<ActionId>(joint.begin(), joint.end()), v});
        }
      }
    }
    out.rewards.push_back(std::move(reward));
  }
  return out;
}

}  // namespace nashcsg
