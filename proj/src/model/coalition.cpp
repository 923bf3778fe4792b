#include "nashcsg/model/coalition.hpp"

#include <algorithm>
#include <set>

namespace nashcsg {

void validate_partition(const CoalitionPartition& partition, int num_players) {
  if (partition.empty()) throw ModelError("invalid partition: no coalitions");
  std::set<PlayerId> seen;
  for (const auto& coalition : partition) {
    if (coalition.empty()) throw ModelError("invalid partition: empty coalition");
    for (PlayerId p : coalition) {
      if (p < 0 || p >= num_players) {
        throw ModelError("invalid partition: player #" + std::to_string(p + 1) + " does not exist");
      }
      if (!seen.insert(p).second) {
        throw ModelError("invalid partition: player #" + std::to_string(p + 1) + " in two coalitions");
      }
    }
  }
  if (static_cast<int>(seen.size()) != num_players) {
    throw ModelError("invalid partition: coalitions do not cover every player");
  }
}

CoalitionPartition isolation_partition(int num_players) {
  CoalitionPartition out;
  for (PlayerId p = 0; p < num_players; ++p) out.push_back({p});
  return out;
}

namespace {

CoalitionPartition sorted_partition(CoalitionPartition partition, int num_players) {
  validate_partition(partition, num_players);
  for (auto& c : partition) std::sort(c.begin(), c.end());
  return partition;
}

// Radix of member j's digit: |A_j| + 1 (idle is digit 0).
std::vector<int> radices(const Csg& model, const std::vector<PlayerId>& members) {
  std::vector<int> out;
  for (PlayerId j : members) out.push_back(model.num_actions(j) + 1);
  return out;
}

ActionId encode(const Csg& model, const std::vector<PlayerId>& members, const std::vector<ActionId>& tuple) {
  if (members.size() == 1) return tuple[0];
  const auto rad = radices(model, members);
  long long value = 0;
  for (std::size_t k = 0; k < members.size(); ++k) value = value * rad[k] + (tuple[k] + 1);
  return static_cast<ActionId>(value - 1);
}

std::vector<ActionId> decode(const Csg& model, const std::vector<PlayerId>& members, ActionId action) {
  if (action == kIdle) return std::vector<ActionId>(members.size(), kIdle);
  if (members.size() == 1) return {action};
  const auto rad = radices(model, members);
  long long value = static_cast<long long>(action) + 1;
  std::vector<ActionId> tuple(members.size());
  for (int k = static_cast<int>(members.size()) - 1; k >= 0; --k) {
    tuple[k] = static_cast<ActionId>(value % rad[k]) - 1;
    value /= rad[k];
  }
  return tuple;
}

CsgData build_data(const Csg& model, const CoalitionPartition& partition) {
  const int m = static_cast<int>(partition.size());
  CsgData data;
  for (const auto& members : partition) {
    std::string name;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k > 0) name += ",";
      name += model.player_name(members[k]);
    }
    data.players.push_back(name);

    std::vector<std::string> names;
    if (members.size() == 1) {
      for (ActionId a = 0; a < model.num_actions(members[0]); ++a) names.push_back(model.action_name(members[0], a));
    } else {
      long long count = 1;
      for (int r : radices(model, members)) count *= r;
      if (count - 1 > 1000000) throw ModelError("coalition " + name + " has too many joint actions");
      for (ActionId a = 0; a < count - 1; ++a) {
        const auto tuple = decode(model, members, a);
        std::string label = "(";
        for (std::size_t k = 0; k < tuple.size(); ++k) {
          if (k > 0) label += ",";
          label += model.action_name(members[k], tuple[k]);
        }
        names.push_back(label + ")");
      }
    }
    data.actions.push_back(std::move(names));
  }
  data.states.reserve(model.num_states());
  for (StateId s = 0; s < model.num_states(); ++s) {
    data.states.push_back(model.state_name(s));
    data.labels.push_back(model.state_labels(s));
  }
  data.initial = model.initial_states();

  data.availability.resize(model.num_states());
  for (StateId s = 0; s < model.num_states(); ++s) {
    data.availability[s].resize(m);
    for (int i = 0; i < m; ++i) {
      const auto& members = partition[i];
      // Product of member local lists; all-idle means the coalition idles.
      std::vector<std::vector<ActionId>> lists;
      bool all_idle = true;
      for (PlayerId j : members) {
        auto local = model.local_actions(s, j);
        lists.emplace_back(local.begin(), local.end());
        all_idle = all_idle && local[0] == kIdle;
      }
      if (all_idle) continue;
      std::vector<std::size_t> idx(members.size(), 0);
      std::vector<ActionId> tuple(members.size());
      while (true) {
        for (std::size_t k = 0; k < members.size(); ++k) tuple[k] = lists[k][idx[k]];
        data.availability[s][i].push_back(encode(model, members, tuple));
        int k = static_cast<int>(members.size()) - 1;
        while (k >= 0 && ++idx[k] == lists[k].size()) idx[k--] = 0;
        if (k < 0) break;
      }
    }
  }
  return data;
}

CsgData build_lifted(const Csg& model, const CoalitionPartition& partition) {
  CsgData data = build_data(model, partition);
  const int m = static_cast<int>(partition.size());
  for (int r = 0; r < model.num_rewards(); ++r) {
    CsgData::Reward reward;
    reward.name = model.reward_name(r);
    for (StateId s = 0; s < model.num_states(); ++s) reward.state_rewards.push_back(model.state_reward(r, s));
    data.rewards.push_back(std::move(reward));
  }
  for (StateId s = 0; s < model.num_states(); ++s) {
    std::vector<std::vector<ActionId>> lists(m);
    for (int i = 0; i < m; ++i) {
      lists[i] = data.availability[s][i];
      if (lists[i].empty()) lists[i] = {kIdle};
    }
    std::vector<std::size_t> idx(m, 0);
    std::vector<ActionId> joint(m);
    while (true) {
      for (int i = 0; i < m; ++i) joint[i] = lists[i][idx[i]];
      std::vector<ActionId> original(model.num_players(), kIdle);
      for (int i = 0; i < m; ++i) {
        const auto tuple = decode(model, partition[i], joint[i]);
        for (std::size_t k = 0; k < tuple.size(); ++k) original[partition[i][k]] = tuple[k];
      }
      const int c = model.find_choice(s, original);
      if (c < 0) throw ModelError("coalition lifting produced a disabled joint action");
      CsgData::Transition t;
      t.state = s;
      t.joint = joint;
      for (const auto& succ : model.successors(s, c)) t.distribution.emplace_back(succ.state, succ.prob);
      data.transitions.push_back(std::move(t));
      for (int r = 0; r < model.num_rewards(); ++r) {
        const double v = model.action_reward(r, s, c);
        if (v != 0.0) data.rewards[r].action_rewards.push_back({s, joint, v});
      }
      int i = m - 1;
      while (i >= 0 && ++idx[i] == lists[i].size()) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  return data;
}

}  // namespace

CoalitionGame::CoalitionGame(const Csg& model, CoalitionPartition partition)
    : model_(&model),
      partition_(sorted_partition(std::move(partition), model.num_players())),
      game_(build_lifted(model, partition_)) {}

std::vector<ActionId> CoalitionGame::member_actions(int coalition, ActionId action) const {
  return decode(*model_, partition_[coalition], action);
}

std::vector<ActionId> CoalitionGame::lift(std::span<const ActionId> coalition_joint) const {
  std::vector<ActionId> original(model_->num_players(), kIdle);
  for (int i = 0; i < num_coalitions(); ++i) {
    const auto tuple = decode(*model_, partition_[i], coalition_joint[i]);
    for (std::size_t k = 0; k < tuple.size(); ++k) original[partition_[i][k]] = tuple[k];
  }
  return original;
}

}  // namespace nashcsg
