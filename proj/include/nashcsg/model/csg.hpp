#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nashcsg/common.hpp"

namespace nashcsg {

// Unvalidated CSG content, in the shape it arrives from a file or a test.
// Ids index the name vectors; kIdle marks an idle component of a joint action.
struct CsgData {
  struct Transition {
    StateId state = 0;
    std::vector<ActionId> joint;
    std::vector<std::pair<StateId, double>> distribution;
  };
  struct ActionReward {
    StateId state = 0;
    std::vector<ActionId> joint;
    double value = 0.0;
  };
  struct Reward {
    std::string name;
    std::vector<double> state_rewards;  // empty or one entry per state
    std::vector<ActionReward> action_rewards;
  };

  std::vector<std::string> players;
  std::vector<std::vector<std::string>> actions;  // per player
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> labels;  // per state; may be empty
  std::vector<StateId> initial;
  std::vector<std::vector<std::vector<ActionId>>> availability;  // [state][player]
  std::vector<Transition> transitions;
  std::vector<Reward> rewards;
};

struct Violation {
  std::string kind;
  StateId state = -1;
  std::vector<ActionId> joint;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& kind) const;
  std::string to_string() const;
};

ValidationReport validate_csg(const CsgData& data);

struct Successor {
  StateId state;
  double prob;
};

// A validated concurrent stochastic game. Immutable after construction.
//
// At state s player i chooses from local_actions(s, i): the available actions
// in file order, or the single entry kIdle when none are available. Choices
// (enabled joint actions) are enumerated lexicographically over the local
// lists with player 0 most significant, which is also the joint-index order
// of the stage game built at s.
class Csg {
 public:
  explicit Csg(CsgData data);

  int num_players() const { return static_cast<int>(data_.players.size()); }
  int num_states() const { return static_cast<int>(data_.states.size()); }

  const std::string& player_name(PlayerId player) const { return data_.players[player]; }
  std::optional<PlayerId> find_player(const std::string& name) const;
  int num_actions(PlayerId player) const { return static_cast<int>(data_.actions[player].size()); }
  // Returns "~" for kIdle.
  const std::string& action_name(PlayerId player, ActionId action) const;

  const std::string& state_name(StateId state) const { return data_.states[state]; }
  std::optional<StateId> find_state(const std::string& name) const;
  const std::vector<StateId>& initial_states() const { return data_.initial; }

  std::span<const ActionId> available(StateId state, PlayerId player) const {
    return data_.availability[state][player];
  }
  std::span<const ActionId> local_actions(StateId state, PlayerId player) const;
  int num_local_actions(StateId state, PlayerId player) const {
    return static_cast<int>(local_actions(state, player).size());
  }

  int num_choices(StateId state) const { return choice_offset_[state + 1] - choice_offset_[state]; }
  std::span<const ActionId> choice_joint(StateId state, int choice) const;
  int choice_local(StateId state, int choice, PlayerId player) const;
  std::span<const Successor> successors(StateId state, int choice) const;
  int choice_from_local(StateId state, std::span<const int> local) const;
  // -1 when the joint action is not enabled at state.
  int find_choice(StateId state, std::span<const ActionId> joint) const;

  int num_labels() const { return static_cast<int>(label_names_.size()); }
  const std::string& label_name(int label) const { return label_names_[label]; }
  std::optional<int> find_label(const std::string& name) const;
  bool has_label(StateId state, int label) const { return label_sets_[label][state] != 0; }
  const std::vector<std::string>& state_labels(StateId state) const { return data_.labels[state]; }

  int num_rewards() const { return static_cast<int>(data_.rewards.size()); }
  const std::string& reward_name(int reward) const { return data_.rewards[reward].name; }
  std::optional<int> find_reward(const std::string& name) const;
  double state_reward(int reward, StateId state) const { return state_rewards_[reward][state]; }
  double action_reward(int reward, StateId state, int choice) const {
    return action_rewards_[reward][choice_offset_[state] + choice];
  }

  std::size_t num_transitions() const { return succ_.size(); }
  std::size_t num_total_choices() const { return static_cast<std::size_t>(choice_offset_.back()); }

  // Reconstructs normalized raw content (availability, every choice, rewards).
  CsgData to_data() const;

 private:
  int global_choice(StateId state, int choice) const { return choice_offset_[state] + choice; }

  CsgData data_;
  std::vector<std::vector<std::vector<ActionId>>> local_;  // [state][player]
  std::vector<int> choice_offset_;                          // per state, size S+1
  std::vector<ActionId> choice_joint_;                      // flat, num_players per choice
  std::vector<int> choice_local_;                           // flat, num_players per choice
  std::vector<int> succ_offset_;                            // per global choice, size C+1
  std::vector<Successor> succ_;
  std::vector<std::string> label_names_;
  std::vector<std::vector<char>> label_sets_;
  std::vector<std::vector<double>> state_rewards_;
  std::vector<std::vector<double>> action_rewards_;
};

}  // namespace nashcsg
