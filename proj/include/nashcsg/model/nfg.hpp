#pragma once

#include <span>
#include <string>
#include <vector>

#include "nashcsg/common.hpp"

namespace nashcsg {

// An n-player normal form game with dense utility tables.
//
// Joint actions are indexed in mixed radix with player 0 as the most
// significant digit, i.e. lexicographic order over (a_0, ..., a_{n-1}).
class NormalFormGame {
 public:
  NormalFormGame() = default;
  // All utilities start at zero.
  explicit NormalFormGame(std::vector<int> action_counts);

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int num_actions(PlayerId player) const { return action_counts_[player]; }
  const std::vector<int>& action_counts() const { return action_counts_; }
  std::size_t num_joint_actions() const { return num_joint_; }

  std::size_t joint_index(std::span<const int> actions) const;
  std::vector<int> joint_actions(std::size_t index) const;
  // Index of the joint action obtained by replacing player's component.
  std::size_t deviate(std::size_t index, PlayerId player, int action) const;
  int action_of(std::size_t index, PlayerId player) const {
    return static_cast<int>(index / strides_[player]) % action_counts_[player];
  }

  double utility(std::size_t joint, PlayerId player) const {
    return utilities_[joint * action_counts_.size() + player];
  }
  void set_utility(std::size_t joint, PlayerId player, double value) {
    utilities_[joint * action_counts_.size() + player] = value;
  }
  std::span<const double> utilities(std::size_t joint) const {
    return {utilities_.data() + joint * action_counts_.size(), action_counts_.size()};
  }

  // Optional labels; empty means actions are referred to by index.
  const std::string& action_name(PlayerId player, int action) const;
  void set_action_names(std::vector<std::vector<std::string>> names);
  bool has_action_names() const { return !action_names_.empty(); }

  NormalFormGame negated() const;
  double min_utility() const;
  double max_utility() const;

 private:
  std::vector<int> action_counts_;
  std::vector<std::size_t> strides_;
  std::size_t num_joint_ = 0;
  std::vector<double> utilities_;
  std::vector<std::vector<std::string>> action_names_;
};

// One distribution per player over that player's actions.
using MixedProfile = std::vector<std::vector<double>>;

MixedProfile pure_profile(const NormalFormGame& game, std::span<const int> actions);
MixedProfile uniform_profile(const NormalFormGame& game);

// Checks that every component is a distribution within kProbTolerance.
bool is_valid_profile(const NormalFormGame& game, const MixedProfile& profile);

}  // namespace nashcsg
