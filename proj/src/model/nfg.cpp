#include "nashcsg/model/nfg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nashcsg {

std::string format_double(double value, int significant_digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, value);
  std::string out(buffer);
  if (out == "-0") out = "0";
  return out;
}

NormalFormGame::NormalFormGame(std::vector<int> action_counts)
    : action_counts_(std::move(action_counts)) {
  if (action_counts_.empty()) throw Error("normal form game needs at least one player");
  strides_.assign(action_counts_.size(), 1);
  num_joint_ = 1;
  for (int i = static_cast<int>(action_counts_.size()) - 1; i >= 0; --i) {
    if (action_counts_[i] < 1) throw Error("every player needs at least one action");
    strides_[i] = num_joint_;
    num_joint_ *= static_cast<std::size_t>(action_counts_[i]);
  }
  utilities_.assign(num_joint_ * action_counts_.size(), 0.0);
}

std::size_t NormalFormGame::joint_index(std::span<const int> actions) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < action_counts_.size(); ++i) index += strides_[i] * actions[i];
  return index;
}

std::vector<int> NormalFormGame::joint_actions(std::size_t index) const {
  std::vector<int> out(action_counts_.size());
  for (std::size_t i = 0; i < action_counts_.size(); ++i) out[i] = action_of(index, static_cast<int>(i));
  return out;
}

std::size_t NormalFormGame::deviate(std::size_t index, PlayerId player, int action) const {
  const int current = action_of(index, player);
  return index + strides_[player] * action - strides_[player] * current;
}

const std::string& NormalFormGame::action_name(PlayerId player, int action) const {
  static const std::string kEmpty;
  if (action_names_.empty()) return kEmpty;
  return action_names_[player][action];
}

void NormalFormGame::set_action_names(std::vector<std::vector<std::string>> names) {
  if (names.size() != action_counts_.size()) throw Error("action name table has wrong player count");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (static_cast<int>(names[i].size()) != action_counts_[i]) {
      throw Error("action name table has wrong action count for player " + std::to_string(i + 1));
    }
  }
  action_names_ = std::move(names);
}

NormalFormGame NormalFormGame::negated() const {
  NormalFormGame out = *this;
  for (double& u : out.utilities_) u = -u;
  return out;
}

double NormalFormGame::min_utility() const {
  return *std::min_element(utilities_.begin(), utilities_.end());
}

double NormalFormGame::max_utility() const {
  return *std::max_element(utilities_.begin(), utilities_.end());
}

MixedProfile pure_profile(const NormalFormGame& game, std::span<const int> actions) {
  MixedProfile profile(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    profile[i].assign(game.num_actions(i), 0.0);
    profile[i][actions[i]] = 1.0;
  }
  return profile;
}

MixedProfile uniform_profile(const NormalFormGame& game) {
  MixedProfile profile(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    profile[i].assign(game.num_actions(i), 1.0 / game.num_actions(i));
  }
  return profile;
}

bool is_valid_profile(const NormalFormGame& game, const MixedProfile& profile) {
  if (static_cast<int>(profile.size()) != game.num_players()) return false;
  for (int i = 0; i < game.num_players(); ++i) {
    if (static_cast<int>(profile[i].size()) != game.num_actions(i)) return false;
    double sum = 0.0;
    bool any_positive = false;
    for (double p : profile[i]) {
      if (!(p >= 0.0)) return false;
      any_positive = any_positive || p > 0.0;
      sum += p;
    }
    if (!any_positive || std::abs(sum - 1.0) > kProbTolerance) return false;
  }
  return true;
}

}  // namespace nashcsg
