#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nashcsg/model/csg.hpp"

namespace nashcsg {

// A finite decision process with one controller: every state offers a list of
// choices, each a distribution over states. Stored in CSR form and built
// incrementally (begin_state / begin_choice / add_successor).
class DecisionProcess {
 public:
  DecisionProcess() { choice_offset_.push_back(0); succ_offset_.push_back(0); }

  void begin_state();
  void begin_choice();
  void add_successor(int state, double prob);

  int num_states() const { return static_cast<int>(choice_offset_.size()) - 1; }
  int num_choices(int state) const { return choice_offset_[state + 1] - choice_offset_[state]; }
  int first_choice(int state) const { return choice_offset_[state]; }
  std::size_t num_total_choices() const { return succ_offset_.size() - 1; }
  // Successors of a global choice index (first_choice(s) + local index).
  std::span<const Successor> successors(int global_choice) const {
    return {succ_.data() + succ_offset_[global_choice],
            static_cast<std::size_t>(succ_offset_[global_choice + 1] - succ_offset_[global_choice])};
  }

 private:
  std::vector<int> choice_offset_;
  std::vector<int> succ_offset_;
  std::vector<Successor> succ_;
};

// Every enabled joint action of the game becomes one choice, in choice order.
DecisionProcess pooled_view(const Csg& game);

// Distribution of a player over local_actions(state, player).
using LocalStrategy = std::function<std::span<const double>(StateId state, PlayerId player)>;

struct ResidualProcess {
  DecisionProcess process;
  // For each process choice, the game choices it mixes and their weights.
  std::vector<std::vector<std::pair<int, double>>> mixture;
};

// Fixes every player except controller to the given strategy. At state s the
// choices are controller's local actions; each is the weighted mixture over
// the other players' actions.
ResidualProcess residual_process(const Csg& game, PlayerId controller, const LocalStrategy& others);

// States from which the target is reached with probability 1 under every
// resolution of the choices (minimum reachability probability equals 1).
std::vector<char> reach_target_surely(const DecisionProcess& process, const std::vector<char>& target);

}  // namespace nashcsg
