#pragma once

#include <span>
#include <string>
#include <vector>

#include "nashcsg/model/csg.hpp"

namespace nashcsg {

// Ordered list of disjoint player sets covering every player.
using CoalitionPartition = std::vector<std::vector<PlayerId>>;

// Throws ModelError("invalid partition: ...") unless the partition is
// non-empty, pairwise disjoint, covers [0, num_players) and has no empty set.
void validate_partition(const CoalitionPartition& partition, int num_players);

// The singleton partition {{0}, ..., {n-1}}.
CoalitionPartition isolation_partition(int num_players);

// An m-player game in which coalition i chooses tuples of member actions.
//
// Coalition i's action set is the product over its members (sorted by player
// index) of A_j plus idle, without the all-idle tuple, in lexicographic order
// with idle ordered before every real action. Singleton coalitions therefore
// keep their original action ids and names. The source model must outlive
// this object.
class CoalitionGame {
 public:
  CoalitionGame(const Csg& model, CoalitionPartition partition);

  const Csg& game() const { return game_; }
  const Csg& model() const { return *model_; }
  const CoalitionPartition& partition() const { return partition_; }
  int num_coalitions() const { return static_cast<int>(partition_.size()); }

  // Member actions (kIdle allowed) of a coalition action; kIdle maps to all-idle.
  std::vector<ActionId> member_actions(int coalition, ActionId action) const;
  // Original joint action for a coalition joint action.
  std::vector<ActionId> lift(std::span<const ActionId> coalition_joint) const;

 private:
  const Csg* model_;
  CoalitionPartition partition_;
  Csg game_;
};

}  // namespace nashcsg
