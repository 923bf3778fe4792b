#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "nashcsg/formula/ast.hpp"
#include "nashcsg/formula/sat.hpp"
#include "nashcsg/model/csg.hpp"

namespace nashcsg {

// An objective with its state formulae already evaluated on the game.
struct CompiledObjective {
  Objective::Kind kind = Objective::Kind::kUntil;
  int bound = 0;
  StateSet left;   // phi_1 of an until
  StateSet right;  // phi_2 of an until, the X operand, or the reachability target
  int reward = -1;
};

CompiledObjective bounded_until(StateSet left, StateSet right, int bound);
CompiledObjective next_step(StateSet target);
CompiledObjective until(StateSet left, StateSet right);
CompiledObjective instantaneous(int reward, int bound);
CompiledObjective cumulative(int reward, int bound);
CompiledObjective reach_reward(int reward, StateSet target);

// Coalition-index bitsets: d holds objectives already satisfied, e those
// already failed (until objectives only).
struct Mode {
  std::uint32_t d = 0;
  std::uint32_t e = 0;
  bool operator==(const Mode&) const = default;
};

std::vector<int> mode_members(std::uint32_t bits);

// Objective bookkeeping shared by solving, evaluation and best responses.
//
// Finite objectives are indexed by the number of steps taken so far; a node
// at step t with all objectives settled has a fixed value vector. Infinite
// objectives always use step 0.
class ProductSpace {
 public:
  // Throws Error on mixed horizons, FormulaError on an unknown reward index
  // or missing state sets.
  ProductSpace(const Csg& game, std::vector<CompiledObjective> objectives);

  const Csg& game() const { return *game_; }
  int num_objectives() const { return static_cast<int>(objectives_.size()); }
  const CompiledObjective& objective(int l) const { return objectives_[l]; }
  bool finite() const { return finite_; }
  // Last step at which any finite objective can still change; 0 if infinite.
  int horizon() const { return horizon_; }

  // Mode after arriving at state at the given step.
  Mode promote(int step, StateId state, Mode mode) const;
  bool settled(int step, Mode mode, int l) const;
  bool all_settled(int step, Mode mode) const;
  // Value of a settled objective.
  double settled_value(int step, StateId state, Mode mode, int l) const;
  // Reward collected by an unsettled objective when choice is taken at state.
  double immediate(StateId state, int choice, int l) const;
  // Initial value iteration estimate of an unsettled infinite objective.
  double base_value(Mode mode, int l) const;

 private:
  const Csg* game_;
  std::vector<CompiledObjective> objectives_;
  bool finite_ = true;
  int horizon_ = 0;
};

// The nodes (step, state, mode) reachable from every state at step 0 under
// any behaviour, with the successor structure of every unsettled node. Finite
// spaces list nodes in nondecreasing step order.
class ProductGraph {
 public:
  struct Node {
    int step;
    StateId state;
    Mode mode;
    bool settled;
  };
  struct Edge {
    int node;
    double prob;
  };

  explicit ProductGraph(const ProductSpace& space);

  const ProductSpace& space() const { return *space_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int n) const { return nodes_[n]; }
  // Node reached at step 0 from state with nothing satisfied yet.
  int root(StateId state) const { return roots_[state]; }
  // -1 if absent.
  int find(int step, StateId state, Mode mode) const;

  // Unsettled nodes have one entry per choice of their state, settled nodes none.
  int num_choices(int n) const { return choice_offset_[n + 1] - choice_offset_[n]; }
  std::span<const Edge> successors(int n, int choice) const {
    const int g = choice_offset_[n] + choice;
    return {edges_.data() + edge_offset_[g], static_cast<std::size_t>(edge_offset_[g + 1] - edge_offset_[g])};
  }

  // Finite spaces: nodes at step t are [level_begin(t), level_begin(t + 1)).
  int num_levels() const { return static_cast<int>(level_offset_.size()) - 1; }
  int level_begin(int step) const { return level_offset_[step]; }

 private:
  struct Key {
    int step;
    StateId state;
    Mode mode;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  int intern(int step, StateId state, Mode mode);

  const ProductSpace* space_;
  std::vector<Node> nodes_;
  std::vector<int> roots_;
  std::unordered_map<Key, int, KeyHash> index_;
  std::vector<int> choice_offset_;
  std::vector<int> edge_offset_;
  std::vector<Edge> edges_;
  std::vector<int> level_offset_;
};

}  // namespace nashcsg
