#include "nashcsg/engine/product.hpp"

#include <algorithm>
#include <deque>

namespace nashcsg {

CompiledObjective bounded_until(StateSet left, StateSet right, int bound) {
  return {Objective::Kind::kBoundedUntil, bound, std::move(left), std::move(right), -1};
}

CompiledObjective next_step(StateSet target) { return {Objective::Kind::kNext, 1, {}, std::move(target), -1}; }

CompiledObjective until(StateSet left, StateSet right) {
  return {Objective::Kind::kUntil, 0, std::move(left), std::move(right), -1};
}

CompiledObjective instantaneous(int reward, int bound) { return {Objective::Kind::kInstantaneous, bound, {}, {}, reward}; }

CompiledObjective cumulative(int reward, int bound) { return {Objective::Kind::kCumulative, bound, {}, {}, reward}; }

CompiledObjective reach_reward(int reward, StateSet target) {
  return {Objective::Kind::kReach, 0, {}, std::move(target), reward};
}

std::vector<int> mode_members(std::uint32_t bits) {
  std::vector<int> out;
  for (int l = 0; bits != 0; ++l, bits >>= 1) {
    if (bits & 1u) out.push_back(l);
  }
  return out;
}

namespace {

bool is_finite_kind(Objective::Kind kind) {
  return kind == Objective::Kind::kNext || kind == Objective::Kind::kBoundedUntil ||
         kind == Objective::Kind::kInstantaneous || kind == Objective::Kind::kCumulative;
}

bool has(std::uint32_t bits, int l) { return (bits >> l) & 1u; }

}  // namespace

ProductSpace::ProductSpace(const Csg& game, std::vector<CompiledObjective> objectives)
    : game_(&game), objectives_(std::move(objectives)) {
  if (objectives_.empty()) throw Error("no objectives");
  if (objectives_.size() > 31) throw Error("at most 31 objectives are supported");
  const bool first = is_finite_kind(objectives_.front().kind);
  for (const auto& o : objectives_) {
    if (is_finite_kind(o.kind) != first) {
      throw Error("unsupported-mixed-horizon: finite and infinite objectives cannot be combined");
    }
    if (o.bound < 0) throw FormulaError("negative step bound");
    const auto n = static_cast<std::size_t>(game.num_states());
    const bool needs_left = o.kind == Objective::Kind::kBoundedUntil || o.kind == Objective::Kind::kUntil;
    const bool needs_right = !(o.kind == Objective::Kind::kInstantaneous || o.kind == Objective::Kind::kCumulative);
    const bool needs_reward = o.kind >= Objective::Kind::kInstantaneous;
    if ((needs_left && o.left.size() != n) || (needs_right && o.right.size() != n)) {
      throw FormulaError("objective state set does not match the game");
    }
    if (needs_reward && (o.reward < 0 || o.reward >= game.num_rewards())) throw FormulaError("unknown reward structure");
  }
  finite_ = first;
  if (finite_) {
    for (const auto& o : objectives_) horizon_ = std::max(horizon_, o.kind == Objective::Kind::kNext ? 1 : o.bound);
  }
}

Mode ProductSpace::promote(int step, StateId state, Mode mode) const {
  for (int l = 0; l < num_objectives(); ++l) {
    if (has(mode.d | mode.e, l)) continue;
    const auto& o = objectives_[l];
    const std::uint32_t bit = 1u << l;
    switch (o.kind) {
      case Objective::Kind::kNext:
        if (step == 1) (o.right[state] ? mode.d : mode.e) |= bit;
        break;
      case Objective::Kind::kBoundedUntil:
        // Past the bound the objective has already failed; no late promotion.
        if (step > o.bound) break;
        [[fallthrough]];
      case Objective::Kind::kUntil:
        if (o.right[state]) {
          mode.d |= bit;
        } else if (!o.left[state]) {
          mode.e |= bit;
        }
        break;
      case Objective::Kind::kReach:
        if (o.right[state]) mode.d |= bit;
        break;
      default: break;
    }
  }
  return mode;
}

bool ProductSpace::settled(int step, Mode mode, int l) const {
  if (has(mode.d | mode.e, l)) return true;
  const auto& o = objectives_[l];
  switch (o.kind) {
    case Objective::Kind::kNext: return step >= 1;
    case Objective::Kind::kBoundedUntil:
    case Objective::Kind::kInstantaneous:
    case Objective::Kind::kCumulative: return step >= o.bound;
    default: return false;
  }
}

bool ProductSpace::all_settled(int step, Mode mode) const {
  for (int l = 0; l < num_objectives(); ++l) {
    if (!settled(step, mode, l)) return false;
  }
  return true;
}

double ProductSpace::settled_value(int step, StateId state, Mode mode, int l) const {
  const auto& o = objectives_[l];
  switch (o.kind) {
    case Objective::Kind::kInstantaneous: return step == o.bound ? game_->state_reward(o.reward, state) : 0.0;
    case Objective::Kind::kCumulative:
    case Objective::Kind::kReach: return 0.0;
    default: return has(mode.d, l) ? 1.0 : 0.0;
  }
}

double ProductSpace::immediate(StateId state, int choice, int l) const {
  const auto& o = objectives_[l];
  if (o.kind == Objective::Kind::kCumulative || o.kind == Objective::Kind::kReach) {
    return game_->state_reward(o.reward, state) + game_->action_reward(o.reward, state, choice);
  }
  return 0.0;
}

double ProductSpace::base_value(Mode mode, int l) const {
  return objectives_[l].kind == Objective::Kind::kUntil && has(mode.d, l) ? 1.0 : 0.0;
}

std::size_t ProductGraph::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = static_cast<std::uint64_t>(k.state) * 0x9E3779B97F4A7C15ull;
  h ^= (static_cast<std::uint64_t>(k.step) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2));
  h ^= ((static_cast<std::uint64_t>(k.mode.d) << 32 | k.mode.e) + 0x8CB92BA72F3D8DD7ull + (h << 6) + (h >> 2));
  return static_cast<std::size_t>(h);
}

int ProductGraph::intern(int step, StateId state, Mode mode) {
  const Key key{step, state, mode};
  const auto [it, inserted] = index_.try_emplace(key, static_cast<int>(nodes_.size()));
  if (inserted) nodes_.push_back({step, state, mode, space_->all_settled(step, mode)});
  return it->second;
}

int ProductGraph::find(int step, StateId state, Mode mode) const {
  const auto it = index_.find(Key{step, state, mode});
  return it == index_.end() ? -1 : it->second;
}

ProductGraph::ProductGraph(const ProductSpace& space) : space_(&space) {
  const Csg& game = space.game();
  const bool finite = space.finite();
  for (StateId s = 0; s < game.num_states(); ++s) roots_.push_back(intern(0, s, space.promote(0, s, Mode{})));

  // Nodes are expanded in creation order, so successors are appended after
  // their parents and (finite case) steps never decrease.
  choice_offset_.push_back(0);
  edge_offset_.push_back(0);
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const Node node = nodes_[n];
    if (finite) {
      while (static_cast<int>(level_offset_.size()) <= node.step) level_offset_.push_back(static_cast<int>(n));
    }
    if (!node.settled) {
      const int next = finite ? node.step + 1 : 0;
      for (int c = 0; c < game.num_choices(node.state); ++c) {
        for (const auto& succ : game.successors(node.state, c)) {
          const int child = intern(next, succ.state, space.promote(next, succ.state, node.mode));
          edges_.push_back({child, succ.prob});
        }
        edge_offset_.push_back(static_cast<int>(edges_.size()));
      }
    }
    choice_offset_.push_back(static_cast<int>(edge_offset_.size()) - 1);
  }
  if (finite) level_offset_.push_back(static_cast<int>(nodes_.size()));
}

}  // namespace nashcsg
