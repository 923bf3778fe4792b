#include "nashcsg/model/single_controller.hpp"

#include <deque>

namespace nashcsg {

void DecisionProcess::begin_state() { choice_offset_.push_back(choice_offset_.back()); }

void DecisionProcess::begin_choice() {
  ++choice_offset_.back();
  succ_offset_.push_back(succ_offset_.back());
}

void DecisionProcess::add_successor(int state, double prob) {
  succ_.push_back({state, prob});
  ++succ_offset_.back();
}

DecisionProcess pooled_view(const Csg& game) {
  DecisionProcess out;
  for (StateId s = 0; s < game.num_states(); ++s) {
    out.begin_state();
    for (int c = 0; c < game.num_choices(s); ++c) {
      out.begin_choice();
      for (const auto& succ : game.successors(s, c)) out.add_successor(succ.state, succ.prob);
    }
  }
  return out;
}

ResidualProcess residual_process(const Csg& game, PlayerId controller, const LocalStrategy& others) {
  ResidualProcess out;
  const int n = game.num_players();
  std::vector<double> accum(game.num_states(), 0.0);
  std::vector<StateId> touched;
  for (StateId s = 0; s < game.num_states(); ++s) {
    out.process.begin_state();
    std::vector<std::span<const double>> dist(n);
    for (PlayerId j = 0; j < n; ++j) {
      if (j != controller) dist[j] = others(s, j);
    }
    const int own = game.num_local_actions(s, controller);
    std::vector<std::vector<std::pair<int, double>>> mix(own);
    for (int c = 0; c < game.num_choices(s); ++c) {
      double w = 1.0;
      for (PlayerId j = 0; j < n && w != 0.0; ++j) {
        if (j != controller) w *= dist[j][game.choice_local(s, c, j)];
      }
      if (w != 0.0) mix[game.choice_local(s, c, controller)].emplace_back(c, w);
    }
    for (int a = 0; a < own; ++a) {
      out.process.begin_choice();
      for (const auto& [c, w] : mix[a]) {
        for (const auto& succ : game.successors(s, c)) {
          if (accum[succ.state] == 0.0) touched.push_back(succ.state);
          accum[succ.state] += w * succ.prob;
        }
      }
      for (StateId t : touched) {
        out.process.add_successor(t, accum[t]);
        accum[t] = 0.0;
      }
      touched.clear();
      out.mixture.push_back(std::move(mix[a]));
    }
  }
  return out;
}

std::vector<char> reach_target_surely(const DecisionProcess& process, const std::vector<char>& target) {
  const int n = process.num_states();
  // Largest set outside the target that some choice keeps closed: from there
  // the controller avoids the target forever.
  std::vector<char> avoid(n, 0);
  for (int s = 0; s < n; ++s) avoid[s] = !target[s];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!avoid[s]) continue;
      bool closed_choice = false;
      for (int c = process.first_choice(s); c < process.first_choice(s) + process.num_choices(s); ++c) {
        bool closed = true;
        for (const auto& succ : process.successors(c)) {
          if (succ.prob > 0.0 && !avoid[succ.state]) {
            closed = false;
            break;
          }
        }
        if (closed) {
          closed_choice = true;
          break;
        }
      }
      if (!closed_choice) {
        avoid[s] = 0;
        changed = true;
      }
    }
  }
  // Anything that can reach that set with positive probability (through
  // non-target states) has minimum reachability below one.
  std::vector<std::vector<int>> pred(n);
  for (int s = 0; s < n; ++s) {
    for (int c = process.first_choice(s); c < process.first_choice(s) + process.num_choices(s); ++c) {
      for (const auto& succ : process.successors(c)) {
        if (succ.prob > 0.0) pred[succ.state].push_back(s);
      }
    }
  }
  std::vector<char> bad(n, 0);
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    if (avoid[s]) {
      bad[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    for (int s : pred[t]) {
      if (!bad[s] && !target[s]) {
        bad[s] = 1;
        queue.push_back(s);
      }
    }
  }
  std::vector<char> out(n);
  for (int s = 0; s < n; ++s) out[s] = !bad[s];
  return out;
}

}  // namespace nashcsg
