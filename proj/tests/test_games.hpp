#pragma once

#include <random>
#include <string>
#include <vector>

#include "nashcsg/model/csg.hpp"
#include "nashcsg/model/nfg.hpp"

namespace nashcsg::testing {

// Three investors, actions invest 0 / 5 / 10, utility (f/3)(k1+k2+k3) - k_i.
inline NormalFormGame public_good_nfg(double f) {
  NormalFormGame g({3, 3, 3});
  const double amounts[3] = {0.0, 5.0, 10.0};
  std::vector<std::vector<std::string>> names(3);
  for (int i = 0; i < 3; ++i) names[i] = {"none", "half", "all"};
  g.set_action_names(names);
  for (std::size_t j = 0; j < g.num_joint_actions(); ++j) {
    const auto a = g.joint_actions(j);
    const double total = amounts[a[0]] + amounts[a[1]] + amounts[a[2]];
    for (int i = 0; i < 3; ++i) g.set_utility(j, i, f / 3.0 * total - amounts[a[i]]);
  }
  return g;
}

// Three-player prisoner's dilemma; action 0 = c, 1 = d.
inline NormalFormGame prisoners_dilemma3() {
  NormalFormGame g({2, 2, 2});
  g.set_action_names({{"c1", "d1"}, {"c2", "d2"}, {"c3", "d3"}});
  const double table[8][3] = {{7, 7, 7}, {3, 3, 9}, {3, 9, 3}, {0, 5, 5},
                              {9, 3, 3}, {5, 0, 5}, {5, 5, 0}, {1, 1, 1}};
  for (std::size_t j = 0; j < 8; ++j) {
    for (int i = 0; i < 3; ++i) g.set_utility(j, i, table[j][i]);
  }
  return g;
}

// Players 1 and 2 play matching pennies (1 wins on match), player 3 is a dummy.
inline NormalFormGame matching_pennies_dummy() {
  NormalFormGame g({2, 2, 1});
  g.set_action_names({{"h", "t"}, {"h", "t"}, {"wait"}});
  for (std::size_t j = 0; j < g.num_joint_actions(); ++j) {
    const auto a = g.joint_actions(j);
    const bool match = a[0] == a[1];
    g.set_utility(j, 0, match ? 1.0 : 0.0);
    g.set_utility(j, 1, match ? 0.0 : 1.0);
    g.set_utility(j, 2, 0.0);
  }
  return g;
}

inline NormalFormGame random_nfg(std::mt19937_64& rng, std::vector<int> counts, int levels = 5) {
  NormalFormGame g(counts);
  std::uniform_int_distribution<int> dist(0, levels);
  for (std::size_t j = 0; j < g.num_joint_actions(); ++j) {
    for (int i = 0; i < g.num_players(); ++i) g.set_utility(j, i, dist(rng));
  }
  return g;
}

// Single-state, single-player game with a self-loop.
inline CsgData trivial_csg() {
  CsgData d;
  d.players = {"p1"};
  d.actions = {{"a"}};
  d.states = {"s0"};
  d.initial = {0};
  d.availability = {{{0}}};
  d.transitions = {{0, {0}, {{0, 1.0}}}};
  return d;
}

struct RandomCsgShape {
  int players = 2;
  int max_actions = 2;
  int states = 4;
  int labels = 2;
  int rewards = 0;
};

// Random game with every availability set non-empty except occasional idles,
// random sparse distributions with dyadic probabilities, random labels
// "g0".."g{labels-1}" and integer rewards "r0"...
inline CsgData random_csg(std::mt19937_64& rng, const RandomCsgShape& shape) {
  CsgData d;
  std::uniform_int_distribution<int> act(1, shape.max_actions);
  std::uniform_int_distribution<int> state(0, shape.states - 1);
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<int> reward(0, 4);
  for (int i = 0; i < shape.players; ++i) {
    d.players.push_back("p" + std::to_string(i + 1));
    std::vector<std::string> names;
    for (int a = 0; a < shape.max_actions; ++a) names.push_back("a" + std::to_string(a));
    d.actions.push_back(names);
  }
  for (int s = 0; s < shape.states; ++s) {
    d.states.push_back("s" + std::to_string(s));
    std::vector<std::string> labels;
    for (int l = 0; l < shape.labels; ++l) {
      if (coin(rng) == 0) labels.push_back("g" + std::to_string(l));
    }
    d.labels.push_back(labels);
  }
  d.initial = {0};
  d.availability.resize(shape.states);
  for (int s = 0; s < shape.states; ++s) {
    for (int i = 0; i < shape.players; ++i) {
      std::vector<ActionId> avail;
      const int k = coin(rng) == 0 ? 1 : act(rng);
      for (int a = 0; a < k; ++a) avail.push_back(a);
      d.availability[s].push_back(avail);
    }
  }
  for (int r = 0; r < shape.rewards; ++r) {
    CsgData::Reward rw;
    rw.name = "r" + std::to_string(r);
    for (int s = 0; s < shape.states; ++s) rw.state_rewards.push_back(reward(rng));
    d.rewards.push_back(rw);
  }
  for (int s = 0; s < shape.states; ++s) {
    std::vector<int> pos(shape.players, 0);
    while (true) {
      std::vector<ActionId> joint(shape.players);
      for (int i = 0; i < shape.players; ++i) joint[i] = d.availability[s][i][pos[i]];
      CsgData::Transition t;
      t.state = s;
      t.joint = joint;
      const int branches = 1 + coin(rng) % 2;
      if (branches == 1) {
        t.distribution = {{state(rng), 1.0}};
      } else {
        const double p = 0.25 * (1 + coin(rng) % 3);
        t.distribution = {{state(rng), p}, {state(rng), 1.0 - p}};
      }
      d.transitions.push_back(t);
      for (int r = 0; r < shape.rewards; ++r) {
        const int v = reward(rng);
        if (v != 0) d.rewards[r].action_rewards.push_back({s, joint, static_cast<double>(v)});
      }
      int i = shape.players - 1;
      while (i >= 0 && ++pos[i] == static_cast<int>(d.availability[s][i].size())) pos[i--] = 0;
      if (i < 0) break;
    }
  }
  return d;
}

}  // namespace nashcsg::testing
