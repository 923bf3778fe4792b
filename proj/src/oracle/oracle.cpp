#include "nashcsg/oracle/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace nashcsg::oracle {

std::vector<PureEquilibrium> brute_force_pure_ne(const NormalFormGame& game, double tolerance) {
  std::vector<PureEquilibrium> out;
  const int n = game.num_players();
  for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
    bool stable = true;
    for (PlayerId i = 0; i < n && stable; ++i) {
      for (int a = 0; a < game.num_actions(i) && stable; ++a) {
        if (game.utility(game.deviate(j, i, a), i) > game.utility(j, i) + tolerance) stable = false;
      }
    }
    if (!stable) continue;
    PureEquilibrium e;
    e.joint = j;
    e.actions = game.joint_actions(j);
    for (PlayerId i = 0; i < n; ++i) {
      e.values.push_back(game.utility(j, i));
      e.welfare += game.utility(j, i);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::optional<PureEquilibrium> best_pure_ne(const NormalFormGame& game, Opt opt, double tolerance,
                                            double tie_tolerance) {
  const bool costs = opt == Opt::kMin;
  const auto all = brute_force_pure_ne(costs ? game.negated() : game, tolerance);
  std::optional<PureEquilibrium> best;
  for (const auto& e : all) {
    if (!best || e.welfare > best->welfare + tie_tolerance) best = e;
  }
  if (best && costs) {
    for (double& v : best->values) v = -v;
    best->welfare = -best->welfare;
  }
  return best;
}

namespace {

class Recursion {
 public:
  Recursion(const Csg& game, const std::vector<CompiledObjective>& objectives, Opt opt)
      : game_(game), obj_(objectives), opt_(opt), m_(static_cast<int>(objectives.size())) {}

  bool abstained() const { return abstained_; }

  std::vector<double> value(int t, StateId s, std::uint32_t sat, std::uint32_t fail) {
    // Bookkeeping on arrival at s after t steps.
    for (int l = 0; l < m_; ++l) {
      const std::uint32_t bit = 1u << l;
      if ((sat | fail) & bit) continue;
      const auto& o = obj_[l];
      if (o.kind == Objective::Kind::kNext && t == 1) {
        if (o.right[s]) sat |= bit; else fail |= bit;
      }
      if (o.kind == Objective::Kind::kBoundedUntil && t <= o.bound) {
        if (o.right[s]) sat |= bit; else if (!o.left[s]) fail |= bit;
      }
    }
    const auto key = std::make_tuple(t, s, sat, fail);
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<double> done(m_, 0.0);
    std::vector<char> open(m_, 0);
    bool any_open = false;
    for (int l = 0; l < m_; ++l) {
      const auto& o = obj_[l];
      const std::uint32_t bit = 1u << l;
      switch (o.kind) {
        case Objective::Kind::kNext:
        case Objective::Kind::kBoundedUntil:
          if (sat & bit) done[l] = 1.0;
          open[l] = !((sat | fail) & bit) && t < o.bound;
          break;
        case Objective::Kind::kInstantaneous:
          if (t == o.bound) done[l] = game_.state_reward(o.reward, s);
          open[l] = t < o.bound;
          break;
        case Objective::Kind::kCumulative: open[l] = t < o.bound; break;
        default: throw Error("reference backward induction handles finite objectives only");
      }
      any_open = any_open || open[l];
    }
    if (!any_open) return memo_[key] = done;

    const int choices = game_.num_choices(s);
    std::vector<int> counts(game_.num_players());
    for (PlayerId i = 0; i < game_.num_players(); ++i) counts[i] = game_.num_local_actions(s, i);
    NormalFormGame stage(counts);
    for (int c = 0; c < choices; ++c) {
      std::vector<double> u = done;
      for (int l = 0; l < m_; ++l) {
        if (!open[l]) continue;
        const auto& o = obj_[l];
        u[l] = o.kind == Objective::Kind::kCumulative
                   ? game_.state_reward(o.reward, s) + game_.action_reward(o.reward, s, c)
                   : 0.0;
      }
      for (const auto& succ : game_.successors(s, c)) {
        const auto v = value(t + 1, succ.state, sat, fail);
        for (int l = 0; l < m_; ++l) {
          if (open[l]) u[l] += succ.prob * v[l];
        }
      }
      for (int l = 0; l < m_; ++l) stage.set_utility(static_cast<std::size_t>(c), l, u[l]);
    }
    const auto best = best_pure_ne(stage, opt_);
    if (!best) {
      abstained_ = true;
      return memo_[key] = done;
    }
    return memo_[key] = best->values;
  }

 private:
  const Csg& game_;
  const std::vector<CompiledObjective>& obj_;
  Opt opt_;
  int m_;
  bool abstained_ = false;
  std::map<std::tuple<int, StateId, std::uint32_t, std::uint32_t>, std::vector<double>> memo_;
};

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

double choice_sum(const DecisionProcess& p, int g, const std::vector<double>& x) {
  double v = 0.0;
  for (const auto& e : p.successors(g)) v += e.prob * x[e.state];
  return v;
}

bool better(double a, double b, bool maximize) { return maximize ? a > b + 1e-12 : a < b - 1e-12; }

// Evaluates a fixed policy: x = reward + P x on the states in `solve`, with
// every other state held at its current value in x.
void evaluate(const DecisionProcess& p, const std::vector<int>& policy, const std::vector<double>& reward,
              const std::vector<char>& solve, std::vector<double>& x) {
  std::vector<int> index(p.num_states(), -1);
  int k = 0;
  for (int s = 0; s < p.num_states(); ++s) {
    if (solve[s]) index[s] = k++;
  }
  if (k == 0) return;
  Matrix a = Matrix::Identity(k, k);
  Vector b = Vector::Zero(k);
  for (int s = 0; s < p.num_states(); ++s) {
    if (!solve[s]) continue;
    const int g = p.first_choice(s) + policy[s];
    b(index[s]) = reward[g];
    for (const auto& e : p.successors(g)) {
      if (solve[e.state]) {
        a(index[s], index[e.state]) -= e.prob;
      } else {
        b(index[s]) += e.prob * x[e.state];
      }
    }
  }
  const Vector sol = a.fullPivLu().solve(b);
  for (int s = 0; s < p.num_states(); ++s) {
    if (solve[s]) x[s] = sol(index[s]);
  }
}

// States (among `candidates`) that reach `goal` with positive probability
// under the policy.
std::vector<char> reaching(const DecisionProcess& p, const std::vector<int>& policy, const std::vector<char>& candidates,
                           const std::vector<char>& goal) {
  std::vector<char> out(goal);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < p.num_states(); ++s) {
      if (out[s] || !candidates[s]) continue;
      for (const auto& e : p.successors(p.first_choice(s) + policy[s])) {
        if (out[e.state] && e.prob > 0) {
          out[s] = 1;
          changed = true;
          break;
        }
      }
    }
  }
  return out;
}

std::vector<double> policy_iteration(const DecisionProcess& p, const std::vector<double>& reward,
                                     const std::vector<char>& maybe, const std::vector<char>& goal,
                                     std::vector<double> x, bool maximize, bool restrict_to_reaching) {
  std::vector<int> policy(p.num_states(), 0);
  for (int round = 0; round < 10000; ++round) {
    std::vector<char> solve = maybe;
    if (restrict_to_reaching) {
      const auto r = reaching(p, policy, maybe, goal);
      for (int s = 0; s < p.num_states(); ++s) {
        if (maybe[s] && !r[s]) {
          solve[s] = 0;
          x[s] = 0.0;
        }
      }
    }
    evaluate(p, policy, reward, solve, x);
    bool changed = false;
    for (int s = 0; s < p.num_states(); ++s) {
      if (!maybe[s]) continue;
      const int g0 = p.first_choice(s);
      double current = reward[g0 + policy[s]] + choice_sum(p, g0 + policy[s], x);
      for (int c = 0; c < p.num_choices(s); ++c) {
        const double v = reward[g0 + c] + choice_sum(p, g0 + c, x);
        if (better(v, current, maximize)) {
          policy[s] = c;
          current = v;
          changed = true;
        }
      }
    }
    if (!changed) return x;
  }
  throw Error("policy iteration did not terminate");
}

}  // namespace

std::optional<std::vector<std::vector<double>>> reference_backward_induction(
    const Csg& game, const std::vector<CompiledObjective>& objectives, Opt opt) {
  Recursion rec(game, objectives, opt);
  std::vector<std::vector<double>> out;
  for (StateId s = 0; s < game.num_states(); ++s) out.push_back(rec.value(0, s, 0, 0));
  if (rec.abstained()) return std::nullopt;
  return out;
}

std::vector<double> optimal_bounded_until(const DecisionProcess& p, const StateSet& left, const StateSet& right,
                                          int bound, bool maximize) {
  const int n = p.num_states();
  std::vector<double> x(n);
  for (int s = 0; s < n; ++s) x[s] = right[s] ? 1.0 : 0.0;
  for (int j = 1; j <= bound; ++j) {
    std::vector<double> y(n);
    for (int s = 0; s < n; ++s) {
      if (right[s] || !left[s]) {
        y[s] = right[s] ? 1.0 : 0.0;
        continue;
      }
      double best = maximize ? -1.0 : 2.0;
      for (int c = 0; c < p.num_choices(s); ++c) {
        const double v = choice_sum(p, p.first_choice(s) + c, x);
        best = maximize ? std::max(best, v) : std::min(best, v);
      }
      y[s] = best;
    }
    x.swap(y);
  }
  return x;
}

std::vector<double> optimal_until(const DecisionProcess& p, const StateSet& left, const StateSet& right,
                                  bool maximize) {
  const int n = p.num_states();
  std::vector<char> maybe(n);
  std::vector<double> x(n, 0.0);
  for (int s = 0; s < n; ++s) {
    if (right[s]) x[s] = 1.0;
    maybe[s] = !right[s] && left[s];
  }
  if (!maximize) {
    // States from which the target can be avoided forever have value 0.
    std::vector<char> avoid(n);
    for (int s = 0; s < n; ++s) avoid[s] = !right[s];
    bool changed = true;
    while (changed) {
      changed = false;
      for (int s = 0; s < n; ++s) {
        if (!avoid[s] || !left[s]) continue;
        bool keep = false;
        for (int c = 0; c < p.num_choices(s) && !keep; ++c) {
          keep = true;
          for (const auto& e : p.successors(p.first_choice(s) + c)) keep = keep && avoid[e.state];
        }
        if (!keep) {
          avoid[s] = 0;
          changed = true;
        }
      }
    }
    for (int s = 0; s < n; ++s) {
      if (avoid[s]) maybe[s] = 0;
    }
  }
  const std::vector<double> reward(p.num_total_choices(), 0.0);
  std::vector<char> goal(n);
  for (int s = 0; s < n; ++s) goal[s] = right[s];
  return policy_iteration(p, reward, maybe, goal, x, maximize, true);
}

std::vector<double> optimal_cumulative(const DecisionProcess& p, const std::vector<double>& state_reward,
                                       const std::vector<double>& choice_reward, int bound, bool maximize) {
  const int n = p.num_states();
  std::vector<double> x(n, 0.0);
  for (int j = 1; j <= bound; ++j) {
    std::vector<double> y(n);
    for (int s = 0; s < n; ++s) {
      double best = maximize ? -INFINITY : INFINITY;
      for (int c = 0; c < p.num_choices(s); ++c) {
        const int g = p.first_choice(s) + c;
        const double v = state_reward[s] + choice_reward[g] + choice_sum(p, g, x);
        best = maximize ? std::max(best, v) : std::min(best, v);
      }
      y[s] = best;
    }
    x.swap(y);
  }
  return x;
}

std::vector<double> optimal_reach_reward(const DecisionProcess& p, const std::vector<double>& state_reward,
                                         const std::vector<double>& choice_reward, const StateSet& target,
                                         bool maximize) {
  const int n = p.num_states();
  std::vector<char> maybe(n);
  std::vector<double> reward(p.num_total_choices(), 0.0);
  for (int s = 0; s < n; ++s) {
    maybe[s] = !target[s];
    for (int c = 0; c < p.num_choices(s); ++c) {
      const int g = p.first_choice(s) + c;
      reward[g] = state_reward[s] + choice_reward[g];
    }
  }
  return policy_iteration(p, reward, maybe, std::vector<char>(target.begin(), target.end()), std::vector<double>(n, 0.0),
                          maximize, false);
}

std::vector<double> chain_reachability(const std::vector<std::vector<double>>& matrix, const StateSet& target) {
  const int n = static_cast<int>(matrix.size());
  // States that can reach the target at all.
  std::vector<char> can(target.begin(), target.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (can[s]) continue;
      for (int t = 0; t < n; ++t) {
        if (matrix[s][t] > 0 && can[t]) {
          can[s] = 1;
          changed = true;
          break;
        }
      }
    }
  }
  Matrix a = Matrix::Identity(n, n);
  Vector b = Vector::Zero(n);
  for (int s = 0; s < n; ++s) {
    if (target[s]) {
      b(s) = 1.0;
    } else if (can[s]) {
      for (int t = 0; t < n; ++t) a(s, t) -= matrix[s][t];
    }
  }
  const Vector x = a.fullPivLu().solve(b);
  return {x.data(), x.data() + n};
}

}  // namespace nashcsg::oracle
