#include "nashcsg/engine/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nashcsg/formula/sat.hpp"
#include "nashcsg/model/single_controller.hpp"
#include "nashcsg/model/stage_game.hpp"
#include "nashcsg/util/parallel.hpp"

namespace nashcsg {

namespace {

std::string describe_mode(Mode mode) {
  auto list = [](std::uint32_t bits) {
    std::string out = "{";
    for (int l : mode_members(bits)) out += (out.size() > 1 ? "," : "") + std::to_string(l + 1);
    return out + "}";
  };
  return "D=" + list(mode.d) + " E=" + list(mode.e);
}

struct NodeOutcome {
  bool solved = false;
  bool tie = false;
};

// Solves the stage game of node n with continuation values taken from cont
// and writes the node's value vector into out.
NodeOutcome solve_node(const ProductGraph& graph, int n, const std::vector<double>& cont, Opt opt,
                       const SolverConfig& config, double* out, MixedProfile& profile) {
  const ProductSpace& space = graph.space();
  const Csg& game = space.game();
  const auto& node = graph.node(n);
  const int m = space.num_objectives();
  std::vector<char> settled(m);
  std::vector<double> fixed(m, 0.0);
  for (int l = 0; l < m; ++l) {
    settled[l] = space.settled(node.step, node.mode, l);
    if (settled[l]) fixed[l] = space.settled_value(node.step, node.state, node.mode, l);
  }
  const auto utility = [&](int c, PlayerId l) {
    if (settled[l]) return fixed[l];
    double u = space.immediate(node.state, c, l);
    for (const auto& e : graph.successors(n, c)) u += e.prob * cont[static_cast<std::size_t>(e.node) * m + l];
    return u;
  };

  NodeOutcome outcome;
  try {
    if (game.num_choices(node.state) == 1) {
      for (int l = 0; l < m; ++l) out[l] = utility(0, l);
      profile.assign(m, std::vector<double>{1.0});
      return outcome;
    }
    const NormalFormGame nfg = stage_game(game, node.state, utility, false);
    const NfgSolution sol = opt == Opt::kMax ? swne(nfg, config) : scne(nfg, config);
    for (int l = 0; l < m; ++l) out[l] = sol.values[l];
    profile = sol.profile;
    outcome.solved = true;
    outcome.tie = sol.tie;
  } catch (const SolverError& e) {
    throw SolverError(std::string(e.what()) + " (stage game at state " + game.state_name(node.state) + ", step " +
                      std::to_string(node.step) + ", " + describe_mode(node.mode) + ")");
  }
  return outcome;
}

void fill_settled(const ProductGraph& graph, int n, double* out) {
  const ProductSpace& space = graph.space();
  const auto& node = graph.node(n);
  for (int l = 0; l < space.num_objectives(); ++l) out[l] = space.settled_value(node.step, node.state, node.mode, l);
}

int worker_count(const EngineConfig& config) { return config.threads > 0 ? config.threads : default_thread_count(); }

SolveResult prepare(std::shared_ptr<const ProductSpace> space) {
  SolveResult result;
  result.graph = std::make_shared<const ProductGraph>(*space);
  result.space = std::move(space);
  result.m = result.space->num_objectives();
  result.strategy.finite = result.space->finite();
  result.strategy.profiles.resize(result.graph->num_nodes());
  result.values.assign(static_cast<std::size_t>(result.graph->num_nodes()) * result.m, 0.0);
  return result;
}

void tally(SolveResult& result, const std::vector<NodeOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    result.stage_games += o.solved;
    result.ties += o.tie;
  }
}

}  // namespace

std::string StoppingReport::to_string(const Csg& game) const {
  std::ostringstream out;
  for (const auto& f : failures) {
    out << "objective " << f.objective + 1 << ": target can be avoided forever from ";
    const std::size_t shown = std::min<std::size_t>(f.states.size(), 10);
    for (std::size_t k = 0; k < shown; ++k) out << (k > 0 ? ", " : "") << game.state_name(f.states[k]);
    if (f.states.size() > shown) out << " and " << f.states.size() - shown << " more states";
    out << "\n";
  }
  return out.str();
}

StoppingReport check_stopping_assumption(const Csg& game, const std::vector<CompiledObjective>& objectives) {
  StoppingReport report;
  const DecisionProcess process = pooled_view(game);
  for (std::size_t l = 0; l < objectives.size(); ++l) {
    const auto& o = objectives[l];
    StateSet target(game.num_states(), 0);
    if (o.kind == Objective::Kind::kUntil) {
      for (StateId s = 0; s < game.num_states(); ++s) target[s] = !o.left[s] || o.right[s];
    } else if (o.kind == Objective::Kind::kReach) {
      target = o.right;
    } else {
      continue;
    }
    const auto sure = reach_target_surely(process, target);
    StoppingReport::Failure failure{static_cast<int>(l), {}};
    for (StateId s = 0; s < game.num_states(); ++s) {
      if (!sure[s]) failure.states.push_back(s);
    }
    if (!failure.states.empty()) report.failures.push_back(std::move(failure));
  }
  return report;
}

SolveResult solve_finite(std::shared_ptr<const ProductSpace> space, Opt opt, const EngineConfig& config) {
  if (!space->finite()) throw Error("solve_finite needs finite-horizon objectives");
  SolveResult result = prepare(std::move(space));
  const ProductGraph& graph = *result.graph;
  const int m = result.m;
  std::vector<NodeOutcome> outcomes(graph.num_nodes());
  for (int t = graph.num_levels() - 1; t >= 0; --t) {
    const int begin = graph.level_begin(t);
    const int end = graph.level_begin(t + 1);
    parallel_for(static_cast<std::size_t>(end - begin), worker_count(config), [&](std::size_t k) {
      const int n = begin + static_cast<int>(k);
      double* out = result.values.data() + static_cast<std::size_t>(n) * m;
      if (graph.node(n).settled) {
        fill_settled(graph, n, out);
      } else {
        outcomes[n] = solve_node(graph, n, result.values, opt, config.solver, out, result.strategy.profiles[n]);
      }
    });
  }
  tally(result, outcomes);
  return result;
}

SolveResult solve_infinite(std::shared_ptr<const ProductSpace> space, Opt opt, const EngineConfig& config) {
  if (space->finite()) throw Error("solve_infinite needs infinite-horizon objectives");
  if (config.vi.epsilon <= 0.0 || config.vi.window < 1) throw Error("invalid value iteration settings");
  SolveResult result = prepare(std::move(space));
  const ProductGraph& graph = *result.graph;
  const ProductSpace& sp = *result.space;
  const int m = result.m;
  const int nodes = graph.num_nodes();

  std::vector<int> active;
  for (int n = 0; n < nodes; ++n) {
    double* out = result.values.data() + static_cast<std::size_t>(n) * m;
    if (graph.node(n).settled) {
      fill_settled(graph, n, out);
    } else {
      active.push_back(n);
      for (int l = 0; l < m; ++l) {
        out[l] = sp.settled(0, graph.node(n).mode, l) ? sp.settled_value(0, graph.node(n).state, graph.node(n).mode, l)
                                                       : sp.base_value(graph.node(n).mode, l);
      }
    }
  }

  if (active.empty()) return result;
  std::vector<double> next = result.values;
  std::vector<NodeOutcome> outcomes(active.size());
  int stable = 0;
  for (int iter = 1;; ++iter) {
    parallel_for(active.size(), worker_count(config), [&](std::size_t k) {
      const int n = active[k];
      outcomes[k] = solve_node(graph, n, result.values, opt, config.solver,
                               next.data() + static_cast<std::size_t>(n) * m, result.strategy.profiles[n]);
    });
    double residual = 0.0;
    for (int n : active) {
      for (int l = 0; l < m; ++l) {
        const std::size_t i = static_cast<std::size_t>(n) * m + l;
        residual = std::max(residual, std::abs(next[i] - result.values[i]));
      }
    }
    result.values.swap(next);
    tally(result, outcomes);
    result.iterations = iter;
    result.residual = residual;
    stable = residual < config.vi.epsilon ? stable + 1 : 0;
    if (stable >= config.vi.window) break;
    if (iter >= config.vi.max_iterations) {
      throw NotConvergedError("value iteration did not converge within " + std::to_string(iter) +
                                  " iterations (residual " + format_double(residual, 6) + ")",
                              residual, iter);
    }
  }
  return result;
}

SolveResult solve(std::shared_ptr<const ProductSpace> space, Opt opt, const EngineConfig& config) {
  return space->finite() ? solve_finite(std::move(space), opt, config) : solve_infinite(std::move(space), opt, config);
}

namespace {

SolveResult solve_family(const Csg& game, std::vector<CompiledObjective> objectives, Objective::Kind a,
                         Objective::Kind b, Opt opt, const EngineConfig& config) {
  for (const auto& o : objectives) {
    if (o.kind != a && o.kind != b) throw Error("objective kind does not match the requested computation");
  }
  return solve(std::make_shared<const ProductSpace>(game, std::move(objectives)), opt, config);
}

}  // namespace

SolveResult solve_bounded_until(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                                const EngineConfig& config) {
  return solve_family(game, std::move(objectives), Objective::Kind::kBoundedUntil, Objective::Kind::kNext, opt, config);
}

SolveResult solve_instantaneous(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                                const EngineConfig& config) {
  return solve_family(game, std::move(objectives), Objective::Kind::kInstantaneous, Objective::Kind::kInstantaneous,
                      opt, config);
}

SolveResult solve_cumulative(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                             const EngineConfig& config) {
  return solve_family(game, std::move(objectives), Objective::Kind::kCumulative, Objective::Kind::kCumulative, opt,
                      config);
}

SolveResult solve_until_vi(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                           const EngineConfig& config) {
  return solve_family(game, std::move(objectives), Objective::Kind::kUntil, Objective::Kind::kUntil, opt, config);
}

SolveResult solve_reach_reward_vi(const Csg& game, std::vector<CompiledObjective> objectives, Opt opt,
                                  const EngineConfig& config) {
  return solve_family(game, std::move(objectives), Objective::Kind::kReach, Objective::Kind::kReach, opt, config);
}

StateSet check_state_formula(std::shared_ptr<const Csg> model, const StateFormula& formula, const EngineConfig& config) {
  return sat_states(*model, formula, [&](const NashFormula& nested) {
    if (nested.is_numeric()) throw FormulaError("a numeric query (=?) cannot be used inside a state formula");
    return check_nash_formula(model, nested, config).satisfied;
  });
}

NashResult check_nash_formula(std::shared_ptr<const Csg> model, const NashFormula& formula, const EngineConfig& config) {
  NashResult result;
  result.model = model;
  result.horizon = classify_horizon(formula);
  if (result.horizon == Horizon::kMixed) {
    throw Error("unsupported-mixed-horizon: the formula combines finite and infinite objectives");
  }
  const CoalitionPartition partition = resolve_coalitions(*model, formula);

  std::vector<CompiledObjective> compiled;
  for (const auto& o : formula.objectives) {
    CompiledObjective c;
    c.kind = o.kind;
    c.bound = o.kind == Objective::Kind::kNext ? 1 : o.bound;
    if (o.left) c.left = check_state_formula(model, *o.left, config);
    if (o.right) c.right = check_state_formula(model, *o.right, config);
    if (o.is_reward()) {
      const auto r = model->find_reward(o.reward);
      if (!r) throw FormulaError("unknown reward structure \"" + o.reward + "\"");
      c.reward = *r;
    }
    compiled.push_back(std::move(c));
  }

  result.coalition_game = std::make_shared<const CoalitionGame>(*model, partition);
  const Csg& game = result.coalition_game->game();
  if (result.horizon == Horizon::kInfinite) {
    const StoppingReport report = check_stopping_assumption(game, compiled);
    if (!report.ok()) throw AssumptionError("stopping assumption violated:\n" + report.to_string(game));
  }
  result.space = std::make_shared<const ProductSpace>(game, std::move(compiled));
  result.solution = solve(result.space, formula.opt, config);

  const int m = result.space->num_objectives();
  for (StateId s = 0; s < game.num_states(); ++s) {
    const int root = result.solution.graph->root(s);
    std::vector<double> v(m);
    double sum = 0.0;
    for (int l = 0; l < m; ++l) sum += v[l] = result.solution.value(root, l);
    result.values.push_back(std::move(v));
    result.sums.push_back(sum);
    if (!formula.is_numeric()) result.satisfied.push_back(formula.compare(sum));
  }
  return result;
}

}  // namespace nashcsg
