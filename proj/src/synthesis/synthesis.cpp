#include "nashcsg/synthesis/synthesis.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <map>

namespace nashcsg {

namespace {

using Mix = std::vector<std::pair<int, double>>;  // (choice, weight)

// Choices at node n weighted by the strategy of every coalition except skip
// (skip = -1 weights all coalitions); with only_action >= 0 the skipped
// coalition's local action is fixed to it.
Mix mix_at(const ProductGraph& graph, const StrategyTable& strategy, int n, int skip, int only_action) {
  const Csg& game = graph.space().game();
  const auto& node = graph.node(n);
  const MixedProfile& profile = strategy.profiles[n];
  if (profile.size() != static_cast<std::size_t>(game.num_players())) {
    throw Error("strategy has no entry for state " + game.state_name(node.state) + " at step " +
                std::to_string(node.step));
  }
  Mix out;
  for (int c = 0; c < graph.num_choices(n); ++c) {
    if (only_action >= 0 && game.choice_local(node.state, c, skip) != only_action) continue;
    double w = 1.0;
    for (PlayerId i = 0; i < game.num_players() && w != 0.0; ++i) {
      if (i != skip) w *= profile[i][game.choice_local(node.state, c, i)];
    }
    if (w != 0.0) out.emplace_back(c, w);
  }
  return out;
}

bool settled_for(const ProductGraph& graph, int n, int l) {
  const auto& node = graph.node(n);
  return graph.space().settled(node.step, node.mode, l);
}

double fixed_value(const ProductGraph& graph, int n, int l) {
  const auto& node = graph.node(n);
  return graph.space().settled_value(node.step, node.state, node.mode, l);
}

// Expected one-step value of objective l under a mix, reading continuation
// values of node k from value(k).
template <typename Value>
double backup(const ProductGraph& graph, int n, int l, const Mix& mix, const Value& value) {
  double total = 0.0;
  for (const auto& [c, w] : mix) {
    double u = graph.space().immediate(graph.node(n).state, c, l);
    for (const auto& e : graph.successors(n, c)) u += e.prob * value(e.node);
    total += w * u;
  }
  return total;
}

// Solves x(n) = backup(n) for all nodes where objective l is unsettled; x
// must already hold the values of settled nodes. False if singular.
bool solve_linear(const ProductGraph& graph, int l, const std::function<Mix(int)>& mix_of, std::vector<double>& x) {
  const int nodes = graph.num_nodes();
  std::vector<int> index(nodes, -1);
  int k = 0;
  for (int n = 0; n < nodes; ++n) {
    if (!settled_for(graph, n, l)) index[n] = k++;
  }
  if (k == 0) return true;
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  for (int n = 0; n < nodes; ++n) {
    const int row = index[n];
    if (row < 0) continue;
    triplets.emplace_back(row, row, 1.0);
    for (const auto& [c, w] : mix_of(n)) {
      rhs(row) += w * graph.space().immediate(graph.node(n).state, c, l);
      for (const auto& e : graph.successors(n, c)) {
        if (index[e.node] >= 0) {
          triplets.emplace_back(row, index[e.node], -w * e.prob);
        } else {
          rhs(row) += w * e.prob * x[e.node];
        }
      }
    }
  }
  Eigen::SparseMatrix<double> a(k, k);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) return false;
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !sol.allFinite()) return false;
  for (int n = 0; n < nodes; ++n) {
    if (index[n] >= 0) x[n] = sol(index[n]);
  }
  return true;
}

int num_local(const ProductGraph& graph, int n, int coalition) {
  return graph.space().game().num_local_actions(graph.node(n).state, coalition);
}

bool improves(double candidate, double current, bool maximize) {
  const double slack = 1e-12 * (1.0 + std::abs(current));
  return maximize ? candidate > current + slack : candidate < current - slack;
}

}  // namespace

std::vector<double> evaluate_profile(const ProductGraph& graph, const StrategyTable& strategy) {
  const ProductSpace& space = graph.space();
  const int m = space.num_objectives();
  const int nodes = graph.num_nodes();
  std::vector<double> out(static_cast<std::size_t>(nodes) * m, 0.0);
  if (space.finite()) {
    for (int n = nodes - 1; n >= 0; --n) {
      const Mix mix = graph.node(n).settled ? Mix{} : mix_at(graph, strategy, n, -1, -1);
      for (int l = 0; l < m; ++l) {
        out[static_cast<std::size_t>(n) * m + l] =
            settled_for(graph, n, l) ? fixed_value(graph, n, l)
                                     : backup(graph, n, l, mix, [&](int k) { return out[static_cast<std::size_t>(k) * m + l]; });
      }
    }
    return out;
  }
  std::vector<Mix> mixes(nodes);
  for (int n = 0; n < nodes; ++n) {
    if (!graph.node(n).settled) mixes[n] = mix_at(graph, strategy, n, -1, -1);
  }
  for (int l = 0; l < m; ++l) {
    std::vector<double> x(nodes, 0.0);
    for (int n = 0; n < nodes; ++n) {
      if (settled_for(graph, n, l)) x[n] = fixed_value(graph, n, l);
    }
    if (!solve_linear(graph, l, [&](int n) { return mixes[n]; }, x)) {
      throw SolverError("profile evaluation failed: the induced chain does not settle objective " +
                        std::to_string(l + 1));
    }
    for (int n = 0; n < nodes; ++n) out[static_cast<std::size_t>(n) * m + l] = x[n];
  }
  return out;
}

std::vector<double> best_response_value(const ProductGraph& graph, const StrategyTable& strategy, int coalition,
                                        Opt opt, double epsilon) {
  const int nodes = graph.num_nodes();
  const bool maximize = opt == Opt::kMax;
  const int i = coalition;
  std::vector<double> x(nodes, 0.0);
  // Per node and own local action, the others' weighted choices.
  std::vector<std::vector<Mix>> mixes(nodes);
  for (int n = 0; n < nodes; ++n) {
    if (settled_for(graph, n, i)) {
      x[n] = fixed_value(graph, n, i);
      continue;
    }
    for (int a = 0; a < num_local(graph, n, i); ++a) mixes[n].push_back(mix_at(graph, strategy, n, i, a));
  }
  const auto read = [&](int k) { return x[k]; };
  const auto best_action = [&](int n, int& arg) {
    double best = 0.0;
    arg = -1;
    for (std::size_t a = 0; a < mixes[n].size(); ++a) {
      if (mixes[n][a].empty()) continue;  // the others never allow this action to matter
      const double v = backup(graph, n, i, mixes[n][a], read);
      if (arg < 0 || (maximize ? v > best : v < best)) {
        best = v;
        arg = static_cast<int>(a);
      }
    }
    return best;
  };

  if (graph.space().finite()) {
    for (int n = nodes - 1; n >= 0; --n) {
      int arg;
      if (!settled_for(graph, n, i)) x[n] = best_action(n, arg);
    }
    return x;
  }

  const double target = epsilon / 10.0;
  for (int iter = 0; iter < 1000000; ++iter) {
    double residual = 0.0;
    for (int n = 0; n < nodes; ++n) {
      if (settled_for(graph, n, i)) continue;
      int arg;
      const double v = best_action(n, arg);
      residual = std::max(residual, std::abs(v - x[n]));
      x[n] = v;
    }
    if (residual < target) break;
  }

  // Exact policy iteration from the greedy policy.
  std::vector<int> policy(nodes, -1);
  for (int n = 0; n < nodes; ++n) {
    if (!settled_for(graph, n, i)) best_action(n, policy[n]);
  }
  for (int round = 0; round < 100; ++round) {
    std::vector<double> y = x;
    if (!solve_linear(graph, i, [&](int n) { return mixes[n][policy[n]]; }, y)) break;
    x = y;
    bool changed = false;
    for (int n = 0; n < nodes; ++n) {
      if (settled_for(graph, n, i)) continue;
      double current = backup(graph, n, i, mixes[n][policy[n]], read);
      for (std::size_t a = 0; a < mixes[n].size(); ++a) {
        if (mixes[n][a].empty()) continue;
        const double v = backup(graph, n, i, mixes[n][a], read);
        if (improves(v, current, maximize)) {
          current = v;
          policy[n] = static_cast<int>(a);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return x;
}

EpsilonCertificate certify_epsilon(const ProductGraph& graph, const StrategyTable& strategy, Opt opt,
                                   double epsilon) {
  EpsilonCertificate cert;
  const int m = graph.space().num_objectives();
  cert.values = evaluate_profile(graph, strategy);
  cert.epsilon = -INFINITY;
  for (int i = 0; i < m; ++i) {
    const auto br = best_response_value(graph, strategy, i, opt, epsilon);
    std::vector<double> gaps(graph.num_nodes());
    for (int n = 0; n < graph.num_nodes(); ++n) {
      const double v = cert.values[static_cast<std::size_t>(n) * m + i];
      gaps[n] = opt == Opt::kMax ? br[n] - v : v - br[n];
      if (gaps[n] > cert.epsilon) {
        cert.epsilon = gaps[n];
        cert.worst_coalition = i;
        cert.worst_node = n;
      }
    }
    cert.gaps.push_back(std::move(gaps));
  }
  return cert;
}

namespace {

using Json = nlohmann::ordered_json;

Json member_names(const Csg& game, std::uint32_t bits) {
  Json out = Json::array();
  for (int l : mode_members(bits)) out.push_back(game.player_name(l));
  return out;
}

std::uint32_t parse_members(const Csg& game, const Json& list) {
  std::uint32_t bits = 0;
  for (const auto& name : list) {
    const auto id = game.find_player(name.get<std::string>());
    if (!id) throw Error("strategy names unknown coalition '" + name.get<std::string>() + "'");
    bits |= 1u << *id;
  }
  return bits;
}

}  // namespace

std::string export_strategy(const ProductGraph& graph, const StrategyTable& strategy) {
  const Csg& game = graph.space().game();
  Json root;
  root["kind"] = strategy.finite ? "finite" : "memoryless";
  Json coalitions = Json::array();
  for (PlayerId i = 0; i < game.num_players(); ++i) coalitions.push_back(game.player_name(i));
  root["coalitions"] = coalitions;

  Json modes = Json::array();
  std::vector<Mode> seen;
  Json entries = Json::array();
  for (int n = 0; n < graph.num_nodes(); ++n) {
    const auto& node = graph.node(n);
    if (node.settled) continue;
    if (std::find(seen.begin(), seen.end(), node.mode) == seen.end()) {
      seen.push_back(node.mode);
      modes.push_back({{"D", member_names(game, node.mode.d)}, {"E", member_names(game, node.mode.e)}});
    }
    const MixedProfile& profile = strategy.profiles.at(n);
    for (PlayerId i = 0; i < game.num_players(); ++i) {
      Json entry;
      entry["state"] = game.state_name(node.state);
      entry["D"] = member_names(game, node.mode.d);
      entry["E"] = member_names(game, node.mode.e);
      if (strategy.finite) entry["step"] = node.step;
      entry["coalition"] = game.player_name(i);
      Json dist = Json::object();
      const auto local = game.local_actions(node.state, i);
      for (std::size_t a = 0; a < local.size(); ++a) {
        if (profile[i][a] > 0.0) dist[game.action_name(i, local[a])] = format_double(profile[i][a], 17);
      }
      entry["distribution"] = dist;
      entries.push_back(std::move(entry));
    }
  }
  root["modes"] = modes;
  root["entries"] = entries;
  return root.dump(2) + "\n";
}

StrategyTable import_strategy(const std::string& text, const ProductGraph& graph) {
  const Csg& game = graph.space().game();
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("strategy file is not valid JSON: ") + e.what());
  }
  StrategyTable table;
  try {
    const std::string kind = root.at("kind").get<std::string>();
    if (kind != "finite" && kind != "memoryless") throw Error("unknown strategy kind '" + kind + "'");
    table.finite = kind == "finite";
    if (table.finite != graph.space().finite()) throw Error("strategy kind does not match the objectives");
    table.profiles.resize(graph.num_nodes());
    for (const auto& entry : root.at("entries")) {
      const auto state = game.find_state(entry.at("state").get<std::string>());
      if (!state) throw Error("strategy names unknown state '" + entry.at("state").get<std::string>() + "'");
      const Mode mode{parse_members(game, entry.at("D")), parse_members(game, entry.at("E"))};
      const int step = table.finite ? entry.at("step").get<int>() : 0;
      const int n = graph.find(step, *state, mode);
      if (n < 0 || graph.node(n).settled) {
        throw Error("strategy entry for state " + game.state_name(*state) + " does not match a decision point");
      }
      const auto coalition = game.find_player(entry.at("coalition").get<std::string>());
      if (!coalition) throw Error("strategy names unknown coalition '" + entry.at("coalition").get<std::string>() + "'");
      MixedProfile& profile = table.profiles[n];
      if (profile.empty()) {
        profile.resize(game.num_players());
        for (PlayerId i = 0; i < game.num_players(); ++i) profile[i].assign(game.num_local_actions(*state, i), 0.0);
      }
      const auto local = game.local_actions(*state, *coalition);
      double sum = 0.0;
      for (const auto& [name, prob] : entry.at("distribution").items()) {
        int index = -1;
        for (std::size_t a = 0; a < local.size(); ++a) {
          if (game.action_name(*coalition, local[a]) == name) index = static_cast<int>(a);
        }
        if (index < 0) throw Error("action '" + name + "' is not available to " + game.player_name(*coalition));
        const double p = std::stod(prob.get<std::string>());
        if (!(p >= 0.0) || p > 1.0 + kProbTolerance) throw Error("invalid probability for action '" + name + "'");
        profile[*coalition][index] = p;
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbTolerance) {
        throw Error("distribution of " + game.player_name(*coalition) + " at state " + game.state_name(*state) +
                    " sums to " + format_double(sum));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed strategy file: ") + e.what());
  }
  for (int n = 0; n < graph.num_nodes(); ++n) {
    if (graph.node(n).settled) continue;
    bool complete = table.profiles[n].size() == static_cast<std::size_t>(game.num_players());
    for (std::size_t i = 0; complete && i < table.profiles[n].size(); ++i) {
      double sum = 0.0;
      for (double p : table.profiles[n][i]) sum += p;
      complete = std::abs(sum - 1.0) <= kProbTolerance;
    }
    if (!complete) {
      throw Error("strategy does not cover state " + game.state_name(graph.node(n).state) + " at step " +
                  std::to_string(graph.node(n).step));
    }
  }
  return table;
}

}  // namespace nashcsg
