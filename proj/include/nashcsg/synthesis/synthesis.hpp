#pragma once

#include <string>
#include <vector>

#include "nashcsg/engine/engine.hpp"

namespace nashcsg {

// Values of every objective at every product node when all coalitions follow
// the strategy (num_nodes x m, row-major). Finite spaces are rolled back over
// steps; infinite spaces solve one sparse linear system per objective.
std::vector<double> evaluate_profile(const ProductGraph& graph, const StrategyTable& strategy);

// Optimal value of coalition's own objective at every node when the other
// coalitions follow the strategy. opt = kMax maximizes, kMin minimizes.
// Infinite spaces use value iteration to epsilon / 10 followed by exact
// policy iteration.
std::vector<double> best_response_value(const ProductGraph& graph, const StrategyTable& strategy, int coalition,
                                        Opt opt, double epsilon = 1e-6);

struct EpsilonCertificate {
  // gaps[i][n]: how much coalition i gains at node n by its best deviation
  // (best response minus achieved value for kMax, reversed for kMin). Not clamped.
  std::vector<std::vector<double>> gaps;
  std::vector<double> values;  // evaluate_profile output
  double epsilon = 0.0;        // max gap
  int worst_coalition = -1;
  int worst_node = -1;
};

EpsilonCertificate certify_epsilon(const ProductGraph& graph, const StrategyTable& strategy, Opt opt,
                                   double epsilon = 1e-6);

// JSON text {kind, coalitions, modes, entries: [{state, D, E, step?, coalition,
// distribution: {action: "prob"}}]}; probabilities use 17 significant digits.
std::string export_strategy(const ProductGraph& graph, const StrategyTable& strategy);
// Inverse of export_strategy for the same game and objectives. Throws Error
// on unknown names, nodes missing from the file, or invalid distributions.
StrategyTable import_strategy(const std::string& text, const ProductGraph& graph);

}  // namespace nashcsg
