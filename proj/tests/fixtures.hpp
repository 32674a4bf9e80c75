#pragma once

// Small fixed configurations and a direct (set-based) evaluation of the
// democratic weighted update used as the oracle for Monte Carlo checks.

#include <cmath>
#include <limits>
#include <vector>

#include "coopnet/game.hpp"
#include "coopnet/graph.hpp"

namespace coopnet::testing {

/// 6 nodes, 8 links, mixed strategies:
///   0-1 0-2 0-3 1-2 2-4 3-4 3-5 4-5
inline Network six_node_graph() {
  Network net;
  for (int i = 0; i < 6; ++i) net.add_isolated_node();
  const int edges[][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 4}, {3, 4}, {3, 5}, {4, 5}};
  for (const auto& e : edges) net.try_add_edge(static_cast<NodeId>(e[0]), static_cast<NodeId>(e[1]));
  return net;
}

inline StrategyVector six_node_strategies() {
  constexpr auto C = Strategy::Cooperator;
  constexpr auto D = Strategy::Defector;
  return {C, C, D, C, D, D};
}

struct OracleRule {
  bool learning = false;
  double beta = 1.0;      // democratic weighted
  double exponent = 2.0;  // learning activity
  double alpha = std::numeric_limits<double>::infinity();
};

/// Switch probability of every node, computed from explicit O/S member lists
/// and payoffs recomputed here from the payoff formula.
inline std::vector<double> oracle_probabilities(const Network& net, const StrategyVector& s,
                                                double b, double c, const OracleRule& rule) {
  const std::size_t n = net.node_count();
  std::vector<double> payoff(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    int kc = 0;
    for (NodeId j : net.neighbors(i)) kc += s[j] == Strategy::Cooperator;
    payoff[i] = kc * b - (s[i] == Strategy::Cooperator ? static_cast<double>(net.degree(i)) * c : 0.0);
  }
  std::vector<double> prob(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    std::vector<NodeId> other, same{i};
    for (NodeId j : net.neighbors(i)) (s[j] == s[i] ? same : other).push_back(j);
    if (other.empty()) continue;
    double po = 0, ps = 0;
    for (NodeId j : other) po += payoff[j];
    for (NodeId j : same) ps += payoff[j];
    const double avg_o = po / static_cast<double>(other.size());
    const double avg_s = ps / static_cast<double>(same.size());
    double m;
    if (std::isinf(rule.alpha)) {
      m = avg_o > avg_s ? 1.0 : 0.0;
    } else {
      m = 1.0 / (1.0 + std::exp(-rule.alpha * (avg_o - avg_s)));
    }
    const double influence =
        rule.learning
            ? std::pow(static_cast<double>(other.size()) / static_cast<double>(net.degree(i)),
                       rule.exponent)
            : 1.0 / (1.0 + std::exp(-rule.beta * (po - ps)));
    prob[i] = m * influence;
  }
  return prob;
}

}  // namespace coopnet::testing
