#include "coopnet/game.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace coopnet {

void GameParams::validate() const {
  if (!(benefit > 0.0)) throw std::invalid_argument("benefit b must be > 0");
  if (!(cost > 0.0)) throw std::invalid_argument("cost c must be > 0");
}

void play_round_into(const Network& net, std::span<const Strategy> strategies,
                     const GameParams& params, PayoffVector& out) {
  const std::size_t n = net.node_count();
  if (strategies.size() != n) {
    throw std::invalid_argument("play_round: strategy vector size does not match network");
  }
  out.assign(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    std::size_t coop_neighbors = 0;
    for (NodeId j : net.neighbors(i)) {
      coop_neighbors += strategies[j] == Strategy::Cooperator;
    }
    double payoff = static_cast<double>(coop_neighbors) * params.benefit;
    if (strategies[i] == Strategy::Cooperator) {
      payoff -= static_cast<double>(net.degree(i)) * params.cost;
    }
    out[i] = payoff;
  }
}

PayoffVector play_round(const Network& net, std::span<const Strategy> strategies,
                        const GameParams& params) {
  PayoffVector out;
  play_round_into(net, strategies, params, out);
  return out;
}

double leaf_defector_threshold(int k) {
  if (k < 2) throw std::invalid_argument("leaf_defector_threshold needs k >= 2, got " + std::to_string(k));
  return static_cast<double>(k + 1) / static_cast<double>(k - 1);
}

std::size_t count_cooperators(std::span<const Strategy> strategies) {
  return static_cast<std::size_t>(
      std::count(strategies.begin(), strategies.end(), Strategy::Cooperator));
}

double cooperator_fraction(std::span<const Strategy> strategies) {
  if (strategies.empty()) return 0.0;
  return static_cast<double>(count_cooperators(strategies)) /
         static_cast<double>(strategies.size());
}

}  // namespace coopnet
