#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coopnet/graph.hpp"

namespace coopnet {

enum class Strategy : std::uint8_t { Cooperator = 0, Defector = 1 };

constexpr Strategy flipped(Strategy s) noexcept {
  return s == Strategy::Cooperator ? Strategy::Defector : Strategy::Cooperator;
}

/// Prisoner's dilemma with T=b, R=b-c, P=0, S=-c.
struct GameParams {
  double benefit = 2.0;
  double cost = 1.0;

  /// c fixed to 1, so b equals the benefit-cost ratio.
  static GameParams from_ratio(double r) { return {r, 1.0}; }
  double ratio() const { return benefit / cost; }

  /// Throws std::invalid_argument unless b > 0 and c > 0.
  void validate() const;
};

using StrategyVector = std::vector<Strategy>;
using PayoffVector = std::vector<double>;

/// Accumulated (not degree-normalized) payoff of every node after one round
/// per link: cooperators get k_c*b - k*c, defectors k_c*b.
PayoffVector play_round(const Network& net, std::span<const Strategy> strategies,
                        const GameParams& params);

/// Same as play_round, writing into `out` (resized as needed).
void play_round_into(const Network& net, std::span<const Strategy> strategies,
                     const GameParams& params, PayoffVector& out);

/// (k+1)/(k-1): a defector whose only partner is a cooperator with k further
/// cooperating neighbours earns less than that cooperator iff r exceeds this.
/// Throws std::invalid_argument for k < 2.
double leaf_defector_threshold(int k);

std::size_t count_cooperators(std::span<const Strategy> strategies);
double cooperator_fraction(std::span<const Strategy> strategies);

}  // namespace coopnet
