#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <variant>

#include "coopnet/game.hpp"
#include "coopnet/graph.hpp"
#include "coopnet/rng.hpp"

namespace coopnet {

inline constexpr double kInfiniteAlpha = std::numeric_limits<double>::infinity();

/// Switch probability driven by the accumulated-payoff difference of the two
/// strategy groups, w = 1 / (1 + exp(-beta (P_O - P_S))).
struct DemocraticWeighted {
  double beta = 1.0;
};

/// Switch probability driven by the abundance of the other strategy,
/// L = (|O| / k)^a.
struct LearningActivity {
  double exponent = 2.0;
};

/// Strategy-update rule. `alpha` is the steepness of the motivation
/// m = 1 / (1 + exp(-alpha (avg_O - avg_S))); infinity turns it into the
/// hard gate avg_O > avg_S.
struct UpdateRule {
  std::variant<DemocraticWeighted, LearningActivity> kind = DemocraticWeighted{};
  double alpha = kInfiniteAlpha;

  static UpdateRule democratic(double beta, double alpha = kInfiniteAlpha) {
    return {DemocraticWeighted{beta}, alpha};
  }
  static UpdateRule learning(double exponent, double alpha = kInfiniteAlpha) {
    return {LearningActivity{exponent}, alpha};
  }

  bool hard_gate() const noexcept { return alpha == kInfiniteAlpha; }
  bool is_learning() const noexcept { return std::holds_alternative<LearningActivity>(kind); }

  /// Throws std::invalid_argument for beta < 0, a <= 0 or alpha <= 0.
  void validate() const;
};

/// Partition of the closed neighbourhood of a focal node into O (other
/// strategy) and S (same strategy, focal node included).
struct NeighborhoodSplit {
  std::size_t count_o = 0;
  std::size_t count_s = 0;
  double sum_o = 0.0;
  double sum_s = 0.0;

  std::size_t focal_degree() const noexcept { return count_o + count_s - 1; }
  /// Zero when O is empty; callers must check count_o first.
  double avg_o() const noexcept { return count_o ? sum_o / static_cast<double>(count_o) : 0.0; }
  double avg_s() const noexcept { return sum_s / static_cast<double>(count_s); }
};

NeighborhoodSplit split_neighborhood(const Network& net, std::span<const double> payoffs,
                                     std::span<const Strategy> strategies, NodeId focal);

/// 1 / (1 + exp(-x)) with |x| clamped to 500.
double fermi(double x) noexcept;

/// Probability that the focal node adopts the other strategy. Zero whenever O
/// is empty, and under the hard gate whenever avg_O <= avg_S.
double transition_probability(const NeighborhoodSplit& split, const UpdateRule& rule);

/// Scratch buffers reused across generations.
struct GenerationWorkspace {
  PayoffVector payoffs;
  StrategyVector next;
};

/// One round of play followed by a simultaneous update of every node from the
/// same snapshot. Nodes draw in id order, one uniform per node with a
/// positive switch probability. `strategies` is replaced by the new state.
void synchronous_update(const Network& net, StrategyVector& strategies, const GameParams& params,
                        const UpdateRule& rule, RandomStream& rng, GenerationWorkspace& work);

StrategyVector synchronous_generation(const Network& net, std::span<const Strategy> strategies,
                                      const GameParams& params, const UpdateRule& rule,
                                      RandomStream& rng);

}  // namespace coopnet
