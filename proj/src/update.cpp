#include "coopnet/update.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coopnet {

void UpdateRule::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0 (or infinite)");
  if (const auto* dw = std::get_if<DemocraticWeighted>(&kind)) {
    if (!(dw->beta >= 0.0) || std::isinf(dw->beta)) {
      throw std::invalid_argument("beta must be finite and >= 0");
    }
  } else {
    const auto& la = std::get<LearningActivity>(kind);
    if (!(la.exponent > 0.0) || std::isinf(la.exponent)) {
      throw std::invalid_argument("learning exponent a must be finite and > 0");
    }
  }
}

NeighborhoodSplit split_neighborhood(const Network& net, std::span<const double> payoffs,
                                     std::span<const Strategy> strategies, NodeId focal) {
  NeighborhoodSplit split;
  const Strategy own = strategies[focal];
  split.count_s = 1;
  split.sum_s = payoffs[focal];
  for (NodeId j : net.neighbors(focal)) {
    if (strategies[j] == own) {
      ++split.count_s;
      split.sum_s += payoffs[j];
    } else {
      ++split.count_o;
      split.sum_o += payoffs[j];
    }
  }
  return split;
}

double fermi(double x) noexcept {
  x = std::clamp(x, -500.0, 500.0);
  return 1.0 / (1.0 + std::exp(-x));
}

double transition_probability(const NeighborhoodSplit& split, const UpdateRule& rule) {
  if (split.count_o == 0) return 0.0;

  const double avg_gap = split.avg_o() - split.avg_s();
  double motivation = 1.0;
  if (rule.hard_gate()) {
    if (!(avg_gap > 0.0)) return 0.0;
  } else {
    motivation = fermi(rule.alpha * avg_gap);
  }

  if (const auto* dw = std::get_if<DemocraticWeighted>(&rule.kind)) {
    return motivation * fermi(dw->beta * (split.sum_o - split.sum_s));
  }
  const auto& la = std::get<LearningActivity>(rule.kind);
  const double share =
      static_cast<double>(split.count_o) / static_cast<double>(split.focal_degree());
  return motivation * std::pow(share, la.exponent);
}

void synchronous_update(const Network& net, StrategyVector& strategies, const GameParams& params,
                        const UpdateRule& rule, RandomStream& rng, GenerationWorkspace& work) {
  play_round_into(net, strategies, params, work.payoffs);
  work.next = strategies;
  const auto n = static_cast<NodeId>(net.node_count());
  for (NodeId i = 0; i < n; ++i) {
    const auto split = split_neighborhood(net, work.payoffs, strategies, i);
    const double p = transition_probability(split, rule);
    if (p > 0.0 && rng.uniform() < p) work.next[i] = flipped(strategies[i]);
  }
  strategies.swap(work.next);
}

StrategyVector synchronous_generation(const Network& net, std::span<const Strategy> strategies,
                                      const GameParams& params, const UpdateRule& rule,
                                      RandomStream& rng) {
  StrategyVector state(strategies.begin(), strategies.end());
  GenerationWorkspace work;
  synchronous_update(net, state, params, rule, rng, work);
  return state;
}

}  // namespace coopnet
