#include "coopnet/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace coopnet {

void DynamicsConfig::validate() const {
  if (!(growth_fraction >= 0.0) || std::isinf(growth_fraction)) {
    throw std::invalid_argument("growth fraction n must be finite and >= 0");
  }
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) {
    throw std::invalid_argument("mutation probability P_m must be in [0, 1]");
  }
}

std::size_t mutate(std::span<Strategy> strategies, double p, RandomStream& rng) {
  if (p <= 0.0) return 0;
  std::size_t flips = 0;
  for (auto& s : strategies) {
    if (rng.uniform() < p) {
      s = flipped(s);
      ++flips;
    }
  }
  return flips;
}

std::size_t growth_increment(std::size_t nodes, double growth_fraction, double& remainder) {
  if (growth_fraction <= 0.0) return 0;
  const double current = static_cast<double>(nodes) + remainder;
  const double next = current + growth_fraction * current;
  // Absorb rounding so that e.g. 1000 * 1.001 lands on 1001.
  const double whole = std::floor(next + 1e-9);
  remainder = std::max(0.0, next - whole);
  return static_cast<std::size_t>(whole) - nodes;
}

PopulationState build_initial_cooperators(const GrowthSpec& spec, std::size_t initial_size,
                                          RandomStream& rng) {
  spec.validate();
  if (initial_size < static_cast<std::size_t>(spec.links_per_node)) {
    throw std::invalid_argument("initial cooperator count N_i must be >= L");
  }
  PopulationState state;
  state.network = grow_network(spec, initial_size, rng);
  state.strategies.assign(initial_size, Strategy::Cooperator);
  return state;
}

Simulation::Simulation(PopulationState state, DynamicsConfig dynamics, GameParams game,
                       UpdateRule rule, GrowthSpec growth, RandomStream rng)
    : state_(std::move(state)),
      dynamics_(dynamics),
      game_(game),
      rule_(std::move(rule)),
      growth_(growth),
      rng_(std::move(rng)) {
  dynamics_.validate();
  game_.validate();
  rule_.validate();
  growth_.validate();
  if (state_.strategies.size() != state_.network.node_count()) {
    throw std::invalid_argument("population state: strategy count differs from node count");
  }
}

namespace {

void mutate_and_grow_impl(PopulationState& state, const DynamicsConfig& dynamics,
                          const GrowthSpec& growth, RandomStream& rng) {
  mutate(state.strategies, dynamics.mutation_prob, rng);

  std::size_t add = growth_increment(state.size(), dynamics.growth_fraction,
                                     state.growth_remainder);
  if (state.size() + add > dynamics.max_size) {
    add = dynamics.max_size > state.size() ? dynamics.max_size - state.size() : 0;
  }
  try {
    for (std::size_t k = 0; k < add; ++k) {
      add_node(state.network, growth, rng);
      state.strategies.push_back(Strategy::Defector);
    }
  } catch (const EdgePlacementError& e) {
    throw SimulationError(std::string(e.what()) + " (seed=" + std::to_string(rng.seed()) +
                          ", generation=" + std::to_string(state.generation) + ")");
  }
  ++state.generation;
}

}  // namespace

void Simulation::play_and_update() {
  synchronous_update(state_.network, state_.strategies, game_, rule_, rng_, work_);
}

void Simulation::mutate_and_grow() { mutate_and_grow_impl(state_, dynamics_, growth_, rng_); }

void step_generation(PopulationState& state, const DynamicsConfig& dynamics,
                     const GameParams& game, const UpdateRule& rule, const GrowthSpec& growth,
                     RandomStream& rng) {
  GenerationWorkspace work;
  synchronous_update(state.network, state.strategies, game, rule, rng, work);
  mutate_and_grow_impl(state, dynamics, growth, rng);
}

}  // namespace coopnet
