#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

#include "coopnet/game.hpp"
#include "coopnet/graph.hpp"
#include "coopnet/rng.hpp"
#include "coopnet/update.hpp"

namespace coopnet {

struct DynamicsConfig {
  double growth_fraction = 0.0;  // n
  double mutation_prob = 0.0;    // P_m
  std::size_t max_size = std::numeric_limits<std::size_t>::max();

  void validate() const;
};

struct PopulationState {
  Network network;
  StrategyVector strategies;
  std::uint64_t generation = 0;
  /// Fractional part of the real-valued population size, in [0, 1).
  double growth_remainder = 0.0;

  std::size_t size() const noexcept { return strategies.size(); }
};

/// Runtime failure inside a run; the message carries seed and generation.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flips every strategy independently with probability p. Returns the number
/// of flips.
std::size_t mutate(std::span<Strategy> strategies, double p, RandomStream& rng);

/// Number of nodes to append this window. The real-valued size N + remainder
/// grows by a factor (1 + n); the integer part that was crossed is returned
/// and `remainder` becomes the new fractional part.
std::size_t growth_increment(std::size_t nodes, double growth_fraction, double& remainder);

/// Network grown to `initial_size` nodes, every node a cooperator.
/// Throws std::invalid_argument when initial_size < L.
PopulationState build_initial_cooperators(const GrowthSpec& spec, std::size_t initial_size,
                                          RandomStream& rng);

/// Owns one run: state, parameters and its random stream. A generation is
/// play_and_update() followed by mutate_and_grow(); observers that measure
/// cooperation sit between the two.
class Simulation {
 public:
  Simulation(PopulationState state, DynamicsConfig dynamics, GameParams game, UpdateRule rule,
             GrowthSpec growth, RandomStream rng);

  void play_and_update();
  /// Mutates existing nodes, then appends new defectors, then advances the
  /// generation counter.
  void mutate_and_grow();
  void step() {
    play_and_update();
    mutate_and_grow();
  }

  const PopulationState& state() const noexcept { return state_; }
  PopulationState& state() noexcept { return state_; }
  const DynamicsConfig& dynamics() const noexcept { return dynamics_; }
  double cooperation() const { return cooperator_fraction(state_.strategies); }
  /// Payoffs from the latest play_and_update().
  std::span<const double> payoffs() const noexcept { return work_.payoffs; }
  bool at_max_size() const noexcept { return state_.size() >= dynamics_.max_size; }

 private:
  PopulationState state_;
  DynamicsConfig dynamics_;
  GameParams game_;
  UpdateRule rule_;
  GrowthSpec growth_;
  RandomStream rng_;
  GenerationWorkspace work_;
};

/// One full generation: synchronous update, mutation, growth.
void step_generation(PopulationState& state, const DynamicsConfig& dynamics,
                     const GameParams& game, const UpdateRule& rule, const GrowthSpec& growth,
                     RandomStream& rng);

}  // namespace coopnet
