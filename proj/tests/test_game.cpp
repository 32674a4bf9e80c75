#include <doctest.h>

#include <cmath>

#include "coopnet/game.hpp"

using namespace coopnet;

namespace {

constexpr auto C = Strategy::Cooperator;
constexpr auto D = Strategy::Defector;

// Node 0 defector attached only to cooperator 1, which has k further
// cooperating leaves.
Network leaf_defector_graph(int k) {
  Network net;
  for (int i = 0; i < k + 2; ++i) net.add_isolated_node();
  net.try_add_edge(0, 1);
  for (int j = 0; j < k; ++j) net.try_add_edge(1, static_cast<NodeId>(2 + j));
  return net;
}

StrategyVector leaf_defector_strategies(int k) {
  StrategyVector s(static_cast<std::size_t>(k + 2), C);
  s[0] = D;
  return s;
}

}  // namespace

TEST_CASE("cooperator and defector payoffs") {
  // Cooperator hub with 3 cooperating and 1 defecting neighbour.
  Network net;
  for (int i = 0; i < 5; ++i) net.add_isolated_node();
  for (NodeId j = 1; j < 5; ++j) net.try_add_edge(0, j);
  const StrategyVector s{C, C, C, C, D};
  const auto p = play_round(net, s, {2.0, 1.0});
  CHECK(p[0] == doctest::Approx(3 * 2.0 - 4 * 1.0));
  CHECK(p[4] == doctest::Approx(2.0));  // defector with one cooperating partner
  CHECK(p[1] == doctest::Approx(1.0));  // R = b - c
}

TEST_CASE("defector without cooperating neighbours earns nothing") {
  const auto net = Network::clique(3);
  const auto p = play_round(net, StrategyVector{D, D, C}, {5.0, 1.0});
  CHECK(p[0] == 5.0);
  const auto all_d = play_round(net, StrategyVector{D, D, D}, {5.0, 1.0});
  for (double v : all_d) CHECK(v == 0.0);
}

TEST_CASE("fully cooperative K4 earns R per link") {
  const auto net = Network::clique(4);
  const auto p = play_round(net, StrategyVector(4, C), {2.0, 1.0});
  for (double v : p) CHECK(v == doctest::Approx(3.0));
}

TEST_CASE("play_round rejects mismatched strategy vectors") {
  const auto net = Network::clique(3);
  CHECK_THROWS_AS(play_round(net, StrategyVector(2, C), {2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("game parameter validation") {
  CHECK_THROWS_AS((GameParams{0.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GameParams{2.0, -1.0}).validate(), std::invalid_argument);
  CHECK(GameParams::from_ratio(3.5).ratio() == 3.5);
}

TEST_CASE("leaf-defector threshold") {
  CHECK(leaf_defector_threshold(2) == 3.0);
  CHECK(leaf_defector_threshold(3) == 2.0);
  CHECK(leaf_defector_threshold(5) == doctest::Approx(1.5));
  CHECK_THROWS_AS(leaf_defector_threshold(1), std::invalid_argument);

  for (int k : {2, 3, 4, 6}) {
    CAPTURE(k);
    const auto net = leaf_defector_graph(k);
    const auto s = leaf_defector_strategies(k);
    const double rc = leaf_defector_threshold(k);
    const auto at = play_round(net, s, GameParams::from_ratio(rc));
    CHECK(at[1] == doctest::Approx(at[0]));
    const auto above = play_round(net, s, GameParams::from_ratio(rc + 1e-6));
    CHECK(above[1] > above[0]);
    const auto below = play_round(net, s, GameParams::from_ratio(rc - 1e-6));
    CHECK(below[1] < below[0]);
  }
}

TEST_CASE("payoff properties on random graphs") {
  RandomStream rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = grow_network({GrowthModel::MA, 3}, 60, rng);
    StrategyVector s(net.node_count());
    for (auto& x : s) x = rng.bernoulli(0.5) ? C : D;
    const GameParams params{1.0 + 3.0 * rng.uniform(), 0.5 + rng.uniform()};
    const auto p = play_round(net, s, params);

    // Scaling (b, c) scales every payoff.
    const double lambda = 0.25 + 4.0 * rng.uniform();
    const auto scaled = play_round(net, s, {lambda * params.benefit, lambda * params.cost});
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(scaled[i] == doctest::Approx(lambda * p[i]));
    }

    // Per-edge accounting: each link contributes what its two ends earn on it.
    double edge_total = 0.0;
    const auto ends = net.endpoints();
    for (std::size_t e = 0; e < ends.size(); e += 2) {
      const Strategy a = s[ends[e]], b = s[ends[e + 1]];
      if (a == C && b == C) edge_total += 2 * (params.benefit - params.cost);
      else if (a != b) edge_total += params.benefit - params.cost;  // T + S
    }
    double node_total = 0.0;
    for (double v : p) node_total += v;
    CHECK(node_total == doctest::Approx(edge_total));

    // Bounds.
    for (NodeId i = 0; i < net.node_count(); ++i) {
      if (s[i] == D) {
        CHECK(p[i] >= 0.0);
      } else {
        CHECK(p[i] >= -static_cast<double>(net.degree(i)) * params.cost - 1e-12);
      }
    }
  }
}

TEST_CASE("cooperator fraction") {
  CHECK(cooperator_fraction(StrategyVector{C, D, C, C}) == 0.75);
  CHECK(count_cooperators(StrategyVector{D, D}) == 0);
  CHECK(cooperator_fraction(StrategyVector{}) == 0.0);
}
