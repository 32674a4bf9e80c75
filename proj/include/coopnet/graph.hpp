#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coopnet/rng.hpp"

namespace coopnet {

using NodeId = std::uint32_t;

enum class GrowthModel {
  BAM,  ///< every new link attached to the new node by preferential attachment
  MA,   ///< one preferential link for the new node, L-1 uniform-to-preferential links
  RNM,  ///< one uniform link for the new node, L-1 uniform-to-uniform links
};

std::string_view to_string(GrowthModel model);
/// Accepts "bam", "ma", "rnm" (case-insensitive).
GrowthModel parse_growth_model(std::string_view tag);

struct GrowthSpec {
  GrowthModel model = GrowthModel::MA;
  int links_per_node = 4;  // L; the seed clique also has L nodes

  /// Throws std::invalid_argument when L < 2.
  void validate() const;
};

/// Raised when no admissible edge was found within the resampling cap.
class EdgePlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected simple graph that only grows. Node ids are dense and
/// follow insertion order.
class Network {
 public:
  Network() = default;

  /// Complete graph on `nodes` vertices. Throws for nodes < 2.
  static Network clique(std::size_t nodes);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return endpoints_.size() / 2; }
  std::size_t total_degree() const noexcept { return endpoints_.size(); }
  std::size_t degree(NodeId node) const { return adjacency_[node].size(); }
  std::span<const NodeId> neighbors(NodeId node) const { return adjacency_[node]; }

  bool has_edge(NodeId u, NodeId v) const;

  NodeId add_isolated_node();

  /// Adds u-v unless it is a self-loop or already present. Returns
  /// whether the edge was inserted.
  bool try_add_edge(NodeId u, NodeId v);

  /// Both endpoints of every edge, edge k at [2k, 2k+1]. Drawing a uniform
  /// entry selects a node with probability degree / total_degree.
  std::span<const NodeId> endpoints() const noexcept { return endpoints_; }

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<NodeId> endpoints_;
};

/// Node drawn with probability proportional to its degree among nodes not in
/// `exclude`. Throws std::domain_error when every eligible node has degree 0.
NodeId sample_preferential(const Network& net, RandomStream& rng,
                           std::span<const NodeId> exclude = {});

NodeId sample_uniform(const Network& net, RandomStream& rng);

/// Maximum draws per edge before add_node gives up.
inline constexpr int kEdgePlacementAttempts = 10'000;

/// Appends one node and exactly L edges following `spec.model`.
/// Requires node_count() >= L. Throws EdgePlacementError if an edge could not
/// be placed within kEdgePlacementAttempts draws.
NodeId add_node(Network& net, const GrowthSpec& spec, RandomStream& rng);

/// Seed clique of L nodes grown with add_node up to `nodes` vertices.
Network grow_network(const GrowthSpec& spec, std::size_t nodes, RandomStream& rng);

/// `# N=<n> L=<l> model=<tag> seed=<s>` followed by one `u v` line per edge
/// in insertion order.
void write_edge_list(std::ostream& out, const Network& net, const GrowthSpec& spec,
                     std::uint64_t seed);

}  // namespace coopnet
