#include "coopnet/graph.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace coopnet {

std::string_view to_string(GrowthModel model) {
  switch (model) {
    case GrowthModel::BAM: return "bam";
    case GrowthModel::MA: return "ma";
    case GrowthModel::RNM: return "rnm";
  }
  return "?";
}

GrowthModel parse_growth_model(std::string_view tag) {
  std::string lower(tag);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "bam") return GrowthModel::BAM;
  if (lower == "ma") return GrowthModel::MA;
  if (lower == "rnm") return GrowthModel::RNM;
  throw std::invalid_argument("unknown growth model '" + std::string(tag) + "'");
}

void GrowthSpec::validate() const {
  if (links_per_node < 2) {
    throw std::invalid_argument("links per node L must be >= 2, got " +
                                std::to_string(links_per_node));
  }
}

Network Network::clique(std::size_t nodes) {
  if (nodes < 2) {
    throw std::invalid_argument("clique needs at least 2 nodes, got " + std::to_string(nodes));
  }
  Network net;
  for (std::size_t i = 0; i < nodes; ++i) net.add_isolated_node();
  for (NodeId u = 0; u < nodes; ++u) {
    for (NodeId v = u + 1; v < nodes; ++v) net.try_add_edge(u, v);
  }
  return net;
}

bool Network::has_edge(NodeId u, NodeId v) const {
  const auto& a = adjacency_[u];
  const auto& b = adjacency_[v];
  if (a.size() <= b.size()) return std::find(a.begin(), a.end(), v) != a.end();
  return std::find(b.begin(), b.end(), u) != b.end();
}

NodeId Network::add_isolated_node() {
  adjacency_.emplace_back();
  return static_cast<NodeId>(adjacency_.size() - 1);
}

bool Network::try_add_edge(NodeId u, NodeId v) {
  if (u == v || has_edge(u, v)) return false;
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  endpoints_.push_back(u);
  endpoints_.push_back(v);
  return true;
}

namespace {

bool contains(std::span<const NodeId> set, NodeId node) {
  return std::find(set.begin(), set.end(), node) != set.end();
}

// Exact fallback when rejection keeps hitting excluded nodes.
NodeId sample_preferential_scan(const Network& net, RandomStream& rng,
                                std::span<const NodeId> exclude) {
  std::size_t eligible = 0;
  for (NodeId i = 0; i < net.node_count(); ++i) {
    if (!contains(exclude, i)) eligible += net.degree(i);
  }
  if (eligible == 0) {
    throw std::domain_error("preferential sampling: no eligible node has positive degree");
  }
  auto target = rng.below(eligible);
  for (NodeId i = 0; i < net.node_count(); ++i) {
    if (contains(exclude, i)) continue;
    if (target < net.degree(i)) return i;
    target -= net.degree(i);
  }
  throw std::logic_error("preferential sampling: cumulative search overran");
}

}  // namespace

NodeId sample_preferential(const Network& net, RandomStream& rng,
                           std::span<const NodeId> exclude) {
  const auto ends = net.endpoints();
  if (!ends.empty()) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const NodeId pick = ends[rng.below(ends.size())];
      if (!contains(exclude, pick)) return pick;
    }
  }
  return sample_preferential_scan(net, rng, exclude);
}

NodeId sample_uniform(const Network& net, RandomStream& rng) {
  return static_cast<NodeId>(rng.below(net.node_count()));
}

namespace {

template <typename Draw>
void place_edge(Network& net, RandomStream& rng, Draw draw) {
  for (int attempt = 0; attempt < kEdgePlacementAttempts; ++attempt) {
    const auto [u, v] = draw(rng);
    if (net.try_add_edge(u, v)) return;
  }
  throw EdgePlacementError("no admissible edge after " + std::to_string(kEdgePlacementAttempts) +
                           " attempts at N=" + std::to_string(net.node_count()));
}

}  // namespace

NodeId add_node(Network& net, const GrowthSpec& spec, RandomStream& rng) {
  spec.validate();
  const auto links = static_cast<std::size_t>(spec.links_per_node);
  if (net.node_count() < links) {
    throw std::invalid_argument("add_node: network smaller than the seed clique");
  }
  const NodeId fresh = net.add_isolated_node();

  switch (spec.model) {
    case GrowthModel::BAM:
      for (std::size_t k = 0; k < links; ++k) {
        place_edge(net, rng, [&](RandomStream& r) {
          return std::pair{fresh, sample_preferential(net, r)};
        });
      }
      break;
    case GrowthModel::MA:
      place_edge(net, rng, [&](RandomStream& r) {
        return std::pair{fresh, sample_preferential(net, r)};
      });
      for (std::size_t k = 1; k < links; ++k) {
        place_edge(net, rng, [&](RandomStream& r) {
          const NodeId u = sample_uniform(net, r);
          return std::pair{u, sample_preferential(net, r)};
        });
      }
      break;
    case GrowthModel::RNM:
      place_edge(net, rng, [&](RandomStream& r) {
        return std::pair{fresh, sample_uniform(net, r)};
      });
      for (std::size_t k = 1; k < links; ++k) {
        place_edge(net, rng, [&](RandomStream& r) {
          const NodeId u = sample_uniform(net, r);
          return std::pair{u, sample_uniform(net, r)};
        });
      }
      break;
  }
  return fresh;
}

Network grow_network(const GrowthSpec& spec, std::size_t nodes, RandomStream& rng) {
  spec.validate();
  const auto links = static_cast<std::size_t>(spec.links_per_node);
  if (nodes < links) {
    throw std::invalid_argument("cannot grow to " + std::to_string(nodes) +
                                " nodes: seed clique alone has " + std::to_string(links));
  }
  Network net = Network::clique(links);
  while (net.node_count() < nodes) add_node(net, spec, rng);
  return net;
}

void write_edge_list(std::ostream& out, const Network& net, const GrowthSpec& spec,
                     std::uint64_t seed) {
  out << "# N=" << net.node_count() << " L=" << spec.links_per_node
      << " model=" << to_string(spec.model) << " seed=" << seed << '\n';
  const auto ends = net.endpoints();
  for (std::size_t k = 0; k + 1 < ends.size(); k += 2) {
    out << ends[k] << ' ' << ends[k + 1] << '\n';
  }
}

}  // namespace coopnet
