#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "iconviz/ingest.hpp"

namespace iconviz {

using NetworkId = std::uint32_t;

/// Compact directed graph over vertices 0..n-1 with sorted, duplicate-free
/// out-neighbour lists.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : out_(n) {}

  Digraph(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
      : out_(n) {
    for (auto [u, v] : edges) out_.at(u).push_back(v);
    normalize();
  }

  std::size_t size() const { return out_.size(); }
  const std::vector<std::uint32_t>& out(std::uint32_t v) const { return out_[v]; }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& adj : out_) m += adj.size();
    return m;
  }

  bool has_edge(std::uint32_t u, std::uint32_t v) const {
    const auto& adj = out_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t u = 0; u < out_.size(); ++u) {
      for (auto v : out_[u]) out.emplace_back(u, v);
    }
    return out;
  }

  Digraph reversed() const {
    Digraph r(out_.size());
    for (std::uint32_t u = 0; u < out_.size(); ++u) {
      for (auto v : out_[u]) r.out_[v].push_back(u);
    }
    r.normalize();
    return r;
  }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  void normalize() {
    for (auto& adj : out_) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
  }

  std::vector<std::vector<std::uint32_t>> out_;
};

/// One weakly connected component of the guarantee graph.
struct GuaranteeNetwork {
  NetworkId network_id = 0;
  std::vector<NodeIndex> nodes;     // ascending dataset order
  std::vector<std::size_t> edges;  // indices into Dataset::edges(), ascending

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }
};

class NetworkIndex {
 public:
  NetworkIndex() = default;
  NetworkIndex(std::vector<GuaranteeNetwork> networks, std::vector<NetworkId> node_to_network)
      : networks_(std::move(networks)), node_to_network_(std::move(node_to_network)) {}

  /// Networks indexed by network_id.
  const std::vector<GuaranteeNetwork>& networks() const { return networks_; }
  const GuaranteeNetwork& network(NetworkId id) const { return networks_.at(id); }
  NetworkId network_of(NodeIndex node) const { return node_to_network_.at(node); }
  std::size_t size() const { return networks_.size(); }

 private:
  std::vector<GuaranteeNetwork> networks_;
  std::vector<NetworkId> node_to_network_;
};

/// Weakly connected components; ids follow the first-seen node in dataset
/// order, so numbering is independent of edge order.
inline NetworkIndex build_networks(const Dataset& ds) {
  const std::size_t n = ds.size();
  std::vector<NodeIndex> parent(n);
  std::iota(parent.begin(), parent.end(), NodeIndex{0});
  auto find = [&](NodeIndex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : ds.edges()) {
    NodeIndex a = find(e.guarantor);
    NodeIndex b = find(e.borrower);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  constexpr NetworkId kUnassigned = UINT32_MAX;
  std::vector<NetworkId> root_to_id(n, kUnassigned);
  std::vector<NetworkId> node_to_network(n);
  std::vector<GuaranteeNetwork> networks;
  for (NodeIndex i = 0; i < n; ++i) {
    NodeIndex r = find(i);
    if (root_to_id[r] == kUnassigned) {
      root_to_id[r] = static_cast<NetworkId>(networks.size());
      networks.push_back({root_to_id[r], {}, {}});
    }
    node_to_network[i] = root_to_id[r];
    networks[root_to_id[r]].nodes.push_back(i);
  }
  for (std::size_t e = 0; e < ds.edges().size(); ++e) {
    networks[node_to_network[ds.edges()[e].guarantor]].edges.push_back(e);
  }
  return NetworkIndex(std::move(networks), std::move(node_to_network));
}

/// Display order: node_count descending, ties by ascending network_id.
inline std::vector<NetworkId> sort_networks(const NetworkIndex& idx) {
  std::vector<NetworkId> order(idx.size());
  std::iota(order.begin(), order.end(), NetworkId{0});
  std::stable_sort(order.begin(), order.end(), [&](NetworkId a, NetworkId b) {
    return idx.network(a).node_count() > idx.network(b).node_count();
  });
  return order;
}

/// A network's topology in contagion direction (borrower -> guarantor),
/// over local vertex numbers.
struct ContagionGraph {
  NetworkId network_id = 0;
  std::vector<NodeIndex> local_to_node;  // local vertex -> dataset index
  Digraph graph;

  /// Dataset index of the guarantee edge behind each contagion edge (u, v):
  /// the edge where local v guarantees local u.
  std::vector<std::vector<std::size_t>> edge_ids;  // parallel to graph.out(u)
};

inline ContagionGraph reverse_graph(const GuaranteeNetwork& net, const Dataset& ds) {
  ContagionGraph cg;
  cg.network_id = net.network_id;
  cg.local_to_node = net.nodes;
  auto local = [&](NodeIndex node) {
    auto it = std::lower_bound(net.nodes.begin(), net.nodes.end(), node);
    return static_cast<std::uint32_t>(it - net.nodes.begin());
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> contagion;
  contagion.reserve(net.edges.size());
  for (auto e : net.edges) {
    const auto& edge = ds.edges()[e];
    contagion.emplace_back(local(edge.borrower), local(edge.guarantor));
  }
  cg.graph = Digraph(net.nodes.size(), contagion);
  cg.edge_ids.resize(net.nodes.size());
  for (std::uint32_t u = 0; u < cg.graph.size(); ++u) cg.edge_ids[u].resize(cg.graph.out(u).size());
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    auto [u, v] = contagion[i];
    const auto& adj = cg.graph.out(u);
    auto pos = std::lower_bound(adj.begin(), adj.end(), v) - adj.begin();
    cg.edge_ids[u][pos] = net.edges[i];
  }
  return cg;
}

}  // namespace iconviz
