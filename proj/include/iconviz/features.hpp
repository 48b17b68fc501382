#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <vector>

#include "iconviz/contagion.hpp"

namespace iconviz {

/// Five-dimensional chain descriptor.
struct ChainFeatures {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  double density = 0.0;          // directed: E / (N (N - 1))
  double avg_clustering = 0.0;   // undirected projection
  double avg_path_length = 0.0;  // undirected projection, unordered pairs

  friend bool operator==(const ChainFeatures&, const ChainFeatures&) = default;
};

/// The chain's edges renumbered onto 0..n-1 following `chain.nodes` order.
inline Digraph local_graph(const ContagionChain& chain) {
  auto local = [&](NodeIndex node) {
    auto it = std::lower_bound(chain.nodes.begin(), chain.nodes.end(), node);
    if (it == chain.nodes.end() || *it != node) {
      throw Error(ErrorCode::UnknownNode, std::to_string(node));
    }
    return static_cast<std::uint32_t>(it - chain.nodes.begin());
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(chain.edges.size());
  for (auto [u, v] : chain.edges) edges.emplace_back(local(u), local(v));
  return Digraph(chain.nodes.size(), edges);
}

/// Undirected neighbour sets (sorted) of a directed graph.
inline std::vector<std::vector<std::uint32_t>> undirected_projection(const Digraph& g) {
  std::vector<std::vector<std::uint32_t>> adj(g.size());
  for (auto [u, v] : g.edges()) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

inline ChainFeatures compute_features(const Digraph& g) {
  const std::size_t n = g.size();
  if (n < 2) throw Error(ErrorCode::DegenerateChain, "n_nodes=" + std::to_string(n));
  ChainFeatures f;
  f.n_nodes = n;
  f.n_edges = g.edge_count();
  f.density = static_cast<double>(f.n_edges) / static_cast<double>(n * (n - 1));

  const auto adj = undirected_projection(g);

  std::vector<double> coeffs(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& nb = adj[v];
    const std::size_t k = nb.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& ai = adj[nb[i]];
      for (std::size_t j = i + 1; j < k; ++j) {
        if (std::binary_search(ai.begin(), ai.end(), nb[j])) ++links;
      }
    }
    coeffs[v] = 2.0 * static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  // Summing in sorted order makes isomorphic chains agree bit for bit.
  std::sort(coeffs.begin(), coeffs.end());
  double sum = 0.0;
  for (double c : coeffs) sum += c;
  f.avg_clustering = sum / static_cast<double>(n);

  std::uint64_t dist_sum = 0;
  std::uint64_t pairs = 0;
  std::vector<std::uint32_t> dist(n);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), UINT32_MAX);
    dist[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      for (auto v : adj[u]) {
        if (dist[v] == UINT32_MAX) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (std::uint32_t t = s + 1; t < n; ++t) {
      if (dist[t] == UINT32_MAX) continue;
      dist_sum += dist[t];
      ++pairs;
    }
  }
  f.avg_path_length = pairs ? static_cast<double>(dist_sum) / static_cast<double>(pairs) : 0.0;
  return f;
}

inline ChainFeatures compute_features(const ContagionChain& chain) {
  if (chain.node_count() < 2) {
    throw Error(ErrorCode::DegenerateChain, "n_nodes=" + std::to_string(chain.node_count()));
  }
  return compute_features(local_graph(chain));
}

}  // namespace iconviz
