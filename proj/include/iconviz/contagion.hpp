#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "iconviz/graph.hpp"

namespace iconviz {

using ChainId = std::uint32_t;

/// Deduplicated reversed-reachability subgraph. All node lists are in
/// ascending dataset order; edges run infector -> infected.
struct ContagionChain {
  ChainId chain_id = 0;
  NetworkId network_id = 0;
  std::vector<NodeIndex> nodes;
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  std::vector<NodeIndex> sources;
  Money exposure;
  Money guarantee_amount;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  friend bool operator==(const ContagionChain&, const ContagionChain&) = default;
};

/// R(s) for every vertex s, by breadth-first traversal; each set includes s
/// and is sorted ascending.
inline std::vector<std::vector<std::uint32_t>> reachable_sets(const Digraph& g) {
  const auto n = static_cast<std::uint32_t>(g.size());
  std::vector<std::vector<std::uint32_t>> out(n);
  std::vector<std::uint32_t> mark(n, UINT32_MAX);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < n; ++s) {
    auto& reached = out[s];
    mark[s] = s;
    queue.push_back(s);
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      reached.push_back(u);
      for (auto v : g.out(u)) {
        if (mark[v] != s) {
          mark[v] = s;
          queue.push_back(v);
        }
      }
    }
    std::sort(reached.begin(), reached.end());
  }
  return out;
}

/// Chains of one network. Every vertex with an outgoing contagion edge
/// generates R(s); equal node sets merge into one chain whose sources are
/// all generating vertices. Chains are ordered by their lowest source and
/// numbered from `first_id`.
inline std::vector<ContagionChain> extract_chains(const ContagionGraph& cg, const Dataset& ds,
                                                  ChainId first_id = 0) {
  const auto& g = cg.graph;
  const auto reach = reachable_sets(g);
  std::map<std::vector<std::uint32_t>, std::size_t> by_set;
  std::vector<ContagionChain> chains;
  for (std::uint32_t s = 0; s < g.size(); ++s) {
    if (g.out(s).empty()) continue;
    auto [it, inserted] = by_set.try_emplace(reach[s], chains.size());
    if (!inserted) {
      chains[it->second].sources.push_back(cg.local_to_node[s]);
      continue;
    }
    ContagionChain chain;
    chain.chain_id = first_id + static_cast<ChainId>(chains.size());
    chain.network_id = cg.network_id;
    chain.sources.push_back(cg.local_to_node[s]);
    for (auto u : reach[s]) {
      NodeIndex node = cg.local_to_node[u];
      chain.nodes.push_back(node);
      chain.exposure += ds.at(node).exposure;
      const auto& adj = g.out(u);
      for (std::size_t k = 0; k < adj.size(); ++k) {
        chain.edges.emplace_back(node, cg.local_to_node[adj[k]]);
        chain.guarantee_amount += ds.edges()[cg.edge_ids[u][k]].amount;
      }
    }
    chains.push_back(std::move(chain));
  }
  // local order == dataset order, so nodes/edges/sources are already sorted
  return chains;
}

/// Chains of every network, networks visited by id, chain ids contiguous.
inline std::vector<ContagionChain> extract_all_chains(const NetworkIndex& idx, const Dataset& ds) {
  std::vector<ContagionChain> all;
  for (const auto& net : idx.networks()) {
    if (net.edge_count() == 0) continue;
    auto chains = extract_chains(reverse_graph(net, ds), ds, static_cast<ChainId>(all.size()));
    all.insert(all.end(), std::make_move_iterator(chains.begin()),
               std::make_move_iterator(chains.end()));
  }
  return all;
}

struct ChainFinancials {
  Money exposure;
  Money guarantee_amount;

  friend bool operator==(const ChainFinancials&, const ChainFinancials&) = default;
};

/// Recomputes the chain's financial coordinates from the dataset.
inline ChainFinancials chain_financials(const ContagionChain& chain, const Dataset& ds) {
  ChainFinancials f;
  for (auto node : chain.nodes) {
    if (node >= ds.size()) throw Error(ErrorCode::UnknownNode, std::to_string(node));
    f.exposure += ds.at(node).exposure;
  }
  const auto& edges = ds.edges();
  for (auto [infector, infected] : chain.edges) {
    // contagion edge borrower -> guarantor backs guarantee edge guarantor -> borrower
    GuaranteeEdge key{infected, infector, {}};
    auto it = std::lower_bound(edges.begin(), edges.end(), key, [](const auto& a, const auto& b) {
      return std::pair(a.guarantor, a.borrower) < std::pair(b.guarantor, b.borrower);
    });
    if (it == edges.end() || it->guarantor != infected || it->borrower != infector) {
      auto id = infector < ds.size() && infected < ds.size()
                    ? ds.at(infected).id + "->" + ds.at(infector).id
                    : std::to_string(infector);
      throw Error(ErrorCode::UnknownNode, id);
    }
    f.guarantee_amount += it->amount;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Contagion chain table (JSON). Amounts are integer minor units.

inline nlohmann::json chain_to_json(const ContagionChain& chain, const Dataset& ds) {
  nlohmann::json nodes = nlohmann::json::array();
  for (auto n : chain.nodes) nodes.push_back(ds.at(n).id);
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : chain.edges) edges.push_back({ds.at(u).id, ds.at(v).id});
  nlohmann::json sources = nlohmann::json::array();
  for (auto s : chain.sources) sources.push_back(ds.at(s).id);
  return {{"chain_id", chain.chain_id},
          {"network_id", chain.network_id},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"sources", std::move(sources)},
          {"exposure", chain.exposure.minor()},
          {"guarantee_amount", chain.guarantee_amount.minor()}};
}

inline nlohmann::json chains_to_table(std::vector<ContagionChain> chains, const Dataset& ds) {
  std::sort(chains.begin(), chains.end(), [](const auto& a, const auto& b) {
    return std::pair(a.network_id, a.chain_id) < std::pair(b.network_id, b.chain_id);
  });
  nlohmann::json table = nlohmann::json::array();
  for (const auto& c : chains) table.push_back(chain_to_json(c, ds));
  return table;
}

inline ContagionChain chain_from_json(const nlohmann::json& j, const Dataset& ds) {
  auto node = [&](const nlohmann::json& id) {
    auto s = id.get<std::string>();
    auto idx = ds.find(s);
    if (!idx) throw Error(ErrorCode::UnknownNode, s);
    return *idx;
  };
  ContagionChain c;
  c.chain_id = j.at("chain_id").get<ChainId>();
  c.network_id = j.at("network_id").get<NetworkId>();
  for (const auto& id : j.at("nodes")) c.nodes.push_back(node(id));
  for (const auto& e : j.at("edges")) c.edges.emplace_back(node(e.at(0)), node(e.at(1)));
  for (const auto& id : j.at("sources")) c.sources.push_back(node(id));
  c.exposure = Money::from_minor(j.at("exposure").get<std::int64_t>());
  c.guarantee_amount = Money::from_minor(j.at("guarantee_amount").get<std::int64_t>());
  return c;
}

inline std::vector<ContagionChain> chains_from_table(const nlohmann::json& table, const Dataset& ds) {
  std::vector<ContagionChain> out;
  out.reserve(table.size());
  for (const auto& j : table) out.push_back(chain_from_json(j, ds));
  return out;
}

inline void write_json_file(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, path);
}

}  // namespace iconviz
