#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include "iconviz/contagion.hpp"
#include "iconviz/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace iconviz {
namespace {

using testing::contagion_dataset;
using testing::make_dataset;
using Nodes = std::vector<NodeIndex>;

TEST(ExtractChainsTest, SingleGuaranteeStartsAtBorrower) {
  auto ds = make_dataset({"A", "B"}, {{"A", "B", 50}});
  auto chains = extract_all_chains(build_networks(ds), ds);
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].nodes, (Nodes{0, 1}));
  EXPECT_EQ(chains[0].edges, (std::vector<std::pair<NodeIndex, NodeIndex>>{{1, 0}}));
  EXPECT_EQ(chains[0].sources, (Nodes{1}));
}

TEST(ExtractChainsTest, MutualGuaranteeMergesSources) {
  auto ds = make_dataset({"A", "B"}, {{"A", "B", 1}, {"B", "A", 1}});
  auto chains = extract_all_chains(build_networks(ds), ds);
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].sources, (Nodes{0, 1}));
  EXPECT_EQ(chains[0].edge_count(), 2u);
}

TEST(ExtractChainsTest, ThreeCycleIsOneChainWithThreeSources) {
  auto ds = make_dataset({"A", "B", "C"}, {{"A", "B", 1}, {"B", "C", 1}, {"C", "A", 1}});
  auto chains = extract_all_chains(build_networks(ds), ds);
  // brute-force closure: every row of the 3-cycle closure is all ones
  auto closure = testing::transitive_closure(3, {{0, 1}, {1, 2}, {2, 0}});
  for (const auto& row : closure) EXPECT_EQ(std::count(row.begin(), row.end(), true), 3);
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].node_count(), 3u);
  EXPECT_EQ(chains[0].edge_count(), 3u);
  EXPECT_EQ(chains[0].sources, (Nodes{0, 1, 2}));
}

TEST(ExtractChainsTest, SubchainsAreKeptSeparately) {
  // contagion 0 -> 1 -> 2: chains {0,1,2} from 0 and {1,2} from 1
  auto ds = contagion_dataset(3, {{0, 1}, {1, 2}});
  auto chains = extract_all_chains(build_networks(ds), ds);
  ASSERT_EQ(chains.size(), 2u);
  EXPECT_EQ(chains[0].nodes, (Nodes{0, 1, 2}));
  EXPECT_EQ(chains[1].nodes, (Nodes{1, 2}));
}

TEST(ExtractChainsTest, InducedEdgesIncludeNonTreeEdges) {
  // 0 -> 1, 0 -> 2, 1 -> 2: a BFS tree would drop 1 -> 2
  auto ds = contagion_dataset(3, {{0, 1}, {0, 2}, {1, 2}});
  auto chains = extract_all_chains(build_networks(ds), ds);
  EXPECT_EQ(chains[0].edge_count(), 3u);
}

TEST(ExtractChainsTest, IsolatedNodesProduceNoChains) {
  auto ds = make_dataset({"A", "B", "C"}, {{"A", "B", 1}});
  auto chains = extract_all_chains(build_networks(ds), ds);
  EXPECT_EQ(chains.size(), 1u);
}

TEST(ExtractChainsTest, ChainIdsAreContiguousAcrossNetworks) {
  auto ds = make_dataset({"A", "B", "C", "D"}, {{"A", "B", 1}, {"C", "D", 1}});
  auto chains = extract_all_chains(build_networks(ds), ds);
  ASSERT_EQ(chains.size(), 2u);
  EXPECT_EQ(chains[0].chain_id, 0u);
  EXPECT_EQ(chains[1].chain_id, 1u);
  EXPECT_EQ(chains[1].network_id, 1u);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> random_edges(Rng& rng, std::size_t n, double p) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (u != v && rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  return edges;
}

TEST(ContagionPropertyTest, BreadthFirstMatchesTransitiveClosure) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    auto n = static_cast<std::size_t>(rng.uniform_int(1, 12));
    auto edges = random_edges(rng, n, rng.uniform() * 0.4);
    auto reach = reachable_sets(Digraph(n, edges));
    auto closure = testing::transitive_closure(n, edges);
    for (std::uint32_t s = 0; s < n; ++s) {
      std::vector<std::uint32_t> expected;
      for (std::uint32_t t = 0; t < n; ++t) {
        if (closure[s][t]) expected.push_back(t);
      }
      ASSERT_EQ(reach[s], expected) << "trial " << trial << " source " << s;
    }
  }
}

TEST(ContagionPropertyTest, ChainInvariants) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto n = static_cast<std::size_t>(rng.uniform_int(2, 12));
    auto edges = random_edges(rng, n, 0.2);
    auto ds = contagion_dataset(n, edges);
    auto idx = build_networks(ds);
    auto chains = extract_all_chains(idx, ds);
    auto closure = testing::transitive_closure(n, edges);
    auto row = [&](NodeIndex s) {
      Nodes out;
      for (NodeIndex t = 0; t < n; ++t) {
        if (closure[s][t]) out.push_back(t);
      }
      return out;
    };
    std::vector<std::size_t> per_network(idx.size(), 0);
    for (const auto& c : chains) {
      ++per_network[c.network_id];
      EXPECT_GE(c.node_count(), 2u);
      // sources are exactly the vertices whose reachable set is the chain
      Nodes gen;
      for (NodeIndex s = 0; s < n; ++s) {
        if (row(s) == c.nodes) gen.push_back(s);
      }
      EXPECT_EQ(c.sources, gen);
      // induced edge set
      std::vector<std::pair<NodeIndex, NodeIndex>> induced;
      for (auto [u, v] : edges) {
        if (std::binary_search(c.nodes.begin(), c.nodes.end(), u) &&
            std::binary_search(c.nodes.begin(), c.nodes.end(), v)) {
          induced.emplace_back(u, v);
        }
      }
      std::sort(induced.begin(), induced.end());
      EXPECT_EQ(c.edges, induced);
      // subchain containment
      for (auto t : c.nodes) {
        auto rt = row(t);
        EXPECT_TRUE(std::includes(c.nodes.begin(), c.nodes.end(), rt.begin(), rt.end()));
      }
      auto f = chain_financials(c, ds);
      EXPECT_EQ(f.exposure, c.exposure);
      EXPECT_EQ(f.guarantee_amount, c.guarantee_amount);
    }
    for (std::size_t k = 0; k < chains.size(); ++k) {
      for (std::size_t j = k + 1; j < chains.size(); ++j) EXPECT_NE(chains[k].nodes, chains[j].nodes);
    }
    for (const auto& net : idx.networks()) EXPECT_LE(per_network[net.network_id], net.node_count());
  }
}

TEST(ChainFinancialsTest, SumsExposureAndGuarantees) {
  auto ds = make_dataset({"A", "B"}, {{"A", "B", 50}}, {40, 0});
  auto chains = extract_all_chains(build_networks(ds), ds);
  EXPECT_EQ(chain_financials(chains[0], ds),
            (ChainFinancials{Money::from_major(40), Money::from_major(50)}));
}

TEST(ChainFinancialsTest, ZeroExposureChainLiesOnXAxis) {
  auto ds = make_dataset({"A", "B"}, {{"A", "B", 50}}, {0, 0});
  auto chains = extract_all_chains(build_networks(ds), ds);
  EXPECT_EQ(chain_financials(chains[0], ds).exposure, Money{});
}

TEST(ChainFinancialsTest, MutualChainSumsBothDirections) {
  auto ds = make_dataset({"A", "B"}, {{"A", "B", 30}, {"B", "A", 20}});
  auto chains = extract_all_chains(build_networks(ds), ds);
  EXPECT_EQ(chain_financials(chains[0], ds).guarantee_amount, Money::from_major(50));
}

TEST(ChainFinancialsTest, UnknownNode) {
  auto ds = make_dataset({"A", "B"}, {{"A", "B", 30}});
  ContagionChain bogus;
  bogus.nodes = {0, 7};
  EXPECT_THROW(chain_financials(bogus, ds), Error);
  ContagionChain missing_edge;
  missing_edge.nodes = {0, 1};
  missing_edge.edges = {{0, 1}};  // would need guarantee B -> A
  try {
    chain_financials(missing_edge, ds);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownNode);
  }
}

TEST(ChainTableTest, EmptyCollectionIsEmptyArray) {
  Dataset ds;
  EXPECT_EQ(chains_to_table({}, ds).dump(), "[]");
}

TEST(ChainTableTest, RecordCarriesAllFields) {
  auto ds = make_dataset({"A", "B"}, {{"A", "B", 50}}, {40, 0});
  auto table = chains_to_table(extract_all_chains(build_networks(ds), ds), ds);
  ASSERT_EQ(table.size(), 1u);
  const auto& r = table[0];
  EXPECT_EQ(r.at("chain_id"), 0);
  EXPECT_EQ(r.at("network_id"), 0);
  EXPECT_EQ(r.at("nodes"), nlohmann::json({"A", "B"}));
  EXPECT_EQ(r.at("edges"), nlohmann::json::array({nlohmann::json::array({"B", "A"})}));
  EXPECT_EQ(r.at("sources"), nlohmann::json({"B"}));
  EXPECT_EQ(r.at("exposure"), 4000);
  EXPECT_EQ(r.at("guarantee_amount"), 5000);
}

TEST(ChainTableTest, ReserializingParsedTableIsByteIdentical) {
  Rng rng(3);
  auto ds = contagion_dataset(12, random_edges(rng, 12, 0.2));
  auto chains = extract_all_chains(build_networks(ds), ds);
  auto text = chains_to_table(chains, ds).dump(2);
  auto parsed = chains_from_table(nlohmann::json::parse(text), ds);
  EXPECT_EQ(parsed, chains);
  EXPECT_EQ(chains_to_table(parsed, ds).dump(2), text);
}

TEST(ChainTableTest, OrderedByNetworkThenChain) {
  auto ds = make_dataset({"A", "B", "C", "D"}, {{"A", "B", 1}, {"C", "D", 1}});
  auto chains = extract_all_chains(build_networks(ds), ds);
  std::reverse(chains.begin(), chains.end());
  auto table = chains_to_table(chains, ds);
  EXPECT_EQ(table[0].at("network_id"), 0);
  EXPECT_EQ(table[1].at("network_id"), 1);
}

TEST(ChainTableTest, WriteFailureIsIoFailure) {
  try {
    write_json_file("/nonexistent-dir/chains.json", nlohmann::json::array());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoFailure);
  }
}

}  // namespace
}  // namespace iconviz
