#include <gtest/gtest.h>

#include "iconviz/graph.hpp"
#include "iconviz/rng.hpp"
#include "support/fixtures.hpp"

namespace iconviz {
namespace {

using testing::make_dataset;

std::vector<std::size_t> sizes(const NetworkIndex& idx) {
  std::vector<std::size_t> out;
  for (const auto& n : idx.networks()) out.push_back(n.node_count());
  return out;
}

TEST(BuildNetworksTest, DisjointPairs) {
  auto ds = make_dataset({"A", "B", "C", "D"}, {{"A", "B", 1}, {"C", "D", 1}});
  auto idx = build_networks(ds);
  EXPECT_EQ(sizes(idx), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(idx.network_of(0), idx.network_of(1));
  EXPECT_NE(idx.network_of(0), idx.network_of(2));
}

TEST(BuildNetworksTest, PathIsOneNetwork) {
  auto idx = build_networks(make_dataset({"A", "B", "C"}, {{"A", "B", 1}, {"B", "C", 1}}));
  ASSERT_EQ(idx.size(), 1u);
  EXPECT_EQ(idx.network(0).node_count(), 3u);
  EXPECT_EQ(idx.network(0).edge_count(), 2u);
}

TEST(BuildNetworksTest, IsolatedNodeIsSingletonNetwork) {
  auto idx = build_networks(make_dataset({"A"}, {}));
  ASSERT_EQ(idx.size(), 1u);
  EXPECT_EQ(idx.network(0).node_count(), 1u);
  EXPECT_EQ(idx.network(0).edge_count(), 0u);
}

TEST(BuildNetworksTest, WeakConnectivityIgnoresDirection) {
  // A -> B <- C has no directed path A..C but is one component
  auto idx = build_networks(make_dataset({"A", "B", "C"}, {{"A", "B", 1}, {"C", "B", 1}}));
  EXPECT_EQ(idx.size(), 1u);
}

TEST(BuildNetworksTest, IdsFollowFirstSeenNode) {
  auto idx = build_networks(make_dataset({"X", "A", "B", "Y"}, {{"A", "B", 1}, {"X", "Y", 1}}));
  EXPECT_EQ(idx.network_of(0), 0u);  // X
  EXPECT_EQ(idx.network_of(1), 1u);  // A
}

TEST(SortNetworksTest, SizeDescendingTiesById) {
  // sizes [3, 7, 7, 2] for ids [0, 1, 2, 3]
  std::vector<std::string> names;
  std::vector<std::tuple<std::string, std::string, std::int64_t>> edges;
  int next = 0;
  for (int size : {3, 7, 7, 2}) {
    int first = next;
    for (int i = 0; i < size; ++i) names.push_back("v" + std::to_string(next++));
    for (int i = first + 1; i < next; ++i) edges.emplace_back(names[first], names[i], 1);
  }
  auto idx = build_networks(make_dataset(names, edges));
  EXPECT_EQ(sizes(idx), (std::vector<std::size_t>{3, 7, 7, 2}));
  EXPECT_EQ(sort_networks(idx), (std::vector<NetworkId>{1, 2, 0, 3}));
}

TEST(SortNetworksTest, SingleAndEqualSizes) {
  EXPECT_EQ(sort_networks(build_networks(make_dataset({"A"}, {}))), (std::vector<NetworkId>{0}));
  auto idx = build_networks(make_dataset({"A", "B", "C"}, {}));
  EXPECT_EQ(sort_networks(idx), (std::vector<NetworkId>{0, 1, 2}));
}

using Edges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

Edges contagion_edges(const Dataset& ds) {
  auto idx = build_networks(ds);
  Edges out;
  for (const auto& net : idx.networks()) {
    auto cg = reverse_graph(net, ds);
    for (auto [u, v] : cg.graph.edges()) out.emplace_back(cg.local_to_node[u], cg.local_to_node[v]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(ReverseGraphTest, SingleEdge) {
  EXPECT_EQ(contagion_edges(make_dataset({"A", "B"}, {{"A", "B", 1}})), (Edges{{1, 0}}));
}

TEST(ReverseGraphTest, TwoCycleIsSelfDual) {
  EXPECT_EQ(contagion_edges(make_dataset({"A", "B"}, {{"A", "B", 1}, {"B", "A", 1}})),
            (Edges{{0, 1}, {1, 0}}));
}

TEST(ReverseGraphTest, SharedBorrowerInfectsBothGuarantors) {
  EXPECT_EQ(contagion_edges(make_dataset({"A", "B", "C"}, {{"A", "B", 1}, {"C", "B", 1}})),
            (Edges{{1, 0}, {1, 2}}));
}

TEST(ReverseGraphTest, EdgeIdsPointAtBackingGuarantee) {
  auto ds = make_dataset({"A", "B", "C"}, {{"A", "B", 5}, {"C", "B", 9}});
  auto idx = build_networks(ds);
  auto cg = reverse_graph(idx.network(0), ds);
  for (std::uint32_t u = 0; u < cg.graph.size(); ++u) {
    for (std::size_t k = 0; k < cg.graph.out(u).size(); ++k) {
      const auto& e = ds.edges()[cg.edge_ids[u][k]];
      EXPECT_EQ(e.borrower, cg.local_to_node[u]);
      EXPECT_EQ(e.guarantor, cg.local_to_node[cg.graph.out(u)[k]]);
    }
  }
}

// --- properties over random graphs ----------------------------------------

Dataset random_graph(std::uint64_t seed, std::vector<std::tuple<std::string, std::string, std::int64_t>>* out = nullptr) {
  Rng rng(seed);
  auto n = static_cast<int>(rng.uniform_int(1, 40));
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("c" + std::to_string(i));
  std::vector<std::tuple<std::string, std::string, std::int64_t>> edges;
  auto m = n > 1 ? rng.uniform_int(0, 2 * n) : 0;
  for (std::int64_t k = 0; k < m; ++k) {
    auto g = rng.uniform_int(0, n - 1);
    auto b = rng.uniform_int(0, n - 2);
    if (b >= g) ++b;
    edges.emplace_back(names[g], names[b], rng.uniform_int(1, 100));
  }
  if (out) *out = edges;
  return make_dataset(names, edges);
}

TEST(GraphPropertyTest, DecompositionIsAPartition) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto ds = random_graph(seed);
    auto idx = build_networks(ds);
    std::size_t nodes = 0, edges = 0;
    for (const auto& net : idx.networks()) {
      nodes += net.node_count();
      edges += net.edge_count();
      EXPECT_GE(net.node_count(), 1u);
      for (auto e : net.edges) {
        EXPECT_EQ(idx.network_of(ds.edges()[e].guarantor), net.network_id);
        EXPECT_EQ(idx.network_of(ds.edges()[e].borrower), net.network_id);
      }
    }
    EXPECT_EQ(nodes, ds.size());
    EXPECT_EQ(edges, ds.edges().size());
  }
}

TEST(GraphPropertyTest, ReverseIsAnInvolution) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto ds = random_graph(seed);
    auto idx = build_networks(ds);
    for (const auto& net : idx.networks()) {
      auto g = reverse_graph(net, ds).graph;
      EXPECT_EQ(g.reversed().reversed(), g);
    }
  }
}

TEST(GraphPropertyTest, DecompositionIgnoresEdgeOrder) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::vector<std::tuple<std::string, std::string, std::int64_t>> edges;
    auto ds = random_graph(seed, &edges);
    std::reverse(edges.begin(), edges.end());
    std::vector<std::string> names;
    for (const auto& c : ds.corporations()) names.push_back(c.id);
    auto a = build_networks(ds);
    auto b = build_networks(make_dataset(names, edges));
    ASSERT_EQ(a.size(), b.size());
    for (NetworkId i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a.network(i).nodes, b.network(i).nodes);
      EXPECT_EQ(a.network(i).edge_count(), b.network(i).edge_count());
    }
  }
}

}  // namespace
}  // namespace iconviz
