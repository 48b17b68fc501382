#include <numeric>

#include <gtest/gtest.h>

#include "iconviz/features.hpp"
#include "iconviz/patterns.hpp"
#include "iconviz/rng.hpp"

namespace iconviz {
namespace {

using Edges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

ChainFeatures features_of(std::size_t n, const Edges& e) { return compute_features(Digraph(n, e)); }
Pattern pattern_of(std::size_t n, const Edges& e) { return classify_structural(Digraph(n, e)); }

Edges path(std::size_t n) {
  Edges e;
  for (std::uint32_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

Edges cycle(std::size_t n) {
  auto e = path(n);
  e.emplace_back(static_cast<std::uint32_t>(n - 1), 0);
  return e;
}

Edges star(std::size_t n) {
  Edges e;
  for (std::uint32_t i = 1; i < n; ++i) e.emplace_back(0, i);
  return e;
}

TEST(FeaturesTest, MutualPairIsFullyDense) {
  auto f = features_of(2, {{0, 1}, {1, 0}});
  EXPECT_EQ(f.n_nodes, 2u);
  EXPECT_EQ(f.n_edges, 2u);
  EXPECT_DOUBLE_EQ(f.density, 1.0);
  EXPECT_DOUBLE_EQ(f.avg_clustering, 0.0);
  EXPECT_DOUBLE_EQ(f.avg_path_length, 1.0);
}

TEST(FeaturesTest, ThreeNodePath) {
  auto f = features_of(3, path(3));
  EXPECT_DOUBLE_EQ(f.density, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.avg_clustering, 0.0);
  EXPECT_DOUBLE_EQ(f.avg_path_length, 4.0 / 3.0);
}

TEST(FeaturesTest, DirectedTriangle) {
  auto f = features_of(3, cycle(3));
  EXPECT_DOUBLE_EQ(f.density, 0.5);
  EXPECT_DOUBLE_EQ(f.avg_clustering, 1.0);
  EXPECT_DOUBLE_EQ(f.avg_path_length, 1.0);
}

TEST(FeaturesTest, StarHasZeroClusteringAndHubPaths) {
  // n-1 pairs at distance 1, C(n-1, 2) pairs at distance 2
  for (std::size_t n = 3; n <= 12; ++n) {
    auto f = features_of(n, star(n));
    double leaves = static_cast<double>(n - 1);
    double pairs = static_cast<double>(n * (n - 1) / 2);
    EXPECT_DOUBLE_EQ(f.avg_clustering, 0.0);
    EXPECT_DOUBLE_EQ(f.avg_path_length, (leaves + 2.0 * leaves * (leaves - 1) / 2.0) / pairs);
  }
}

TEST(FeaturesTest, PathClosedForm) {
  // sum of distances on a path is n(n-1)(n+1)/6 over n(n-1)/2 pairs
  for (std::size_t n = 2; n <= 20; ++n) {
    auto f = features_of(n, path(n));
    EXPECT_NEAR(f.avg_path_length, static_cast<double>(n + 1) / 3.0, 1e-12);
    EXPECT_NEAR(f.density, 1.0 / static_cast<double>(n), 1e-12);
  }
}

TEST(FeaturesTest, DegenerateChainRejected) {
  try {
    features_of(1, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateChain);
  }
  ContagionChain c;
  c.nodes = {4};
  EXPECT_THROW(compute_features(c), Error);
}

TEST(FeaturesTest, ChainOverloadUsesLocalNumbering) {
  ContagionChain c;
  c.nodes = {10, 20, 30};
  c.edges = {{10, 20}, {20, 30}, {30, 10}};
  EXPECT_EQ(compute_features(c), features_of(3, cycle(3)));
}

Edges relabel(const Edges& e, const std::vector<std::uint32_t>& perm) {
  Edges out;
  for (auto [u, v] : e) out.emplace_back(perm[u], perm[v]);
  return out;
}

TEST(FeaturesPropertyTest, InvariantUnderRelabeling) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto n = static_cast<std::size_t>(rng.uniform_int(2, 14));
    Edges e;
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v = 0; v < n; ++v) {
        if (u != v && rng.bernoulli(0.25)) e.emplace_back(u, v);
      }
    }
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
    }
    auto a = features_of(n, e);
    auto b = features_of(n, relabel(e, perm));
    EXPECT_EQ(a, b) << "trial " << trial;
    EXPECT_GE(a.density, 0.0);
    EXPECT_LE(a.density, 1.0);
    EXPECT_GE(a.avg_clustering, 0.0);
    EXPECT_LE(a.avg_clustering, 1.0);
    if (!e.empty()) EXPECT_GE(a.avg_path_length, 1.0);
    if (!e.empty()) EXPECT_EQ(pattern_of(n, e), pattern_of(n, relabel(e, perm)));
  }
}

TEST(ClassifierTest, CanonicalExamples) {
  EXPECT_EQ(pattern_of(2, {{0, 1}}), Pattern::P1);
  EXPECT_EQ(pattern_of(3, path(3)), Pattern::P2);
  EXPECT_EQ(pattern_of(2, {{0, 1}, {1, 0}}), Pattern::P3);
  EXPECT_EQ(pattern_of(3, {{0, 1}, {1, 0}, {1, 2}}), Pattern::P4);
  EXPECT_EQ(pattern_of(3, cycle(3)), Pattern::P5);
  EXPECT_EQ(pattern_of(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}), Pattern::P6);
  EXPECT_EQ(pattern_of(3, star(3)), Pattern::P7);
  EXPECT_EQ(pattern_of(4, {{0, 1}, {0, 2}, {2, 3}}), Pattern::P8);
}

TEST(ClassifierTest, CanonicalFamiliesAtEverySize) {
  for (std::size_t n = 3; n <= 30; ++n) {
    EXPECT_EQ(pattern_of(n, path(n)), Pattern::P2) << n;
    EXPECT_EQ(pattern_of(n, cycle(n)), Pattern::P5) << n;
    EXPECT_EQ(pattern_of(n, star(n)), Pattern::P7) << n;
    auto mutual_ext = path(n);
    mutual_ext.emplace_back(1, 0);
    EXPECT_EQ(pattern_of(n, mutual_ext), Pattern::P4) << n;
  }
  for (std::size_t n = 4; n <= 30; ++n) {
    auto loop_ext = cycle(n - 1);
    loop_ext.emplace_back(0, static_cast<std::uint32_t>(n - 1));
    EXPECT_EQ(pattern_of(n, loop_ext), Pattern::P6) << n;
    auto star_ext = star(n - 1);
    star_ext.emplace_back(1, static_cast<std::uint32_t>(n - 1));
    EXPECT_EQ(pattern_of(n, star_ext), Pattern::P8) << n;
  }
}

TEST(ClassifierTest, CyclePrecedesMutual) {
  // a triangle with one reciprocated edge is still a loop
  EXPECT_EQ(pattern_of(3, {{0, 1}, {1, 2}, {2, 0}, {1, 0}}), Pattern::P5);
}

TEST(ClassifierTest, CompleteDigraphIsLoop) {
  Edges e;
  for (std::uint32_t u = 0; u < 5; ++u) {
    for (std::uint32_t v = 0; v < 5; ++v) {
      if (u != v) e.emplace_back(u, v);
    }
  }
  EXPECT_EQ(pattern_of(5, e), Pattern::P5);
}

TEST(ClassifierTest, DiamondIsStarExtension) {
  EXPECT_EQ(pattern_of(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), Pattern::P8);
}

TEST(ClassifierTest, DegenerateInputsRejected) {
  EXPECT_THROW(pattern_of(1, {}), Error);
  EXPECT_THROW(pattern_of(3, {}), Error);
}

TEST(ClassifierTest, LabelCarriesQuadrantAndSource) {
  ContagionChain c;
  c.nodes = {0, 1};
  c.edges = {{0, 1}, {1, 0}};
  auto label = classify_structural(c);
  EXPECT_EQ(label.pattern, Pattern::P3);
  EXPECT_EQ(label.quadrant, Quadrant::QII);
  EXPECT_EQ(label.source_kind, SourceKind::Structural);
}

TEST(PatternTest, QuadrantMap) {
  const std::array<Quadrant, 8> expected = {Quadrant::QI,   Quadrant::QI,   Quadrant::QII, Quadrant::QII,
                                            Quadrant::QIII, Quadrant::QIII, Quadrant::QIV, Quadrant::QIV};
  for (auto p : kAllPatterns) EXPECT_EQ(quadrant_of(p), expected[index_of(p)]);
}

TEST(PatternTest, NamesRoundTrip) {
  for (auto p : kAllPatterns) EXPECT_EQ(parse_pattern(to_string(p)), p);
  for (auto q : kAllQuadrants) EXPECT_EQ(parse_quadrant(to_string(q)), q);
  EXPECT_FALSE(parse_pattern("P9").has_value());
  EXPECT_FALSE(parse_quadrant("QV").has_value());
}

TEST(SccTest, ComponentsOfMixedGraph) {
  // {0,1,2} loop, {3} alone, {4,5} mutual
  auto comp = strongly_connected_components(Digraph(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 4}}));
  EXPECT_EQ(comp[0], comp[1]);
  EXPECT_EQ(comp[1], comp[2]);
  EXPECT_NE(comp[2], comp[3]);
  EXPECT_EQ(comp[4], comp[5]);
  EXPECT_NE(comp[3], comp[4]);
}

}  // namespace
}  // namespace iconviz
