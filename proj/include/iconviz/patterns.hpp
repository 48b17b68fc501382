#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "iconviz/features.hpp"

namespace iconviz {

enum class Pattern : std::uint8_t { P1, P2, P3, P4, P5, P6, P7, P8 };
enum class Quadrant : std::uint8_t { QI, QII, QIII, QIV };
enum class SourceKind : std::uint8_t { Structural, Spectral };

inline constexpr std::array<Pattern, 8> kAllPatterns = {
    Pattern::P1, Pattern::P2, Pattern::P3, Pattern::P4,
    Pattern::P5, Pattern::P6, Pattern::P7, Pattern::P8};
inline constexpr std::array<Quadrant, 4> kAllQuadrants = {
    Quadrant::QI, Quadrant::QII, Quadrant::QIII, Quadrant::QIV};

constexpr std::size_t index_of(Pattern p) { return static_cast<std::size_t>(p); }
constexpr std::size_t index_of(Quadrant q) { return static_cast<std::size_t>(q); }

/// Chain-like, mutual, loop-mutual and star-like behaviour pairs.
constexpr Quadrant quadrant_of(Pattern p) {
  return static_cast<Quadrant>(index_of(p) / 2);
}

constexpr std::string_view to_string(Pattern p) {
  constexpr std::array<std::string_view, 8> names = {"P1", "P2", "P3", "P4",
                                                     "P5", "P6", "P7", "P8"};
  return names[index_of(p)];
}

constexpr std::string_view to_string(Quadrant q) {
  constexpr std::array<std::string_view, 4> names = {"QI", "QII", "QIII", "QIV"};
  return names[index_of(q)];
}

constexpr std::string_view pattern_name(Pattern p) {
  constexpr std::array<std::string_view, 8> names = {
      "direct",      "single chain",     "mutual", "mutual-ext",
      "loop-mutual", "loop-mutual-ext", "star",   "star-ext"};
  return names[index_of(p)];
}

inline std::optional<Pattern> parse_pattern(std::string_view s) {
  for (auto p : kAllPatterns) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

inline std::optional<Quadrant> parse_quadrant(std::string_view s) {
  for (auto q : kAllQuadrants) {
    if (to_string(q) == s) return q;
  }
  return std::nullopt;
}

struct PatternLabel {
  Pattern pattern = Pattern::P1;
  Quadrant quadrant = Quadrant::QI;
  SourceKind source_kind = SourceKind::Structural;

  static PatternLabel of(Pattern p, SourceKind kind = SourceKind::Structural) {
    return {p, quadrant_of(p), kind};
  }

  friend bool operator==(const PatternLabel&, const PatternLabel&) = default;
};

/// Component id per vertex (Kosaraju, iterative). Ids are arbitrary but
/// vertices share an id iff they are mutually reachable.
inline std::vector<std::uint32_t> strongly_connected_components(const Digraph& g) {
  const auto n = static_cast<std::uint32_t>(g.size());
  std::vector<std::uint32_t> finish;
  finish.reserve(n);
  std::vector<bool> seen(n, false);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = true;
    stack.emplace_back(s, 0);
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < g.out(u).size()) {
        auto v = g.out(u)[next++];
        if (!seen[v]) {
          seen[v] = true;
          stack.emplace_back(v, 0);
        }
      } else {
        finish.push_back(u);
        stack.pop_back();
      }
    }
  }
  const Digraph rev = g.reversed();
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> comp(n, kNone);
  std::uint32_t next_id = 0;
  std::vector<std::uint32_t> work;
  for (auto it = finish.rbegin(); it != finish.rend(); ++it) {
    if (comp[*it] != kNone) continue;
    comp[*it] = next_id;
    work.push_back(*it);
    while (!work.empty()) {
      auto u = work.back();
      work.pop_back();
      for (auto v : rev.out(u)) {
        if (comp[v] == kNone) {
          comp[v] = next_id;
          work.push_back(v);
        }
      }
    }
    ++next_id;
  }
  return comp;
}

/// Deterministic decision procedure over the chain's contagion topology:
/// loops of three or more first, then mutual pairs, then the acyclic shapes.
inline Pattern classify_structural(const Digraph& g) {
  const std::size_t n = g.size();
  const std::size_t m = g.edge_count();
  if (n < 2 || m == 0) {
    throw Error(ErrorCode::DegenerateChain,
                "n_nodes=" + std::to_string(n) + " n_edges=" + std::to_string(m));
  }

  const auto comp = strongly_connected_components(g);
  std::vector<std::size_t> comp_size(n, 0);
  for (auto c : comp) ++comp_size[c];
  const std::size_t largest = *std::max_element(comp_size.begin(), comp_size.end());
  if (largest >= 3) return largest == n ? Pattern::P5 : Pattern::P6;

  const auto edges = g.edges();
  const bool has_mutual = std::any_of(edges.begin(), edges.end(),
                                      [&](auto e) { return g.has_edge(e.second, e.first); });
  if (has_mutual) return n == 2 ? Pattern::P3 : Pattern::P4;

  if (n == 2) return Pattern::P1;

  std::vector<std::size_t> in_deg(n, 0);
  for (auto [u, v] : edges) ++in_deg[v];
  bool simple_path = true;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (in_deg[v] > 1 || g.out(v).size() > 1) simple_path = false;
  }
  if (simple_path) return Pattern::P2;

  const auto roots = std::count(in_deg.begin(), in_deg.end(), std::size_t{0});
  if (roots == 1) {
    auto root = static_cast<std::uint32_t>(
        std::find(in_deg.begin(), in_deg.end(), std::size_t{0}) - in_deg.begin());
    if (g.out(root).size() == n - 1 && m == n - 1) return Pattern::P7;
  }
  return Pattern::P8;
}

inline PatternLabel classify_structural(const ContagionChain& chain) {
  if (chain.node_count() < 2) {
    throw Error(ErrorCode::DegenerateChain, "n_nodes=" + std::to_string(chain.node_count()));
  }
  return PatternLabel::of(classify_structural(local_graph(chain)));
}

}  // namespace iconviz
