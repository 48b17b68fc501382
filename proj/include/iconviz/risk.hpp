#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iconviz/graph.hpp"
#include "iconviz/patterns.hpp"

namespace iconviz {

/// f_i, v_i and E_i = f_i * v_i for one pattern within one network.
struct PatternRiskCell {
  Pattern pattern = Pattern::P1;
  std::uint64_t frequency = 0;      // merged chain instances
  std::uint64_t max_influence = 0;  // max over instances of (n_nodes - 1)
  std::uint64_t effect = 0;
};

/// What pattern_cells needs to know about a chain.
struct LabeledChain {
  std::size_t n_nodes = 0;
  Pattern pattern = Pattern::P1;
};

inline std::array<PatternRiskCell, 8> pattern_cells(std::span<const LabeledChain> chains) {
  std::array<PatternRiskCell, 8> cells;
  for (auto p : kAllPatterns) cells[index_of(p)].pattern = p;
  for (const auto& c : chains) {
    auto& cell = cells[index_of(c.pattern)];
    ++cell.frequency;
    std::uint64_t infected_others = c.n_nodes > 0 ? c.n_nodes - 1 : 0;
    cell.max_influence = std::max(cell.max_influence, infected_others);
  }
  for (auto& cell : cells) cell.effect = cell.frequency * cell.max_influence;
  return cells;
}

struct ContagionScore {
  Money eda;
  std::array<std::uint64_t, 4> quadrant_counts{};
  std::array<double, 4> pq{};  // instance share per quadrant QI..QIV
};

inline ContagionScore contagion_score(const GuaranteeNetwork& net, const Dataset& ds,
                                      const std::array<PatternRiskCell, 8>& cells) {
  ContagionScore score;
  for (auto node : net.nodes) score.eda += ds.at(node).exposure;
  std::uint64_t total = 0;
  for (const auto& cell : cells) {
    score.quadrant_counts[index_of(quadrant_of(cell.pattern))] += cell.frequency;
    total += cell.frequency;
  }
  if (total > 0) {
    for (std::size_t q = 0; q < 4; ++q) {
      score.pq[q] = static_cast<double>(score.quadrant_counts[q]) / static_cast<double>(total);
    }
  }
  return score;
}

/// Quadrant colors, configurable; the default reads the quadrant prose as
/// QIII high (red), QIV middle (orange), QII low (yellow), QI safe (green).
struct RiskColors {
  std::array<std::string, 4> by_quadrant = {"#1a9850", "#fee08b", "#d73027", "#fc8d59"};
  std::array<std::string, 4> level_by_quadrant = {"safe", "low", "high", "middle"};
};

inline const std::string& risk_color(Quadrant q, const RiskColors& colors = {}) {
  return colors.by_quadrant[index_of(q)];
}

struct BadgeGeometry {
  double radius_rel = 0.0;
  std::array<double, 4> slices{};  // degrees, QI..QIV
  std::array<std::string, 4> colors;
  bool ring_only = true;  // no chains: outline only
};

inline BadgeGeometry badge_geometry(const ContagionScore& score, Money global_max_eda,
                                    const RiskColors& colors = {}) {
  if (global_max_eda.minor() <= 0) {
    throw Error(ErrorCode::NoExposureAnywhere, "global max EDA is 0");
  }
  BadgeGeometry badge;
  badge.radius_rel = static_cast<double>(score.eda.minor()) /
                     static_cast<double>(global_max_eda.minor());
  double share = 0.0;
  for (std::size_t q = 0; q < 4; ++q) {
    badge.slices[q] = score.pq[q] * 360.0;
    badge.colors[q] = colors.by_quadrant[q];
    share += score.pq[q];
  }
  badge.ring_only = share == 0.0;
  return badge;
}

/// One cell of the Contagion Effect Matrix. The range-of-influence
/// coordinate is the pattern's canonical node count; vulnerability is the
/// instance count. Quadrants sit Cartesian-style: QII | QI on top,
/// QIII | QIV below.
struct CemCell {
  Pattern pattern = Pattern::P1;
  Quadrant quadrant = Quadrant::QI;
  int row = 0;
  int col = 0;
  std::uint64_t range_of_influence = 0;
  bool open_ended = false;  // pattern admits any larger node count
  char sub_letter = 0;      // tells apart patterns sharing a node count, or 0
  std::uint64_t count = 0;
  std::uint64_t max_influence = 0;
  std::uint64_t effect = 0;
  std::string color;
  bool muted = true;  // count == 0
};

inline constexpr std::array<std::uint64_t, 8> kCanonicalNodeCount = {2, 3, 2, 3, 3, 4, 3, 4};

inline std::array<CemCell, 8> cem_layout(const std::array<PatternRiskCell, 8>& cells,
                                         const RiskColors& colors = {}) {
  struct Slot {
    int row, col;
    bool open;
    char letter;
  };
  constexpr std::array<Slot, 8> slots = {{
      {0, 2, false, 'a'},  // P1
      {0, 3, true, 'a'},   // P2
      {0, 0, false, 'b'},  // P3
      {0, 1, true, 'b'},   // P4
      {1, 0, false, 'c'},  // P5
      {1, 1, true, 0},     // P6
      {1, 2, true, 0},     // P7
      {1, 3, true, 0},     // P8
  }};
  std::array<CemCell, 8> out;
  for (auto p : kAllPatterns) {
    const auto i = index_of(p);
    auto& c = out[i];
    c.pattern = p;
    c.quadrant = quadrant_of(p);
    c.row = slots[i].row;
    c.col = slots[i].col;
    c.range_of_influence = kCanonicalNodeCount[i];
    c.open_ended = slots[i].open;
    c.sub_letter = slots[i].letter;
    c.count = cells[i].frequency;
    c.max_influence = cells[i].max_influence;
    c.effect = cells[i].effect;
    c.color = risk_color(c.quadrant, colors);
    c.muted = c.count == 0;
  }
  return out;
}

struct NetworkRiskProfile {
  NetworkId network_id = 0;
  std::array<PatternRiskCell, 8> cells;
  ContagionScore score;
  BadgeGeometry badge;
};

/// Profiles for every network; `labels` groups chains per network id.
inline std::vector<NetworkRiskProfile> risk_profiles(
    const NetworkIndex& idx, const Dataset& ds,
    const std::vector<std::vector<LabeledChain>>& labels_by_network,
    const RiskColors& colors = {}) {
  std::vector<NetworkRiskProfile> out(idx.size());
  Money max_eda;
  for (const auto& net : idx.networks()) {
    auto& p = out[net.network_id];
    p.network_id = net.network_id;
    p.cells = pattern_cells(labels_by_network.at(net.network_id));
    p.score = contagion_score(net, ds, p.cells);
    max_eda = std::max(max_eda, p.score.eda);
  }
  for (auto& p : out) {
    if (max_eda.minor() > 0) {
      p.badge = badge_geometry(p.score, max_eda, colors);
    } else {
      // nothing is exposed: keep slices, radius stays 0
      p.badge.radius_rel = 0.0;
      double share = 0.0;
      for (std::size_t q = 0; q < 4; ++q) {
        p.badge.slices[q] = p.score.pq[q] * 360.0;
        p.badge.colors[q] = colors.by_quadrant[q];
        share += p.score.pq[q];
      }
      p.badge.ring_only = share == 0.0;
    }
  }
  return out;
}

}  // namespace iconviz
