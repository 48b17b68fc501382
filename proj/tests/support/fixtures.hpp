#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iconviz/ingest.hpp"

namespace iconviz::testing {

/// Dataset over ids `names` (exposure 0 unless given) with guarantee edges
/// given as (guarantor, borrower, amount).
inline Dataset make_dataset(const std::vector<std::string>& names,
                            const std::vector<std::tuple<std::string, std::string, std::int64_t>>& edges,
                            const std::vector<std::int64_t>& exposures = {}) {
  std::vector<Corporation> corps;
  for (std::size_t i = 0; i < names.size(); ++i) {
    Corporation c;
    c.id = names[i];
    c.business_type = "manufacturing";
    c.size_class = "small";
    c.registered_capital = Money::from_major(100);
    c.exposure = Money::from_major(i < exposures.size() ? exposures[i] : 0);
    corps.push_back(std::move(c));
  }
  auto index = [&](const std::string& id) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == id) return static_cast<NodeIndex>(i);
    }
    throw std::out_of_range(id);
  };
  std::vector<GuaranteeEdge> es;
  for (const auto& [g, b, amt] : edges) es.push_back({index(g), index(b), Money::from_major(amt)});
  return Dataset(std::move(corps), std::move(es));
}

/// Dataset whose contagion topology is exactly `contagion` (infector ->
/// infected) over nodes "n0".."n{k-1}", every edge amount 1.
inline Dataset contagion_dataset(std::size_t n,
                                 const std::vector<std::pair<std::uint32_t, std::uint32_t>>& contagion) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
  std::vector<std::tuple<std::string, std::string, std::int64_t>> edges;
  for (auto [u, v] : contagion) edges.emplace_back(names[v], names[u], 1);
  return make_dataset(names, edges);
}

}  // namespace iconviz::testing
