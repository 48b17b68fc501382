#pragma once

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "iconviz/bundle.hpp"

namespace iconviz {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Read-only routes over one immutable bundle. Pure: the same request
/// always yields the same response, so handlers may run concurrently.
class Api {
 public:
  /// Equal-width bins for the node-level histograms.
  static constexpr int kHistogramBins = 10;

  explicit Api(const AnalysisBundle& bundle) : b_(bundle) {}

  const std::string& config_hash() const { return b_.config_hash; }

  ApiResponse handle(std::string_view path, const QueryParams& query = {}) const {
    auto parts = split(path);
    if (parts.size() < 2 || parts[0] != "api") return not_found(path);
    if (parts[1] == "config" && parts.size() == 2) return {200, b_.config};
    if (parts[1] == "networks") {
      if (parts.size() == 2) return list_networks(query);
      auto id = parse_id(parts[2]);
      if (!id || *id >= b_.networks.size()) return not_found(path);
      auto net = static_cast<NetworkId>(*id);
      if (parts.size() == 3) return network_detail(net);
      if (parts.size() == 4 && parts[3] == "cem") return network_cem(net);
      if (parts.size() == 4 && parts[3] == "chains") return network_chains(net, query);
      if (parts.size() == 4 && parts[3] == "stats") return network_stats(net);
      return not_found(path);
    }
    if (parts[1] == "chains" && parts.size() == 3) {
      auto id = parse_id(parts[2]);
      if (!id || *id >= b_.chains.size()) return not_found(path);
      return {200, chain_record_to_json(b_.chains[*id], b_.dataset)};
    }
    return not_found(path);
  }

 private:
  static std::vector<std::string_view> split(std::string_view path) {
    std::vector<std::string_view> out;
    while (!path.empty()) {
      auto slash = path.find('/');
      auto part = path.substr(0, slash);
      if (!part.empty()) out.push_back(part);
      if (slash == std::string_view::npos) break;
      path.remove_prefix(slash + 1);
    }
    return out;
  }

  static std::optional<std::size_t> parse_id(std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  }

  static std::optional<std::string> param(const QueryParams& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end() || it->second.empty()) return std::nullopt;
    return it->second;
  }

  static ApiResponse error(int status, std::string message) {
    return {status, {{"error", std::move(message)}, {"status", status}}};
  }
  static ApiResponse not_found(std::string_view path) {
    return error(404, "not found: " + std::string(path));
  }

  ApiResponse list_networks(const QueryParams& q) const {
    std::vector<NetworkId> ids;
    auto sort = param(q, "sort").value_or("size");
    if (sort == "size") {
      ids = b_.display_order;
    } else if (sort == "id") {
      ids.resize(b_.networks.size());
      for (NetworkId i = 0; i < ids.size(); ++i) ids[i] = i;
    } else if (sort == "eda") {
      ids = b_.display_order;
      std::stable_sort(ids.begin(), ids.end(), [&](NetworkId a, NetworkId c) {
        return b_.profiles[a].score.eda > b_.profiles[c].score.eda;
      });
    } else {
      return error(400, "sort must be size, id or eda");
    }
    std::size_t offset = 0;
    std::size_t limit = ids.size();
    if (auto v = param(q, "offset")) {
      auto n = parse_id(*v);
      if (!n) return error(400, "offset must be a non-negative integer");
      offset = std::min(*n, ids.size());
    }
    if (auto v = param(q, "limit")) {
      auto n = parse_id(*v);
      if (!n) return error(400, "limit must be a non-negative integer");
      limit = *n;
    }
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = offset; i < ids.size() && i - offset < limit; ++i) {
      auto j = network_summary_json(b_, ids[i]);
      j.erase("cells");
      out.push_back(std::move(j));
    }
    return {200, std::move(out)};
  }

  ApiResponse network_detail(NetworkId id) const {
    const auto& net = b_.networks.network(id);
    const auto& ds = b_.dataset;
    nlohmann::json nodes = nlohmann::json::array();
    for (auto n : net.nodes) {
      const auto& c = ds.at(n);
      nodes.push_back({{"id", c.id},
                       {"name", c.name},
                       {"business_type", c.business_type},
                       {"size_class", c.size_class},
                       {"registered_capital", c.registered_capital.minor()},
                       {"exposure", c.exposure.minor()}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (auto e : net.edges) {
      const auto& edge = ds.edges()[e];
      edges.push_back({{"guarantor_id", ds.at(edge.guarantor).id},
                       {"borrower_id", ds.at(edge.borrower).id},
                       {"amount", edge.amount.minor()}});
    }
    auto j = network_summary_json(b_, id);
    j.erase("cells");
    j["nodes"] = std::move(nodes);
    j["edges"] = std::move(edges);
    return {200, std::move(j)};
  }

  ApiResponse network_cem(NetworkId id) const {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : cem_layout(b_.profiles.at(id).cells, b_.colors)) {
      cells.push_back({{"pattern", std::string(to_string(c.pattern))},
                       {"quadrant", std::string(to_string(c.quadrant))},
                       {"row", c.row},
                       {"col", c.col},
                       {"range_of_influence", c.range_of_influence},
                       {"open_ended", c.open_ended},
                       {"sub_letter", c.sub_letter ? std::string(1, c.sub_letter) : std::string()},
                       {"f", c.count},
                       {"v", c.max_influence},
                       {"effect", c.effect},
                       {"color", c.color},
                       {"muted", c.muted}});
    }
    return {200, {{"network_id", id}, {"count_anchor", "top-left"}, {"cells", std::move(cells)}}};
  }

  ApiResponse network_chains(NetworkId id, const QueryParams& q) const {
    std::optional<Pattern> pattern;
    std::optional<Quadrant> quadrant;
    if (auto v = param(q, "pattern")) {
      pattern = parse_pattern(*v);
      if (!pattern) return error(400, "pattern must be one of P1..P8");
    }
    if (auto v = param(q, "quadrant")) {
      quadrant = parse_quadrant(*v);
      if (!quadrant) return error(400, "quadrant must be one of QI..QIV");
    }
    nlohmann::json out = nlohmann::json::array();
    for (auto i : b_.chains_by_network.at(id)) {
      const auto& rec = b_.chains[i];
      if (pattern && rec.label.pattern != *pattern) continue;
      if (quadrant && rec.label.quadrant != *quadrant) continue;
      nlohmann::json sources = nlohmann::json::array();
      for (auto s : rec.chain.sources) sources.push_back(b_.dataset.at(s).id);
      out.push_back({{"chain_id", rec.chain.chain_id},
                     {"network_id", rec.chain.network_id},
                     {"pattern", std::string(to_string(rec.label.pattern))},
                     {"quadrant", std::string(to_string(rec.label.quadrant))},
                     {"cluster", rec.cluster},
                     {"n_nodes", rec.chain.node_count()},
                     {"n_edges", rec.chain.edge_count()},
                     {"exposure", rec.chain.exposure.minor()},
                     {"guarantee_amount", rec.chain.guarantee_amount.minor()},
                     {"sources", std::move(sources)}});
    }
    return {200, std::move(out)};
  }

  static nlohmann::json histogram(std::vector<std::int64_t> values) {
    nlohmann::json bins = nlohmann::json::array();
    if (values.empty()) return bins;
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const std::int64_t lo = *lo_it;
    const std::int64_t hi = *hi_it;
    const std::int64_t range = hi - lo;
    const int count = range == 0 ? 1 : kHistogramBins;
    std::vector<std::int64_t> tally(count, 0);
    for (auto v : values) {
      auto bin = range == 0 ? 0 : static_cast<int>((static_cast<__int128>(v - lo) * count) / range);
      ++tally[std::min(bin, count - 1)];
    }
    for (int i = 0; i < count; ++i) {
      auto edge = [&](int k) {
        return lo + static_cast<std::int64_t>((static_cast<__int128>(range) * k) / count);
      };
      bins.push_back({{"lo", edge(i)}, {"hi", range == 0 ? hi : edge(i + 1)}, {"count", tally[i]}});
    }
    return bins;
  }

  static nlohmann::json category_counts(const std::vector<std::string>& values) {
    std::map<std::string, std::size_t> counts;
    for (const auto& v : values) ++counts[v];
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [value, n] : counts) out.push_back({{"value", value}, {"count", n}});
    return out;
  }

  ApiResponse network_stats(NetworkId id) const {
    const auto& net = b_.networks.network(id);
    std::vector<std::int64_t> exposure, capital;
    std::vector<std::string> types, sizes;
    for (auto n : net.nodes) {
      const auto& c = b_.dataset.at(n);
      exposure.push_back(c.exposure.minor());
      capital.push_back(c.registered_capital.minor());
      types.push_back(c.business_type);
      sizes.push_back(c.size_class);
    }
    return {200,
            {{"network_id", id},
             {"node_count", net.node_count()},
             {"exposure", histogram(std::move(exposure))},
             {"registered_capital", histogram(std::move(capital))},
             {"business_type", category_counts(types)},
             {"size_class", category_counts(sizes)}}};
  }

  const AnalysisBundle& b_;
};

}  // namespace iconviz
