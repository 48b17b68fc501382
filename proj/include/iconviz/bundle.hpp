#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "iconviz/config.hpp"
#include "iconviz/contagion.hpp"
#include "iconviz/features.hpp"
#include "iconviz/graph.hpp"
#include "iconviz/ingest.hpp"
#include "iconviz/patterns.hpp"
#include "iconviz/risk.hpp"
#include "iconviz/spectral.hpp"

namespace iconviz {

inline constexpr int kBundleFormatVersion = 1;

/// Stable 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct ChainRecord {
  ContagionChain chain;
  ChainFeatures features;
  PatternLabel label;                     // structural classifier
  int cluster = 0;                        // spectral cluster
  std::optional<Pattern> cluster_pattern; // cluster's majority structural pattern
};

struct AnalysisBundle {
  Dataset dataset;
  NetworkIndex networks;
  std::vector<NetworkId> display_order;
  std::vector<ChainRecord> chains;  // ordered by chain_id == position
  std::vector<std::vector<std::size_t>> chains_by_network;
  std::vector<NetworkRiskProfile> profiles;  // indexed by network_id
  RiskColors colors;
  nlohmann::json config;  // snapshot, includes "config_hash"
  std::string config_hash;
};

namespace detail {

inline nlohmann::json config_snapshot(const AnalysisConfig& cfg, const RiskColors& colors) {
  nlohmann::json j;
  j["format_version"] = kBundleFormatVersion;
  j["k"] = cfg.k ? nlohmann::json(*cfg.k) : nlohmann::json("auto");
  j["sigma"] = cfg.sigma ? nlohmann::json(*cfg.sigma) : nlohmann::json("auto");
  j["seed"] = cfg.seed;
  j["standardize"] = cfg.standardize;
  j["spectral_max_points"] = cfg.spectral_max_points;
  j["kmeans"] = {{"restarts", cfg.kmeans.restarts},
                 {"max_iterations", cfg.kmeans.max_iterations},
                 {"tolerance", cfg.kmeans.tolerance}};
  const auto& t = cfg.tol;
  j["tolerances"] = {{"zero_variance", t.zero_variance},
                     {"zero_eigenvalue", t.zero_eigenvalue},
                     {"eigensolver", t.eigensolver},
                     {"laplacian_row_sum", t.laplacian_row_sum},
                     {"negative_eigenvalue", t.negative_eigenvalue},
                     {"kmeans_shift", t.kmeans_shift},
                     {"share_sum", t.share_sum}};
  nlohmann::json qcolors = nlohmann::json::object();
  for (auto q : kAllQuadrants) {
    qcolors[std::string(to_string(q))] = {{"color", colors.by_quadrant[index_of(q)]},
                                          {"level", colors.level_by_quadrant[index_of(q)]}};
  }
  j["risk_colors"] = std::move(qcolors);
  return j;
}

inline std::string table_text(const Dataset& ds, bool nodes) {
  std::ostringstream out;
  if (nodes) {
    write_node_table(out, ds);
  } else {
    write_edge_table(out, ds);
  }
  return out.str();
}

}  // namespace detail

/// ingest output -> networks -> chains -> features/labels/clusters -> risk.
inline AnalysisBundle analyze(Dataset ds, const AnalysisConfig& cfg = {}, const RiskColors& colors = {}) {
  AnalysisBundle b;
  b.colors = colors;
  b.networks = build_networks(ds);
  b.display_order = sort_networks(b.networks);

  auto chains = extract_all_chains(b.networks, ds);
  b.chains.reserve(chains.size());
  std::vector<ChainFeatures> features;
  std::vector<Pattern> structural;
  features.reserve(chains.size());
  structural.reserve(chains.size());
  for (auto& c : chains) {
    ChainRecord rec;
    rec.features = compute_features(c);
    rec.label = classify_structural(c);
    features.push_back(rec.features);
    structural.push_back(rec.label.pattern);
    rec.chain = std::move(c);
    b.chains.push_back(std::move(rec));
  }

  auto spectral = cluster_features(features, cfg);
  ClusterAlignment alignment;
  if (!b.chains.empty()) {
    alignment = align_clusters(spectral.assignments, structural, spectral.k);
  }
  for (std::size_t i = 0; i < b.chains.size(); ++i) {
    b.chains[i].cluster = spectral.assignments[i];
    b.chains[i].cluster_pattern = alignment.mapping.at(spectral.assignments[i]);
  }

  b.chains_by_network.assign(b.networks.size(), {});
  std::vector<std::vector<LabeledChain>> labeled(b.networks.size());
  for (std::size_t i = 0; i < b.chains.size(); ++i) {
    const auto& rec = b.chains[i];
    b.chains_by_network[rec.chain.network_id].push_back(i);
    labeled[rec.chain.network_id].push_back({rec.chain.node_count(), rec.label.pattern});
  }
  b.profiles = risk_profiles(b.networks, ds, labeled, colors);

  auto config = detail::config_snapshot(cfg, colors);
  config["k_effective"] = spectral.k;
  config["sigma_effective"] = spectral.sigma;
  config["distinct_feature_rows"] = spectral.distinct_points;
  config["embedded_feature_rows"] = spectral.embedded_points;
  nlohmann::json mapping = nlohmann::json::array();
  for (const auto& m : alignment.mapping) {
    mapping.push_back(m ? nlohmann::json(std::string(to_string(*m))) : nlohmann::json(nullptr));
  }
  config["cluster_alignment"] = {{"agreement", alignment.agreement},
                                 {"mapping", std::move(mapping)},
                                 {"warnings", alignment.warnings}};
  config["counts"] = {{"corporations", ds.size()},
                      {"guarantee_edges", ds.edges().size()},
                      {"networks", b.networks.size()},
                      {"chains", b.chains.size()}};
  config["inputs"] = {{"nodes_fnv1a", fnv1a_hex(detail::table_text(ds, true))},
                      {"edges_fnv1a", fnv1a_hex(detail::table_text(ds, false))}};
  b.config_hash = fnv1a_hex(config.dump());
  config["config_hash"] = b.config_hash;
  b.config = std::move(config);
  b.dataset = std::move(ds);
  return b;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json features_to_json(const ChainFeatures& f) {
  return {{"n", f.n_nodes},
          {"e", f.n_edges},
          {"density", f.density},
          {"avg_clustering", f.avg_clustering},
          {"avg_path_len", f.avg_path_length}};
}

inline ChainFeatures features_from_json(const nlohmann::json& j) {
  return {j.at("n").get<std::size_t>(), j.at("e").get<std::size_t>(), j.at("density").get<double>(),
          j.at("avg_clustering").get<double>(), j.at("avg_path_len").get<double>()};
}

inline nlohmann::json chain_record_to_json(const ChainRecord& rec, const Dataset& ds) {
  auto j = chain_to_json(rec.chain, ds);
  j["features"] = features_to_json(rec.features);
  j["pattern"] = std::string(to_string(rec.label.pattern));
  j["quadrant"] = std::string(to_string(rec.label.quadrant));
  j["cluster"] = rec.cluster;
  j["cluster_pattern"] = rec.cluster_pattern ? nlohmann::json(std::string(to_string(*rec.cluster_pattern)))
                                             : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json cells_to_json(const std::array<PatternRiskCell, 8>& cells) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : cells) {
    out.push_back({{"pattern", std::string(to_string(c.pattern))},
                   {"f", c.frequency},
                   {"v", c.max_influence},
                   {"effect", c.effect}});
  }
  return out;
}

inline nlohmann::json network_summary_json(const AnalysisBundle& b, NetworkId id) {
  const auto& net = b.networks.network(id);
  const auto& p = b.profiles.at(id);
  return {{"network_id", id},
          {"node_count", net.node_count()},
          {"edge_count", net.edge_count()},
          {"chain_count", b.chains_by_network.at(id).size()},
          {"eda", p.score.eda.minor()},
          {"cells", cells_to_json(p.cells)},
          {"pq", p.score.pq},
          {"slices", p.badge.slices},
          {"ring_only", p.badge.ring_only},
          {"radius_rel", p.badge.radius_rel}};
}

inline nlohmann::json chains_document(const AnalysisBundle& b) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& rec : b.chains) out.push_back(chain_record_to_json(rec, b.dataset));
  return out;
}

inline nlohmann::json networks_document(const AnalysisBundle& b) {
  nlohmann::json out = nlohmann::json::array();
  for (NetworkId id = 0; id < b.networks.size(); ++id) out.push_back(network_summary_json(b, id));
  return out;
}

/// Bundle layout: nodes.csv, edges.csv (canonical tables), chains.json,
/// networks.json, config.json. Rewriting the same bundle is byte-identical.
inline void write_bundle(const std::filesystem::path& dir, const AnalysisBundle& b) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, dir.string());
  auto write_text = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, (dir / name).string());
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, (dir / name).string());
  };
  write_text("nodes.csv", detail::table_text(b.dataset, true));
  write_text("edges.csv", detail::table_text(b.dataset, false));
  write_json_file((dir / "chains.json").string(), chains_document(b));
  write_json_file((dir / "networks.json").string(), networks_document(b));
  write_json_file((dir / "config.json").string(), b.config);
}

namespace detail {

inline nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::BundleLoadFailure, "missing " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BundleLoadFailure, path.string() + ": " + e.what());
  }
}

}  // namespace detail

inline AnalysisBundle load_bundle(const std::filesystem::path& dir) {
  AnalysisBundle b;
  try {
    b.dataset = load_dataset((dir / "nodes.csv").string(), (dir / "edges.csv").string());
    b.networks = build_networks(b.dataset);
    b.display_order = sort_networks(b.networks);
    b.config = detail::read_json(dir / "config.json");
    b.config_hash = b.config.at("config_hash").get<std::string>();
    for (auto q : kAllQuadrants) {
      const auto& entry = b.config.at("risk_colors").at(std::string(to_string(q)));
      b.colors.by_quadrant[index_of(q)] = entry.at("color").get<std::string>();
      b.colors.level_by_quadrant[index_of(q)] = entry.at("level").get<std::string>();
    }

    auto chains = detail::read_json(dir / "chains.json");
    b.chains_by_network.assign(b.networks.size(), {});
    for (const auto& j : chains) {
      ChainRecord rec;
      rec.chain = chain_from_json(j, b.dataset);
      rec.features = features_from_json(j.at("features"));
      auto pattern = parse_pattern(j.at("pattern").get<std::string>());
      if (!pattern) throw Error(ErrorCode::BundleLoadFailure, "bad pattern");
      rec.label = PatternLabel::of(*pattern);
      rec.cluster = j.at("cluster").get<int>();
      if (!j.at("cluster_pattern").is_null()) {
        rec.cluster_pattern = parse_pattern(j.at("cluster_pattern").get<std::string>());
      }
      if (rec.chain.chain_id != b.chains.size() || rec.chain.network_id >= b.networks.size()) {
        throw Error(ErrorCode::BundleLoadFailure, "chain ids out of order");
      }
      b.chains_by_network[rec.chain.network_id].push_back(b.chains.size());
      b.chains.push_back(std::move(rec));
    }

    auto networks = detail::read_json(dir / "networks.json");
    if (networks.size() != b.networks.size()) {
      throw Error(ErrorCode::BundleLoadFailure, "networks.json does not match the tables");
    }
    b.profiles.resize(b.networks.size());
    for (const auto& j : networks) {
      auto id = j.at("network_id").get<NetworkId>();
      if (id >= b.networks.size()) throw Error(ErrorCode::BundleLoadFailure, "bad network_id");
      auto& p = b.profiles[id];
      p.network_id = id;
      const auto& cells = j.at("cells");
      for (std::size_t i = 0; i < 8; ++i) {
        auto& c = p.cells[i];
        c.pattern = kAllPatterns[i];
        c.frequency = cells.at(i).at("f").get<std::uint64_t>();
        c.max_influence = cells.at(i).at("v").get<std::uint64_t>();
        c.effect = cells.at(i).at("effect").get<std::uint64_t>();
      }
      p.score.eda = Money::from_minor(j.at("eda").get<std::int64_t>());
      p.score.pq = j.at("pq").get<std::array<double, 4>>();
      for (std::size_t q = 0; q < 4; ++q) {
        p.score.quadrant_counts[q] = p.cells[2 * q].frequency + p.cells[2 * q + 1].frequency;
      }
      p.badge.radius_rel = j.at("radius_rel").get<double>();
      p.badge.slices = j.at("slices").get<std::array<double, 4>>();
      p.badge.ring_only = j.at("ring_only").get<bool>();
      p.badge.colors = b.colors.by_quadrant;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BundleLoadFailure) throw;
    throw Error(ErrorCode::BundleLoadFailure, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BundleLoadFailure, e.what());
  }
  return b;
}

}  // namespace iconviz
