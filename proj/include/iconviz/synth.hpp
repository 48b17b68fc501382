#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iconviz/ingest.hpp"
#include "iconviz/patterns.hpp"
#include "iconviz/rng.hpp"

namespace iconviz::synth {

struct SizeRange {
  std::size_t min = 2;
  std::size_t max = 2;
};

/// Parameters in major currency units.
struct Financials {
  double exposure_mu = 12.5;  // log-normal: exp(12.5) ~ 270k
  double exposure_sigma = 1.0;
  double capital_mu = 14.0;
  double capital_sigma = 1.2;
  double zero_exposure_prob = 0.08;  // paid-off loans
  std::int64_t guarantee_min = 10'000;
  std::int64_t guarantee_max = 2'000'000;
};

enum class Mode { Isolated, Composite };

inline constexpr std::array<std::size_t, 8> kMinMotifNodes = {2, 3, 2, 3, 3, 4, 3, 4};

struct GeneratorSpec {
  std::uint64_t seed = 0;
  std::array<std::int64_t, 8> motif_counts{};
  std::array<SizeRange, 8> size_ranges = {{
      {2, 2}, {3, 8}, {2, 2}, {3, 8}, {3, 6}, {4, 10}, {3, 10}, {4, 12},
  }};
  Financials financials;
  Mode mode = Mode::Isolated;
  double composite_join_prob = 0.3;
};

inline void validate(const GeneratorSpec& spec) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidSpec, why); };
  for (auto p : kAllPatterns) {
    const auto i = index_of(p);
    const std::string name(to_string(p));
    if (spec.motif_counts[i] < 0) fail("negative count for " + name);
    const auto& r = spec.size_ranges[i];
    if (r.min < kMinMotifNodes[i]) fail("min_nodes below canonical minimum for " + name);
    if (r.max < r.min) fail("max_nodes < min_nodes for " + name);
    if ((p == Pattern::P1 || p == Pattern::P3) && r.max != 2) fail(name + " has exactly 2 nodes");
  }
  if (!(spec.composite_join_prob >= 0.0 && spec.composite_join_prob <= 1.0)) {
    fail("composite_join_prob outside [0, 1]");
  }
  const auto& f = spec.financials;
  if (!std::isfinite(f.exposure_mu) || !std::isfinite(f.capital_mu)) fail("non-finite mu");
  if (!(f.exposure_sigma >= 0.0) || !(f.capital_sigma >= 0.0)) fail("negative sigma");
  if (!(f.zero_exposure_prob >= 0.0 && f.zero_exposure_prob <= 1.0)) {
    fail("zero_exposure_prob outside [0, 1]");
  }
  if (f.guarantee_min <= 0 || f.guarantee_max < f.guarantee_min) fail("bad guarantee range");
}

inline GeneratorSpec spec_from_json(const nlohmann::json& j) {
  GeneratorSpec spec;
  try {
    if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "spec must be an object");
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mode")) {
      auto m = j.at("mode").get<std::string>();
      if (m == "isolated") {
        spec.mode = Mode::Isolated;
      } else if (m == "composite") {
        spec.mode = Mode::Composite;
      } else {
        throw Error(ErrorCode::InvalidSpec, "unknown mode " + m);
      }
    }
    if (j.contains("motif_counts")) {
      for (const auto& [key, value] : j.at("motif_counts").items()) {
        auto p = parse_pattern(key);
        if (!p) throw Error(ErrorCode::InvalidSpec, "unknown pattern " + key);
        spec.motif_counts[index_of(*p)] = value.get<std::int64_t>();
      }
    }
    if (j.contains("size_ranges")) {
      for (const auto& [key, value] : j.at("size_ranges").items()) {
        auto p = parse_pattern(key);
        if (!p) throw Error(ErrorCode::InvalidSpec, "unknown pattern " + key);
        auto lo = value.at(0).get<std::int64_t>();
        auto hi = value.at(1).get<std::int64_t>();
        if (lo < 0 || hi < 0) throw Error(ErrorCode::InvalidSpec, "negative size for " + key);
        spec.size_ranges[index_of(*p)] = {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
      }
    }
    if (j.contains("financials")) {
      const auto& f = j.at("financials");
      auto& d = spec.financials;
      d.exposure_mu = f.value("exposure_mu", d.exposure_mu);
      d.exposure_sigma = f.value("exposure_sigma", d.exposure_sigma);
      d.capital_mu = f.value("capital_mu", d.capital_mu);
      d.capital_sigma = f.value("capital_sigma", d.capital_sigma);
      d.zero_exposure_prob = f.value("zero_exposure_prob", d.zero_exposure_prob);
      d.guarantee_min = f.value("guarantee_min", d.guarantee_min);
      d.guarantee_max = f.value("guarantee_max", d.guarantee_max);
    }
    spec.composite_join_prob = j.value("composite_join_prob", spec.composite_join_prob);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, e.what());
  }
  validate(spec);
  return spec;
}

inline GeneratorSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidSpec, "cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, e.what());
  }
  return spec_from_json(j);
}

struct PlantedMotif {
  std::size_t motif_id = 0;
  Pattern pattern = Pattern::P1;
  std::vector<NodeIndex> nodes;  // ascending
};

struct GeneratedData {
  Dataset dataset;
  std::vector<PlantedMotif> motifs;
  Mode mode = Mode::Isolated;
};

/// Contagion-direction edges of one motif over local vertices 0..n-1.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> motif_edges(Pattern p, std::size_t n,
                                                                        Rng& rng) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  auto u32 = [](std::size_t x) { return static_cast<std::uint32_t>(x); };
  switch (p) {
    case Pattern::P1:
      e = {{0, 1}};
      break;
    case Pattern::P2:
      for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(u32(i), u32(i + 1));
      break;
    case Pattern::P3:
      e = {{0, 1}, {1, 0}};
      break;
    case Pattern::P4:
      // mutual pair with an outgoing path
      e = {{0, 1}, {1, 0}};
      for (std::size_t i = 1; i + 1 < n; ++i) e.emplace_back(u32(i), u32(i + 1));
      break;
    case Pattern::P5:
      for (std::size_t i = 0; i < n; ++i) e.emplace_back(u32(i), u32((i + 1) % n));
      break;
    case Pattern::P6: {
      auto loop = static_cast<std::size_t>(rng.uniform_int(3, static_cast<std::int64_t>(n) - 1));
      for (std::size_t i = 0; i < loop; ++i) e.emplace_back(u32(i), u32((i + 1) % loop));
      for (std::size_t i = loop; i < n; ++i) {
        e.emplace_back(u32(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1)), u32(i));
      }
      break;
    }
    case Pattern::P7:
      for (std::size_t i = 1; i < n; ++i) e.emplace_back(0u, u32(i));
      break;
    case Pattern::P8: {
      // out-tree: root with >= 2 branches and at least one node at depth 2
      auto branches = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(n) - 2));
      for (std::size_t i = 1; i <= branches; ++i) e.emplace_back(0u, u32(i));
      for (std::size_t i = branches + 1; i < n; ++i) {
        e.emplace_back(u32(rng.uniform_int(1, static_cast<std::int64_t>(i) - 1)), u32(i));
      }
      break;
    }
  }
  return e;
}

namespace detail {

inline const std::array<std::string, 8> kBusinessTypes = {
    "manufacturing", "wholesale", "retail", "construction",
    "services", "agriculture", "logistics", "technology"};
inline const std::array<std::string, 4> kSizeClasses = {"micro", "small", "medium", "large"};
inline constexpr std::array<double, 4> kSizeWeights = {0.30, 0.35, 0.25, 0.10};

inline Money major_to_money(double major) {
  return Money::from_minor(static_cast<std::int64_t>(std::llround(major * Money::kMinorPerMajor)));
}

inline Corporation make_corporation(std::size_t ordinal, const Financials& f, Rng& rng) {
  Corporation c;
  char id[16];
  std::snprintf(id, sizeof id, "C%07zu", ordinal);
  c.id = id;
  c.name = "Corporation " + std::to_string(ordinal);
  c.business_type = kBusinessTypes[rng.uniform_int(0, kBusinessTypes.size() - 1)];
  double u = rng.uniform();
  std::size_t s = 0;
  for (double acc = kSizeWeights[0]; s + 1 < kSizeClasses.size() && u >= acc;) acc += kSizeWeights[++s];
  c.size_class = kSizeClasses[s];
  c.registered_capital = major_to_money(rng.lognormal(f.capital_mu, f.capital_sigma));
  if (rng.bernoulli(f.zero_exposure_prob)) {
    c.exposure = Money{};
  } else {
    c.exposure = major_to_money(rng.lognormal(f.exposure_mu, f.exposure_sigma));
  }
  return c;
}

}  // namespace detail

/// Planted-motif dataset. In isolated mode every motif is its own network;
/// in composite mode motifs may be stitched together through fresh bridge
/// borrowers guaranteed by one node of each joined motif.
inline GeneratedData generate(const GeneratorSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  std::vector<Corporation> corps;
  std::vector<GuaranteeEdge> edges;
  std::vector<PlantedMotif> motifs;
  const auto& fin = spec.financials;

  auto amount = [&] { return Money::from_major(rng.uniform_int(fin.guarantee_min, fin.guarantee_max)); };

  std::optional<NodeIndex> open_bridge;
  for (auto p : kAllPatterns) {
    const auto i = index_of(p);
    for (std::int64_t m = 0; m < spec.motif_counts[i]; ++m) {
      const auto& range = spec.size_ranges[i];
      auto n = static_cast<std::size_t>(
          rng.uniform_int(static_cast<std::int64_t>(range.min), static_cast<std::int64_t>(range.max)));
      auto local = motif_edges(p, n, rng);

      // random labelling so the source is not always the first id
      std::vector<NodeIndex> perm(n);
      std::iota(perm.begin(), perm.end(), static_cast<NodeIndex>(corps.size()));
      for (std::size_t k = n; k > 1; --k) {
        std::swap(perm[k - 1], perm[rng.uniform_int(0, static_cast<std::int64_t>(k) - 1)]);
      }
      for (std::size_t k = 0; k < n; ++k) corps.push_back(detail::make_corporation(corps.size(), fin, rng));
      for (auto [u, v] : local) {
        // contagion u -> v is the guarantee v -> u
        edges.push_back({perm[v], perm[u], amount()});
      }
      PlantedMotif planted{motifs.size(), p, perm};
      std::sort(planted.nodes.begin(), planted.nodes.end());
      motifs.push_back(std::move(planted));

      if (spec.mode == Mode::Composite) {
        if (rng.bernoulli(spec.composite_join_prob)) {
          if (!open_bridge) {
            open_bridge = static_cast<NodeIndex>(corps.size());
            corps.push_back(detail::make_corporation(corps.size(), fin, rng));
          }
          auto guarantor = perm[rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)];
          edges.push_back({guarantor, *open_bridge, amount()});
        } else {
          open_bridge.reset();
        }
      }
    }
  }
  return {Dataset(std::move(corps), std::move(edges)), std::move(motifs), spec.mode};
}

inline nlohmann::json ground_truth_json(const GeneratedData& data) {
  nlohmann::json motifs = nlohmann::json::array();
  for (const auto& m : data.motifs) {
    nlohmann::json nodes = nlohmann::json::array();
    for (auto n : m.nodes) nodes.push_back(data.dataset.at(n).id);
    motifs.push_back({{"motif_id", m.motif_id},
                      {"pattern", std::string(to_string(m.pattern))},
                      {"nodes", std::move(nodes)}});
  }
  return {{"mode", data.mode == Mode::Isolated ? "isolated" : "composite"},
          {"labels_exact", data.mode == Mode::Isolated},
          {"motifs", std::move(motifs)}};
}

/// Writes nodes.csv, edges.csv and ground_truth.json into `dir`.
inline void write_generated(const std::filesystem::path& dir, const GeneratedData& data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, dir.string());
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, (dir / name).string());
    return out;
  };
  {
    auto out = open("nodes.csv");
    write_node_table(out, data.dataset);
  }
  {
    auto out = open("edges.csv");
    write_edge_table(out, data.dataset);
  }
  {
    auto out = open("ground_truth.json");
    out << ground_truth_json(data).dump(2) << '\n';
  }
}

struct ScaleReport {
  std::uint64_t motifs = 0;
  std::uint64_t min_nodes = 0;
  std::uint64_t max_nodes = 0;
  double expected_nodes = 0.0;
  double expected_networks = 0.0;
  double expected_bridges = 0.0;
  bool reference_scale = false;  // >= 20,000 corporations and >= 3,000 networks
};

inline ScaleReport scale_profile(const GeneratorSpec& spec) {
  validate(spec);
  ScaleReport r;
  for (auto p : kAllPatterns) {
    const auto i = index_of(p);
    const auto count = static_cast<std::uint64_t>(spec.motif_counts[i]);
    const auto& range = spec.size_ranges[i];
    r.motifs += count;
    r.min_nodes += count * range.min;
    r.max_nodes += count * range.max;
    r.expected_nodes += static_cast<double>(count) * static_cast<double>(range.min + range.max) / 2.0;
  }
  const double m = static_cast<double>(r.motifs);
  if (spec.mode == Mode::Isolated || r.motifs == 0) {
    r.expected_networks = m;
  } else {
    const double p = spec.composite_join_prob;
    // a bridge opens at a join that is first or follows a non-join
    r.expected_bridges = p + (m - 1) * (1 - p) * p;
    r.expected_networks = m * (1 - p) + r.expected_bridges;
    r.max_nodes += r.motifs;
    r.expected_nodes += r.expected_bridges;
  }
  r.reference_scale = r.expected_nodes >= 20000.0 && r.expected_networks >= 3000.0;
  return r;
}

}  // namespace iconviz::synth
