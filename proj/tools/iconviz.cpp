// iconviz: analyze guarantee networks, generate synthetic datasets, and
// serve analyzed bundles over HTTP.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "iconviz/bundle.hpp"
#include "iconviz/server.hpp"
#include "iconviz/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBind = 3;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

void configure_logging() {
  const char* level = std::getenv("ICONVIZ_LOG");
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::info);
}

int run_analyze(const std::string& nodes, const std::string& edges, const std::string& out,
                const std::string& k, const std::string& sigma, std::uint64_t seed) {
  iconviz::AnalysisConfig cfg;
  cfg.seed = seed;
  if (k == "auto") {
    cfg.k.reset();
  } else {
    try {
      cfg.k = std::stoi(k);
    } catch (const std::exception&) {
      spdlog::error("--k must be an integer or 'auto'");
      return kExitInput;
    }
    if (*cfg.k < 1) {
      spdlog::error("--k must be positive");
      return kExitInput;
    }
  }
  if (sigma != "auto") {
    try {
      cfg.sigma = std::stod(sigma);
    } catch (const std::exception&) {
      spdlog::error("--sigma must be a number or 'auto'");
      return kExitInput;
    }
    if (!(*cfg.sigma > 0.0)) {
      spdlog::error("--sigma must be positive");
      return kExitInput;
    }
  }
  try {
    iconviz::ParseLog log;
    auto ds = iconviz::load_dataset(nodes, edges, &log);
    for (const auto& w : log.warnings) spdlog::debug("ingest: {}", w);
    auto report = iconviz::validate_dataset(ds);
    spdlog::info("ingested {} corporations, {} guarantee edges ({} isolated)", report.nodes,
                 report.edges, report.isolated);
    for (const auto& w : report.warnings) spdlog::warn("{}", w);
    auto bundle = iconviz::analyze(std::move(ds), cfg);
    iconviz::write_bundle(out, bundle);
    spdlog::info("{} networks, {} chains, k={} -> {}", bundle.networks.size(), bundle.chains.size(),
                 bundle.config.at("k_effective").get<int>(), out);
  } catch (const iconviz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

int run_generate(const std::string& spec_path, const std::string& out,
                 std::optional<std::uint64_t> seed) {
  try {
    auto spec = iconviz::synth::load_spec(spec_path);
    if (seed) spec.seed = *seed;
    auto data = iconviz::synth::generate(spec);
    iconviz::synth::write_generated(out, data);
    spdlog::info("generated {} corporations, {} edges, {} motifs -> {}", data.dataset.size(),
                 data.dataset.edges().size(), data.motifs.size(), out);
  } catch (const iconviz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

int run_profile(const std::string& spec_path) {
  try {
    auto r = iconviz::synth::scale_profile(iconviz::synth::load_spec(spec_path));
    nlohmann::json j = {{"motifs", r.motifs},
                        {"min_nodes", r.min_nodes},
                        {"max_nodes", r.max_nodes},
                        {"expected_nodes", r.expected_nodes},
                        {"expected_networks", r.expected_networks},
                        {"expected_bridges", r.expected_bridges},
                        {"reference_scale", r.reference_scale}};
    std::cout << j.dump(2) << '\n';
  } catch (const iconviz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

int run_serve(const std::string& data, const std::string& host, int port) {
  iconviz::AnalysisBundle bundle;
  try {
    bundle = iconviz::load_bundle(data);
  } catch (const iconviz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  iconviz::Api api(bundle);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  spdlog::info("serving {} networks on http://{}:{}", bundle.networks.size(), host, port);
  if (!iconviz::serve_blocking(api, host, port, g_stop)) {
    std::cerr << "error: cannot bind " << host << ":" << port << '\n';
    return kExitBind;
  }
  spdlog::info("shut down");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Contagion-chain analytics for guarantee networks"};
  app.require_subcommand(1);

  std::string nodes, edges, out, k = "8", sigma = "auto";
  std::uint64_t seed = 0;
  auto* analyze = app.add_subcommand("analyze", "Analyze node/edge tables into a bundle");
  analyze->add_option("--nodes", nodes, "Node table (CSV)")->required();
  analyze->add_option("--edges", edges, "Edge table (CSV)")->required();
  analyze->add_option("--out", out, "Bundle directory")->required();
  analyze->add_option("--k", k, "Cluster count, or 'auto'")->capture_default_str();
  analyze->add_option("--sigma", sigma, "Gaussian bandwidth, or 'auto'")->capture_default_str();
  analyze->add_option("--seed", seed, "k-means seed")->capture_default_str();

  std::string spec_path, gen_out;
  std::optional<std::uint64_t> gen_seed;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic dataset");
  generate->add_option("--spec", spec_path, "Generator spec (JSON)")->required();
  generate->add_option("--out", gen_out, "Output directory")->required();
  generate->add_option("--seed", gen_seed, "Seed (overrides the spec)");

  std::string profile_spec;
  auto* profile = app.add_subcommand("profile", "Predict dataset scale for a generator spec");
  profile->add_option("--spec", profile_spec, "Generator spec (JSON)")->required();

  std::string data, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve a bundle over HTTP");
  serve->add_option("--data", data, "Bundle directory")->required();
  serve->add_option("--port", port, "Port")->capture_default_str();
  serve->add_option("--host", host, "Host")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  if (*analyze) return run_analyze(nodes, edges, out, k, sigma, seed);
  if (*generate) return run_generate(spec_path, gen_out, gen_seed);
  if (*profile) return run_profile(profile_spec);
  if (*serve) return run_serve(data, host, port);
  return kExitInput;
}
