#pragma once

#include <atomic>
#include <chrono>
#include <string>
#include <thread>

#include <httplib.h>

#include "iconviz/api.hpp"

namespace iconviz {

inline constexpr const char* kConfigHashHeader = "X-Bundle-Config-Hash";

/// Registers the read-only API routes on `server`.
inline void mount_api(httplib::Server& server, const Api& api) {
  server.Get(R"(/api(/.*)?)", [&api](const httplib::Request& req, httplib::Response& res) {
    QueryParams query(req.params.begin(), req.params.end());
    auto out = api.handle(req.path, query);
    res.status = out.status;
    res.set_header(kConfigHashHeader, api.config_hash());
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(out.body.dump(), "application/json; charset=utf-8");
  });
  server.set_error_handler([&api](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    nlohmann::json body = {{"error", "not found: " + req.path}, {"status", res.status}};
    res.set_header(kConfigHashHeader, api.config_hash());
    res.set_content(body.dump(), "application/json; charset=utf-8");
  });
}

/// Serves until `stop` becomes true. Returns false when the port cannot be
/// bound.
inline bool serve_blocking(const Api& api, const std::string& host, int port,
                           const std::atomic<bool>& stop) {
  httplib::Server server;
  // httplib also sets SO_REUSEPORT, which would let a second server share a
  // busy port silently; keep only SO_REUSEADDR.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  server.set_tcp_nodelay(true);
  mount_api(server, api);
  if (!server.bind_to_port(host, port)) return false;
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!stop.load() && !done.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  server.listen_after_bind();
  done = true;
  watcher.join();
  return true;
}

}  // namespace iconviz
