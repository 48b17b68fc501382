#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "support/schema.hpp"

namespace iconviz::testing {

/// Schema files keyed by name, loaded once from `dir`.
class ApiSchemas {
 public:
  explicit ApiSchemas(const std::filesystem::path& dir) {
    for (const char* name : {"error", "config", "networks-list", "network-detail", "cem", "chains-list",
                             "chain-record", "stats", "networks-document", "chains-document"}) {
      schemas_.emplace(name, SchemaValidator::from_file(dir / (std::string(name) + ".schema.json")));
    }
  }

  const SchemaValidator& get(const std::string& name) const { return schemas_.at(name); }

  /// Schema name for a successful response on `path`.
  static std::string for_path(const std::string& path) {
    auto q = path.find('?');
    std::string p = path.substr(0, q);
    std::vector<std::string> parts;
    std::size_t start = 1;
    while (start <= p.size()) {
      auto slash = p.find('/', start);
      parts.push_back(p.substr(start, slash - start));
      if (slash == std::string::npos) break;
      start = slash + 1;
    }
    if (parts.size() == 2 && parts[1] == "config") return "config";
    if (parts.size() == 2 && parts[1] == "networks") return "networks-list";
    if (parts.size() == 3 && parts[1] == "networks") return "network-detail";
    if (parts.size() == 4 && parts[3] == "cem") return "cem";
    if (parts.size() == 4 && parts[3] == "chains") return "chains-list";
    if (parts.size() == 4 && parts[3] == "stats") return "stats";
    if (parts.size() == 3 && parts[1] == "chains") return "chain-record";
    return "error";
  }

  std::vector<std::string> check(const std::string& path, int status, const nlohmann::json& body) const {
    return get(status == 200 ? for_path(path) : "error").validate(body);
  }

 private:
  std::map<std::string, SchemaValidator> schemas_;
};

}  // namespace iconviz::testing
