#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iconviz/csv.hpp"
#include "iconviz/error.hpp"
#include "iconviz/money.hpp"

namespace iconviz {

/// Dense position of a corporation within its Dataset.
using NodeIndex = std::uint32_t;

struct Corporation {
  std::string id;
  std::string name;
  std::string business_type;
  std::string size_class;
  Money registered_capital;
  Money exposure;  // outstanding unpaid debt (EAD share)

  friend bool operator==(const Corporation&, const Corporation&) = default;
};

/// `guarantor` guarantees the loan of `borrower`. Contagion runs the other
/// way: a borrower's default infects its guarantors.
struct GuaranteeEdge {
  NodeIndex guarantor = 0;
  NodeIndex borrower = 0;
  Money amount;

  friend bool operator==(const GuaranteeEdge&, const GuaranteeEdge&) = default;
};

struct Provenance {
  std::string node_path;
  std::string edge_path;
  std::chrono::system_clock::time_point ingested_at{};
};

/// Counts for the "never silently drop rows" contract: every data line read
/// is either a returned row, a merged duplicate, or a warning.
struct ParseLog {
  std::size_t lines_read = 0;
  std::vector<std::string> warnings;
};

class Dataset {
 public:
  Dataset() = default;

  /// Builds a dataset from already-validated parts. Edges are canonicalized
  /// (merged per ordered pair, sorted by guarantor then borrower index).
  Dataset(std::vector<Corporation> corporations, std::vector<GuaranteeEdge> edges,
          Provenance provenance = {})
      : corporations_(std::move(corporations)), provenance_(std::move(provenance)) {
    index_.reserve(corporations_.size());
    for (NodeIndex i = 0; i < corporations_.size(); ++i) {
      if (!index_.emplace(corporations_[i].id, i).second) {
        throw Error(ErrorCode::DuplicateId, corporations_[i].id);
      }
    }
    edges_ = merge_edges(std::move(edges), nullptr);
    for (const auto& e : edges_) {
      if (e.guarantor >= corporations_.size()) {
        throw Error(ErrorCode::UnknownEndpoint, std::to_string(e.guarantor));
      }
      if (e.borrower >= corporations_.size()) {
        throw Error(ErrorCode::UnknownEndpoint, std::to_string(e.borrower));
      }
      if (e.guarantor == e.borrower) {
        throw Error(ErrorCode::SelfLoop, corporations_[e.guarantor].id);
      }
    }
  }

  const std::vector<Corporation>& corporations() const { return corporations_; }
  const std::vector<GuaranteeEdge>& edges() const { return edges_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return corporations_.size(); }

  const Corporation& at(NodeIndex i) const { return corporations_.at(i); }

  std::optional<NodeIndex> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Sums duplicate ordered pairs and sorts by (guarantor, borrower).
  static std::vector<GuaranteeEdge> merge_edges(std::vector<GuaranteeEdge> edges,
                                                std::vector<std::pair<NodeIndex, NodeIndex>>* merged) {
    std::map<std::pair<NodeIndex, NodeIndex>, Money> sums;
    for (const auto& e : edges) {
      auto [it, inserted] = sums.try_emplace({e.guarantor, e.borrower}, e.amount);
      if (!inserted) {
        it->second += e.amount;
        if (merged) merged->push_back(it->first);
      }
    }
    std::vector<GuaranteeEdge> out;
    out.reserve(sums.size());
    for (const auto& [key, amount] : sums) out.push_back({key.first, key.second, amount});
    return out;
  }

  /// Field-for-field equality; provenance is not part of the data.
  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.corporations_ == b.corporations_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Corporation> corporations_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<GuaranteeEdge> edges_;
  Provenance provenance_;
};

namespace detail {

inline std::map<std::string, std::size_t> header_columns(const csv::Record& header) {
  std::map<std::string, std::size_t> cols;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    cols.emplace(std::string(csv::trim(header.fields[i])), i);
  }
  return cols;
}

inline std::size_t require_column(const std::map<std::string, std::size_t>& cols,
                                  const std::string& name) {
  auto it = cols.find(name);
  if (it == cols.end()) throw Error(ErrorCode::MissingColumn, name);
  return it->second;
}

inline std::string row_tag(std::size_t line) { return "row " + std::to_string(line); }

inline Money parse_amount(const csv::Record& rec, std::size_t col, const std::string& name) {
  auto text = csv::trim(rec.fields[col]);
  auto value = Money::parse(text);
  if (!value) {
    throw Error(ErrorCode::MalformedNumber, row_tag(rec.line) + ", " + name);
  }
  return *value;
}

inline std::ifstream open_table(const std::string& path, const char* what) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::FileNotFound, path, std::string(what) + " not found: " + path);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, path);
  return in;
}

}  // namespace detail

inline std::vector<Corporation> parse_node_table(std::istream& in, ParseLog* log = nullptr) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw Error(ErrorCode::MissingColumn, "id");
  auto cols = detail::header_columns(*header);
  const std::size_t c_id = detail::require_column(cols, "id");
  const std::size_t c_type = detail::require_column(cols, "business_type");
  const std::size_t c_size = detail::require_column(cols, "size_class");
  const std::size_t c_cap = detail::require_column(cols, "registered_capital");
  const std::size_t c_exp = detail::require_column(cols, "exposure");
  std::optional<std::size_t> c_name;
  if (auto it = cols.find("name"); it != cols.end()) c_name = it->second;

  std::vector<Corporation> out;
  std::unordered_map<std::string, std::size_t> seen;
  while (auto rec = reader.next()) {
    if (log) ++log->lines_read;
    if (rec->blank()) {
      if (log) log->warnings.push_back(detail::row_tag(rec->line) + ": blank line skipped");
      continue;
    }
    if (rec->fields.size() != header->fields.size()) {
      throw Error(ErrorCode::MalformedRow, detail::row_tag(rec->line));
    }
    Corporation corp;
    corp.id = std::string(csv::trim(rec->fields[c_id]));
    if (corp.id.empty()) throw Error(ErrorCode::MalformedRow, detail::row_tag(rec->line));
    if (c_name) corp.name = std::string(csv::trim(rec->fields[*c_name]));
    corp.business_type = std::string(csv::trim(rec->fields[c_type]));
    corp.size_class = std::string(csv::trim(rec->fields[c_size]));
    corp.registered_capital = detail::parse_amount(*rec, c_cap, "registered_capital");
    corp.exposure = detail::parse_amount(*rec, c_exp, "exposure");
    if (corp.registered_capital.minor() < 0 || corp.exposure.minor() < 0) {
      throw Error(ErrorCode::NegativeAmount, detail::row_tag(rec->line));
    }
    if (!seen.emplace(corp.id, out.size()).second) {
      throw Error(ErrorCode::DuplicateId, corp.id);
    }
    out.push_back(std::move(corp));
  }
  return out;
}

inline std::vector<Corporation> parse_node_table(const std::string& path, ParseLog* log = nullptr) {
  auto in = detail::open_table(path, "node table");
  return parse_node_table(in, log);
}

/// Edges are validated against `corporations` and merged per ordered pair.
inline std::vector<GuaranteeEdge> parse_edge_table(std::istream& in,
                                                   const std::vector<Corporation>& corporations,
                                                   ParseLog* log = nullptr) {
  std::unordered_map<std::string_view, NodeIndex> index;
  index.reserve(corporations.size());
  for (NodeIndex i = 0; i < corporations.size(); ++i) index.emplace(corporations[i].id, i);

  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw Error(ErrorCode::MissingColumn, "guarantor_id");
  auto cols = detail::header_columns(*header);
  const std::size_t c_g = detail::require_column(cols, "guarantor_id");
  const std::size_t c_b = detail::require_column(cols, "borrower_id");
  const std::size_t c_amt = detail::require_column(cols, "amount");

  auto lookup = [&](std::string_view id) {
    auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::UnknownEndpoint, std::string(id));
    return it->second;
  };

  std::vector<GuaranteeEdge> raw;
  while (auto rec = reader.next()) {
    if (log) ++log->lines_read;
    if (rec->blank()) {
      if (log) log->warnings.push_back(detail::row_tag(rec->line) + ": blank line skipped");
      continue;
    }
    if (rec->fields.size() != header->fields.size()) {
      throw Error(ErrorCode::MalformedRow, detail::row_tag(rec->line));
    }
    auto g_id = csv::trim(rec->fields[c_g]);
    auto b_id = csv::trim(rec->fields[c_b]);
    if (g_id == b_id) throw Error(ErrorCode::SelfLoop, std::string(g_id));
    GuaranteeEdge edge{lookup(g_id), lookup(b_id),
                       detail::parse_amount(*rec, c_amt, "amount")};
    if (edge.amount.minor() <= 0) {
      throw Error(ErrorCode::NonPositiveAmount, detail::row_tag(rec->line));
    }
    raw.push_back(edge);
  }
  std::vector<std::pair<NodeIndex, NodeIndex>> merged;
  auto edges = Dataset::merge_edges(std::move(raw), &merged);
  if (log) {
    for (auto [g, b] : merged) {
      log->warnings.push_back("merged duplicate edge " + corporations[g].id + "->" +
                              corporations[b].id);
    }
  }
  return edges;
}

inline std::vector<GuaranteeEdge> parse_edge_table(const std::string& path,
                                                   const std::vector<Corporation>& corporations,
                                                   ParseLog* log = nullptr) {
  auto in = detail::open_table(path, "edge table");
  return parse_edge_table(in, corporations, log);
}

inline Dataset load_dataset(const std::string& node_path, const std::string& edge_path,
                            ParseLog* log = nullptr) {
  // Both files must exist before either is parsed so the error names the
  // missing table rather than a downstream parse failure.
  auto node_in = detail::open_table(node_path, "node table");
  auto edge_in = detail::open_table(edge_path, "edge table");
  auto corps = parse_node_table(node_in, log);
  auto edges = parse_edge_table(edge_in, corps, log);
  return Dataset(std::move(corps), std::move(edges),
                 Provenance{node_path, edge_path, std::chrono::system_clock::now()});
}

struct ValidationReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t isolated = 0;
  std::vector<std::string> warnings;
};

inline ValidationReport validate_dataset(const Dataset& ds) {
  ValidationReport report;
  report.nodes = ds.size();
  report.edges = ds.edges().size();
  std::vector<bool> touched(ds.size(), false);
  for (const auto& e : ds.edges()) {
    touched[e.guarantor] = true;
    touched[e.borrower] = true;
  }
  report.isolated = static_cast<std::size_t>(std::count(touched.begin(), touched.end(), false));
  for (const auto& c : ds.corporations()) {
    if (c.business_type.empty()) report.warnings.push_back(c.id + ": empty business_type");
    if (c.size_class.empty()) report.warnings.push_back(c.id + ": empty size_class");
  }
  return report;
}

inline void write_node_table(std::ostream& out, const Dataset& ds) {
  csv::write_row(out, {"id", "name", "business_type", "size_class", "registered_capital", "exposure"});
  for (const auto& c : ds.corporations()) {
    csv::write_row(out, {c.id, c.name, c.business_type, c.size_class,
                         c.registered_capital.to_string(), c.exposure.to_string()});
  }
}

inline void write_edge_table(std::ostream& out, const Dataset& ds) {
  csv::write_row(out, {"guarantor_id", "borrower_id", "amount"});
  for (const auto& e : ds.edges()) {
    csv::write_row(out, {ds.at(e.guarantor).id, ds.at(e.borrower).id, e.amount.to_string()});
  }
}

}  // namespace iconviz
