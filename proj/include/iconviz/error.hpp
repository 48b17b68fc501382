#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iconviz {

enum class ErrorCode {
  // ingest
  FileNotFound,
  MissingColumn,
  DuplicateId,
  NegativeAmount,
  MalformedNumber,
  MalformedRow,
  UnknownEndpoint,
  SelfLoop,
  NonPositiveAmount,
  // contagion / analytics
  UnknownNode,
  DegenerateChain,
  TooFewChains,
  EigensolverFailure,
  InvalidK,
  // risk
  NoExposureAnywhere,
  // synth / bundle
  InvalidSpec,
  IoFailure,
  BundleLoadFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::NegativeAmount: return "NegativeAmount";
    case ErrorCode::MalformedNumber: return "MalformedNumber";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::NonPositiveAmount: return "NonPositiveAmount";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DegenerateChain: return "DegenerateChain";
    case ErrorCode::TooFewChains: return "TooFewChains";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::NoExposureAnywhere: return "NoExposureAnywhere";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::BundleLoadFailure: return "BundleLoadFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library. `detail()` carries the offending
/// id, column name, or row number so callers can report it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail, const std::string& message)
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  Error(ErrorCode code, std::string detail)
      : Error(code, detail,
              std::string(to_string(code)) + "(" + detail + ")") {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace iconviz
