#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace iconviz {

/// Currency amount in integer minor units (1/100 of the major unit).
/// Sums stay exact; conversion to floating point happens only for ratios.
class Money {
 public:
  static constexpr std::int64_t kMinorPerMajor = 100;

  constexpr Money() = default;
  static constexpr Money from_minor(std::int64_t minor) { return Money(minor); }
  static constexpr Money from_major(std::int64_t major) {
    return Money(major * kMinorPerMajor);
  }

  constexpr std::int64_t minor() const { return minor_; }
  constexpr double major() const {
    return static_cast<double>(minor_) / kMinorPerMajor;
  }

  constexpr Money& operator+=(Money other) {
    minor_ += other.minor_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr auto operator<=>(Money, Money) = default;

  /// Parses `123`, `123.4`, `123.45`, `-7` with at most two decimals.
  static std::optional<Money> parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
      negative = text.front() == '-';
      text.remove_prefix(1);
    }
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac =
        dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
    if (frac.size() > 2) return std::nullopt;
    std::int64_t major = 0;
    if (!whole.empty() && !parse_digits(whole, major)) return std::nullopt;
    std::int64_t cents = 0;
    if (!frac.empty()) {
      if (!parse_digits(frac, cents)) return std::nullopt;
      if (frac.size() == 1) cents *= 10;
    }
    if (major > (INT64_MAX - cents) / kMinorPerMajor) return std::nullopt;
    std::int64_t minor = major * kMinorPerMajor + cents;
    return Money(negative ? -minor : minor);
  }

  /// Canonical text: integer part, plus `.cc` only when cents are nonzero.
  std::string to_string() const {
    std::int64_t abs = minor_ < 0 ? -minor_ : minor_;
    std::string out = minor_ < 0 ? "-" : "";
    out += std::to_string(abs / kMinorPerMajor);
    std::int64_t cents = abs % kMinorPerMajor;
    if (cents != 0) {
      out += '.';
      out += static_cast<char>('0' + cents / 10);
      out += static_cast<char>('0' + cents % 10);
    }
    return out;
  }

 private:
  constexpr explicit Money(std::int64_t minor) : minor_(minor) {}

  static bool parse_digits(std::string_view digits, std::int64_t& out) {
    for (char c : digits) {
      if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), out);
    return ec == std::errc{} && ptr == digits.data() + digits.size();
  }

  std::int64_t minor_ = 0;
};

}  // namespace iconviz
