#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace iconviz::csv {

struct Record {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;

  bool blank() const { return fields.size() == 1 && fields[0].empty(); }
};

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and
/// newlines. CRLF line endings are accepted.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::optional<Record> next() {
    if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;
    Record rec;
    rec.line = line_;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (;;) {
      int c = in_.get();
      if (c == std::char_traits<char>::eof()) {
        rec.fields.push_back(std::move(field));
        return rec;
      }
      char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field += '"';
          } else {
            quoted = false;
          }
        } else {
          if (ch == '\n') ++line_;
          field += ch;
        }
        continue;
      }
      if (ch == '"' && field.empty() && !was_quoted) {
        quoted = true;
        was_quoted = true;
      } else if (ch == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (ch == '\n') {
        ++line_;
        if (!field.empty() && field.back() == '\r' && !was_quoted) field.pop_back();
        rec.fields.push_back(std::move(field));
        return rec;
      } else {
        field += ch;
      }
    }
  }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline void write_field(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    write_field(out, fields[i]);
  }
  out << '\n';
}

}  // namespace iconviz::csv
