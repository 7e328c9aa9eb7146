#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace acker::csv {

// Quotes a field when it contains the delimiter, a quote or a newline;
// embedded quotes are doubled.
inline std::string escape(std::string_view field, char delimiter) {
  const bool needs_quotes =
      field.find_first_of(std::string{delimiter} + "\"\r\n") !=
      std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one physical line into fields, honoring double-quoted fields
// with doubled-quote escapes. Returns false on unbalanced quotes.
inline bool split_row(std::string_view line, char delimiter,
                      std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool quoted = false;
  size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delimiter) {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
    ++i;
  }
  if (quoted) return false;
  out.push_back(std::move(field));
  return true;
}

}  // namespace acker::csv
