#pragma once

// Small text helpers used by the CSV/JSON layer: shortest round-trip double
// formatting and strict double parsing.

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "essmei/errors.hpp"

namespace essmei {

// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;  // to_chars cannot fail with this buffer size
  return std::string(buf, ptr);
}

// Strict parse: the whole token must be a finite decimal number.
// Returns false on any garbage ("", "12x", "nan-ish junk", lone '-').
inline bool parse_double(std::string_view token, double& out) {
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Plain comma split. The grid schema has no quoted fields, so a quote-aware
// parser would only hide malformed input.
inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

}  // namespace essmei
