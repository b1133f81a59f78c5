#pragma once

// Small string helpers shared by the spec parsers.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "ergoshift/error.hpp"

namespace ergoshift::detail {

inline std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(trim_view(s.substr(pos, next == s.npos ? s.npos : next - pos)));
    if (next == s.npos) break;
    pos = next + 1;
  }
  return out;
}

inline double parse_double(std::string_view s) {
  s = trim_view(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("invalid number '" + std::string(s) + "'");
  return value;
}

template <class Int>
Int parse_integer(std::string_view s) {
  s = trim_view(s);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("invalid integer '" + std::string(s) + "'");
  return value;
}

inline std::string format_double(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace ergoshift::detail
