#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

namespace kinoplan {

/// Canonical rendering of a real: fixed 4 decimal places, "-0.0000" collapsed to "0.0000".
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") {
    s = "0.0000";
  }
  return s;
}

/// Parses a real from the whole string (leading/trailing whitespace allowed).
inline std::optional<double> parse_real(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) {
    return std::nullopt;
  }
  while (*end == ' ' || *end == '\t' || *end == '\r' || *end == '\n') {
    ++end;
  }
  if (*end != '\0') {
    return std::nullopt;
  }
  return v;
}

/// The value v takes after one trip through the canonical 4-decimal rendering.
inline double quantize_real(double v) {
  return std::strtod(format_real(v).c_str(), nullptr);
}

}  // namespace kinoplan
