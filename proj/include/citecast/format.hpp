#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace citecast {

// Shortest round-trip decimal form; locale independent so CSV output is
// byte-stable.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace citecast
