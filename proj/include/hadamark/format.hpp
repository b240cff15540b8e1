#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace hadamark {

/// Shortest decimal representation that round-trips the double; "inf" for
/// infinities. Keeps CSV output byte-stable without losing precision.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace hadamark
