#pragma once

#include <charconv>
#include <string>

namespace shc {

// Shortest representation that round-trips; "nan"/"inf" for non-finite values.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

}  // namespace shc
