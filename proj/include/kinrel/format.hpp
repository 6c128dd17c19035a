#ifndef KINREL_FORMAT_HPP
#define KINREL_FORMAT_HPP

#include <cstdio>
#include <string>

namespace kinrel {

/// Shortest-round-trip-safe text for a double: 17 significant digits.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace kinrel

#endif  // KINREL_FORMAT_HPP
