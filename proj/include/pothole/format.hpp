#pragma once

#include <cstdio>
#include <string>

namespace pothole {

/// Shortest-unambiguous-enough decimal: 17 significant digits, so reruns diff exactly.
inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace pothole
