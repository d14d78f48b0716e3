#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace hardy {

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace hardy
