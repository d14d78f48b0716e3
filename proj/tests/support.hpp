#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace testing {

/// Radical-inverse (van der Corput) sequence in the given prime base.
inline double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i > 0) {
    x += f * double(i % base);
    i /= base;
    f *= inv;
  }
  return x;
}

/// The i-th point of the Halton sequence in dimension d (bases 2, 3, 5, 7, 11).
inline double halton(std::uint64_t i, int d) {
  static constexpr unsigned bases[] = {2, 3, 5, 7, 11};
  return radical_inverse(i + 1, bases[d]);
}

/// Plain bisection, deliberately independent of the library's solver.
inline double oracle_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
}

}  // namespace testing
