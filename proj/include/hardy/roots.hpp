#pragma once

#include <cmath>
#include <stdexcept>

namespace hardy {

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bisection on [lo, hi] for a continuous f with a sign change.
/// Stops when the bracket is narrower than rel_tol·max(|lo|,|hi|).
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol, int max_iter = 400) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi))
    throw BracketError("bisect: root not bracketed");

  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::fmax(std::fabs(lo), std::fabs(hi)) || mid == lo || mid == hi)
      return mid;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace hardy
