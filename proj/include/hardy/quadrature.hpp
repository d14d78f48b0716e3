#pragma once

// Composite 16-point Gauss–Legendre quadrature with panel doubling.
// Vector-valued so that related integrals share nodes.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace hardy::quad {

inline constexpr int kNodes = 16;

struct Rule {
  std::array<double, kNodes> x;  // on [−1, 1]
  std::array<double, kNodes> w;
};

inline const Rule& gauss_legendre_16() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, kNodes>;
    const auto& xs = G::abscissa();
    const auto& ws = G::weights();
    Rule r{};
    int k = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      r.x[k] = -xs[i];
      r.w[k++] = ws[i];
      r.x[k] = xs[i];
      r.w[k++] = ws[i];
    }
    return r;
  }();
  return rule;
}

struct Options {
  double rel_tol = 1e-10;
  int initial_panels = 8;
  int max_panels = 1 << 14;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <std::size_t K>
struct Result {
  std::array<double, K> value{};
  double error = 0.0;  // max component change at the final doubling
  int panels = 0;
};

/// Fixed composite rule with `panels` equal panels on [a, b].
template <std::size_t K, class F>
std::array<double, K> composite(F&& f, double a, double b, int panels) {
  const Rule& rule = gauss_legendre_16();
  std::array<double, K> sum{};
  const double h = (b - a) / panels;
  for (int j = 0; j < panels; ++j) {
    const double mid = a + (j + 0.5) * h;
    for (int k = 0; k < kNodes; ++k) {
      const std::array<double, K> y = f(mid + 0.5 * h * rule.x[k]);
      for (std::size_t c = 0; c < K; ++c) sum[c] += rule.w[k] * y[c];
    }
  }
  for (auto& s : sum) s *= 0.5 * h;
  return sum;
}

/// Doubles the panel count until no component changes by more than
/// rel_tol · Σ|components|. Throws QuadratureError past max_panels.
template <std::size_t K, class F>
Result<K> integrate(F&& f, double a, double b, const Options& opts = {}) {
  Result<K> out;
  if (a == b) return out;
  int panels = opts.initial_panels;
  std::array<double, K> prev = composite<K>(f, a, b, panels);
  while (panels < opts.max_panels) {
    panels *= 2;
    const std::array<double, K> next = composite<K>(f, a, b, panels);
    double change = 0.0, scale = 0.0;
    for (std::size_t c = 0; c < K; ++c) {
      change = std::fmax(change, std::fabs(next[c] - prev[c]));
      scale += std::fabs(next[c]);
    }
    if (!std::isfinite(change)) throw QuadratureError("quadrature: non-finite integrand");
    if (change <= opts.rel_tol * scale) {
      out.value = next;
      out.error = change;
      out.panels = panels;
      return out;
    }
    prev = next;
  }
  throw QuadratureError("quadrature: no convergence within " + std::to_string(opts.max_panels) + " panels");
}

template <class F>
double integrate_scalar(F&& f, double a, double b, const Options& opts = {}) {
  auto wrapped = [&](double x) { return std::array<double, 1>{f(x)}; };
  return integrate<1>(wrapped, a, b, opts).value[0];
}

}  // namespace hardy::quad
