#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace hardy {

struct RadialValue {
  double u;
  double du;  // du/dr
};

/// A radial function u(r) evaluable on the open interval (r_min, r_max).
struct RadialProfile {
  std::function<RadialValue(double)> eval;
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
  std::string kind;

  RadialValue operator()(double r) const { return eval(r); }
  bool covers(double lo, double hi) const { return lo >= r_min && hi <= r_max; }
};

/// u ≡ 0 on (0, ∞).
RadialProfile zero_profile();

struct RadialSample {
  double r;
  double u;
  double du;
};

struct RadialSolution {
  std::vector<RadialSample> samples;  // r strictly increasing
  double lambda_fit = 0.0;            // limit of r^{ν₋} u(r) as r → 0
  double decay_slope_fit = 0.0;       // slope of ln u against ln r near 0
  RadialProfile profile;              // dense evaluator behind the samples
};

}  // namespace hardy
