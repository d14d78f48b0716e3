#include "hardy/regions.hpp"

#include <cmath>

#include "hardy/format.hpp"

namespace hardy {

namespace {

double scale_of(double bound) { return std::fmax(1.0, std::fabs(bound)); }

// Non-strict comparisons relax by tol, strict ones tighten by tol.
bool ge(double x, double bound, double tol) { return x >= bound - tol * scale_of(bound); }
bool le(double x, double bound, double tol) { return x <= bound + tol * scale_of(bound); }
bool gt(double x, double bound, double tol) { return x > bound + tol * scale_of(bound); }
bool lt(double x, double bound, double tol) { return x < bound - tol * scale_of(bound); }

bool near(double x, double bound, double band) { return std::fabs(x - bound) <= band * scale_of(bound); }

bool in_lower_mu_band(int N, double l, double mu, double tol) {
  if (!has_lower_branch(N, l) || mu > 0) return false;
  const double ms = mu_star(N, l);
  return ge(mu, ms, tol);
}

PlusMinus clamped_plus_minus(int N, double l, double mu) {
  return p_plus_minus(std::fmax(mu, mu_star(N, l)), N, l);
}

}  // namespace

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Unstable: return "Unstable";
    case Region::Stable: return "Stable";
    case Region::Unknown: return "Unknown";
    case Region::Invalid: return "Invalid";
    case Region::Boundary: return "Boundary";
  }
  return "?";
}

Exponent upper_exponent(int N, double mu, double l) {
  if (mu <= 0) return Exponent::infinite();
  return Exponent::finite((l + 2) / nu_minus(N, mu) + 1);
}

bool membership_S(const Parameters& params, double tol) {
  const int N = params.N();
  const double l = params.l(), mu = params.mu(), p = params.p();
  if (mu > 0) {
    const double pc = p_critical(N, l, mu).value();
    const double upper = upper_exponent(N, mu, l).value();
    return ge(p, pc, tol) && lt(p, upper, tol);
  }
  if (!in_lower_mu_band(N, l, mu, tol)) return false;
  const PlusMinus pm = clamped_plus_minus(N, l, mu);
  return ge(p, pm.p_minus, tol) && (pm.p_plus.is_infinite() || le(p, pm.p_plus.value(), tol));
}

bool sigma_lower_inequality(const Parameters& params, double tol) {
  const DerivedConstants c = derive(params);
  const double floor = c.L_pow - c.A * c.A / (4 * (params.p() - 1));
  return ge(params.mu(), floor, tol);
}

bool membership_Sigma(const Parameters& params, double tol) {
  const DerivedConstants c = derive(params);
  const double mu = params.mu();
  return gt(params.p(), c.sobolev_p, tol) && lt(mu, c.L_pow, tol) && sigma_lower_inequality(params, tol);
}

CurveValues curves_at(int N, double l, double mu) {
  CurveValues out{mu, p_critical(N, l, mu), std::nullopt, std::nullopt, std::nullopt};
  if (mu > 0) {
    out.upper = upper_exponent(N, mu, l);
  } else if (has_lower_branch(N, l) && mu >= mu_star(N, l)) {
    const PlusMinus pm = p_plus_minus(mu, N, l);
    out.p_minus = pm.p_minus;
    out.p_plus = pm.p_plus;
  }
  return out;
}

bool near_boundary(int N, double l, double mu, double p, double band) {
  if (std::fabs(mu) <= band) return true;
  if (has_lower_branch(N, l) && near(mu, mu_star(N, l), band)) return true;
  if (near(p, sobolev_exponent(N, l), band)) return true;

  const CurveValues cv = curves_at(N, l, mu);
  if (cv.p_c.is_finite() && near(p, cv.p_c.value(), band)) return true;
  if (cv.p_minus && near(p, *cv.p_minus, band)) return true;
  if (cv.p_plus && cv.p_plus->is_finite() && near(p, cv.p_plus->value(), band)) return true;
  if (cv.upper && cv.upper->is_finite() && near(p, cv.upper->value(), band)) return true;

  if (p > 1) {
    const double a = (l + 2) / (p - 1);
    const double L = a * (N - 2 - a);
    const double A = N - 2 - 2 * a;
    if (near(mu, L, band) || near(mu, L - A * A / (4 * (p - 1)), band)) return true;
  }
  return false;
}

RegionLabel classify(int N, double l, double mu, double p, double tol) {
  if (N < 3) return {Region::Invalid, "N_below_3"};
  if (!(l > -2)) return {Region::Invalid, "l_not_above_minus_2"};
  if (!(mu < mu_bar(N))) return {Region::Invalid, "mu_not_below_mu_bar"};
  if (!(p >= kMinExponent)) return {Region::Invalid, "p_not_above_1"};

  const CurveValues cv = curves_at(N, l, mu);
  if (cv.p_c.is_finite() && near(p, cv.p_c.value(), tol)) return {Region::Boundary, "p_c"};
  if (cv.p_minus && near(p, *cv.p_minus, tol)) return {Region::Boundary, "p_minus"};
  if (cv.p_plus && cv.p_plus->is_finite() && near(p, cv.p_plus->value(), tol)) return {Region::Boundary, "p_plus"};
  if (cv.upper && near(p, cv.upper->value(), tol)) return {Region::Boundary, "upper"};

  if (cv.p_c.above(p)) return {Region::Unstable, "below_p_c"};

  const Parameters params(N, l, mu, p);
  if (membership_S(params, tol)) return {Region::Stable, "in_S"};

  if (has_lower_branch(N, l) && mu < 0) {
    if (mu < mu_star(N, l)) return {Region::Unknown, "mu_below_mu_star"};
    if (cv.p_minus && p < *cv.p_minus) return {Region::Unknown, "between_p_c_and_p_minus"};
    return {Region::Unknown, "above_p_plus"};
  }
  // μ > 0 and p ≥ (l+2)/ν₋ + 1: no positive solution; not a stability region.
  return {Region::Unknown, "above_upper_bound"};
}

void SweepGrid::validate() const {
  if (auto v = Parameters::violation(N, l, -1.0)) throw InvalidParameters(*v);
  auto check = [](const Range& r, const char* name) {
    if (r.count < 1) throw InvalidParameters(std::string(name) + " count must be >= 1");
    if (!(r.lo <= r.hi) || (r.count > 1 && !(r.lo < r.hi)))
      throw InvalidParameters(std::string(name) + " range requires lo < hi");
  };
  check(mu, "mu");
  check(p, "p");
  if (!(mu.hi < mu_bar(N)))
    throw InvalidParameters("mu range upper end must be < (N-2)^2/4 = " + format_number(mu_bar(N)));
}

SweepResult sweep(const SweepGrid& grid) {
  grid.validate();
  SweepResult out{grid, {}, {}};
  out.curves.reserve(grid.mu.count);
  for (int j = 0; j < grid.mu.count; ++j) out.curves.push_back(curves_at(grid.N, grid.l, grid.mu.at(j)));

  out.cells.reserve(static_cast<std::size_t>(grid.mu.count) * grid.p.count);
  for (int i = 0; i < grid.p.count; ++i) {
    const double p = grid.p.at(i);
    for (int j = 0; j < grid.mu.count; ++j) {
      const double mu = grid.mu.at(j);
      out.cells.push_back({mu, p, classify(grid.N, grid.l, mu, p)});
    }
  }
  return out;
}

}  // namespace hardy
