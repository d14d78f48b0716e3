#include "hardy/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hardy/format.hpp"
#include "hardy/roots.hpp"
#include "hardy/stability.hpp"

namespace hardy {

namespace {

// Quintic smoothstep S(x) = x³(10 − 15x + 6x²) and its first two derivatives.
std::array<double, 3> smoothstep(double x) {
  const double s = x * x * x * (10 - 15 * x + 6 * x * x);
  const double ds = 30 * x * x * (1 - x) * (1 - x);
  const double d2s = 60 * x * (1 - x) * (1 - 2 * x);
  return {s, ds, d2s};
}

void require_gamma(const Parameters& params, double gamma) {
  const double gm = gamma_max(params);
  if (!(gamma >= 1 && gamma < gm))
    throw std::invalid_argument("gamma must lie in [1, gamma_M) = [1, " + format_number(gm) + "), got " +
                                format_number(gamma));
}

void require_cover(const RadialProfile& u, double lo, double hi) {
  if (!u.covers(lo, hi))
    throw std::out_of_range("profile defined on [" + format_number(u.r_min) + ", " + format_number(u.r_max) +
                            "] does not cover [" + format_number(lo) + ", " + format_number(hi) + "]");
}

// r^{N−1}(|(|u|^{(γ−1)/2}u)′|² + rˡ|u|^{p+γ}); the integrand of the stable-solution estimate.
double estimate_density(const RadialProfile& u, const Parameters& params, double gamma, double r) {
  const RadialValue v = u(r);
  const double au = std::fabs(v.u);
  const double g = 0.5 * (gamma + 1) * std::pow(au, 0.5 * (gamma - 1)) * v.du;
  return std::pow(r, params.N() - 1) * (g * g + std::pow(r, params.l()) * std::pow(au, params.p() + gamma));
}

// ∫_a^b f(r) dr computed in t = ln r.
template <class F>
double integrate_log(F&& f, double a, double b, const quad::Options& opts) {
  if (!(b > a)) return 0.0;
  return quad::integrate_scalar(
      [&](double t) {
        const double r = std::exp(t);
        return f(r) * r;
      },
      std::log(a), std::log(b), opts);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::array<double, 3> CutoffFunction::at(double r) const {
  const double x = r / R;
  if (x <= 1) return {1.0, 0.0, 0.0};
  if (x >= 2) return {0.0, 0.0, 0.0};
  const auto [s, ds, d2s] = smoothstep(x - 1);
  return {1 - s, -ds / R, -d2s / (R * R)};
}

int CutoffFunction::minimal_power(double p, double gamma) {
  return static_cast<int>(std::ceil(std::fmax((p + gamma) / (p - 1), 2.0)));
}

AlphaBeta alpha_beta(const Parameters& params, double gamma) {
  const double mu = params.mu();
  if (!(mu > 0)) throw std::domain_error("alpha/beta are defined for mu > 0 only (got mu=" + format_number(mu) + ")");
  const double q = (gamma + 1) * (gamma + 1) / (4 * gamma);
  const double alpha = mu_bar(params.N()) / mu - q;
  const double beta = params.p() - q - (gamma - 1) * (gamma - 1) * (gamma + 1) * (gamma + 1) / (16 * gamma * gamma * alpha);
  return {alpha, beta};
}

double nonpositive_mu_coefficient(double p, double gamma) { return p - (gamma + 1) * (gamma + 1) / (4 * gamma); }

EstimateReport verify_prop31(const RadialProfile& u, const Parameters& params, double gamma,
                             const CutoffFunction& cutoff, const quad::Options& opts) {
  require_gamma(params, gamma);
  const int N = params.N();
  const double l = params.l(), p = params.p();
  const double R = cutoff.R;
  if (!(R > 0)) throw std::invalid_argument("cutoff radius must be > 0");
  const int m_floor = CutoffFunction::minimal_power(p, gamma);
  if (cutoff.m < m_floor)
    throw std::invalid_argument("cutoff power m=" + std::to_string(cutoff.m) + " below its floor " +
                                std::to_string(m_floor));
  require_cover(u, u.r_min, 2 * R);

  const double omega = sphere_area(N);
  const double r_lo = u.r_min > 0 ? u.r_min : 2 * R * std::exp(-100.0);

  auto lhs_density = [&](double r) {
    const double psi = cutoff.at(r)[0];
    return estimate_density(u, params, gamma, r) * std::pow(psi, 2 * cutoff.m);
  };
  const double lhs = omega * (integrate_log(lhs_density, r_lo, std::fmax(r_lo, R), opts) +
                              integrate_log(lhs_density, std::fmax(r_lo, R), 2 * R, opts));

  // ψΔψ changes sign inside (R, 2R); split there so each piece is smooth.
  const double power = (p + gamma) / (p - 1);
  const double weight = (gamma + 1) * l / (1 - p);
  auto laplacian = [&](double r) {
    const auto [psi, d1, d2] = cutoff.at(r);
    return d2 + (N - 1) * d1 / r;
  };
  auto rhs_density = [&](double r) {
    const auto [psi, d1, d2] = cutoff.at(r);
    const double lap = d2 + (N - 1) * d1 / r;
    return std::pow(r, weight + N - 1) * std::pow(d1 * d1 + std::fabs(psi * lap), power);
  };
  std::vector<double> cuts{R};
  constexpr int kScan = 200;
  double prev_r = R * (1 + 1e-12), prev_v = laplacian(prev_r);
  for (int i = 1; i <= kScan; ++i) {
    const double r = R * (1 + double(i) / kScan * (1 - 1e-12));
    const double v = laplacian(r);
    if (std::signbit(v) != std::signbit(prev_v) && v != 0 && prev_v != 0)
      cuts.push_back(bisect(laplacian, prev_r, r, 1e-15));
    prev_r = r;
    prev_v = v;
  }
  cuts.push_back(2 * R);
  double rhs = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) rhs += integrate_log(rhs_density, cuts[i], cuts[i + 1], opts);
  rhs *= omega;

  EstimateReport rep{};
  rep.R = R;
  rep.gamma = gamma;
  rep.m = cutoff.m;
  rep.lhs = lhs;
  rep.rhs_integral = rhs;
  rep.fitted_constant = lhs / rhs;
  if (params.mu() > 0) {
    const AlphaBeta ab = alpha_beta(params, gamma);
    rep.alpha = ab.alpha;
    rep.beta = ab.beta;
  }
  return rep;
}

EstimateSweep verify_prop31_sweep(const RadialProfile& u, const Parameters& params, double gamma,
                                  const std::vector<double>& radii, int m) {
  if (radii.empty()) throw std::invalid_argument("radius sweep is empty");
  const int power = m > 0 ? m : CutoffFunction::minimal_power(params.p(), gamma);
  EstimateSweep out{};
  for (double R : radii) out.reports.push_back(verify_prop31(u, params, gamma, {R, power}));
  bool finite = true;
  for (const auto& r : out.reports) finite = finite && std::isfinite(r.fitted_constant);
  out.final_growth_slope = 0.0;
  if (out.reports.size() >= 2) {
    const auto& a = out.reports[out.reports.size() - 2];
    const auto& b = out.reports.back();
    if (a.fitted_constant > 0 && b.fitted_constant > 0)
      out.final_growth_slope = std::log(b.fitted_constant / a.fitted_constant) / std::log(b.R / a.R);
  }
  out.bounded = finite && out.final_growth_slope < 0.1;
  return out;
}

double scaling_exponent(const Parameters& params, double gamma) {
  const double l = params.l(), p = params.p();
  return params.N() - ((gamma + 1) * l + 2 * (p + gamma)) / (p - 1);
}

double scaling_exponent_infimum(const Parameters& params) { return scaling_exponent(params, gamma_max(params)); }

AnnulusReport annulus_growth(const RadialProfile& u, const Parameters& params, double gamma,
                             const std::vector<double>& radii, const quad::Options& opts) {
  if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");
  if (radii.size() < 3) throw std::invalid_argument("annulus growth needs at least three radii");
  if (!(radii.front() > 0)) throw std::invalid_argument("radii must be positive");
  const double ratio = radii[1] / radii[0];
  if (!(ratio > 1)) throw std::invalid_argument("radii must be increasing");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (std::fabs(radii[k] / radii[k - 1] - ratio) > 1e-9 * ratio)
      throw std::invalid_argument("radii must be geometric");
  require_cover(u, radii.front(), radii.back());

  const double omega = sphere_area(params.N());
  AnnulusReport rep{};
  rep.radii = radii;
  rep.exponent = scaling_exponent(params, gamma);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
    const double s = omega * integrate_log([&](double r) { return estimate_density(u, params, gamma, r); },
                                           radii[k], radii[k + 1], opts);
    total += s;
    rep.shell_integrals.push_back(s);
    rep.nested_integrals.push_back(total);
  }

  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < rep.shell_integrals.size(); ++k) {
    if (rep.shell_integrals[k] > 0) {
      lx.push_back(std::log(radii[k]));
      ly.push_back(std::log(rep.shell_integrals[k]));
    }
  }
  if (lx.size() >= 2) rep.fitted_rate = least_squares_slope(lx, ly);

  const std::size_t n = rep.shell_integrals.size();
  const double s_prev = rep.shell_integrals[n - 2], s_last = rep.shell_integrals[n - 1];
  if (s_prev > 0 && s_last > 0) {
    rep.tail_rate = std::log(s_last / s_prev) / std::log(ratio);
    rep.envelope_pass = rep.tail_rate <= rep.exponent + 0.05 * std::fmax(1.0, std::fabs(rep.exponent));
  } else {
    rep.tail_rate = std::nan("");
    rep.envelope_pass = s_last <= 0 || s_prev > 0;
  }

  // nested_k ≈ c1 + c2 r_{k+1}^e, non-negative least squares over two unknowns.
  double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::pow(radii[k + 1], rep.exponent), y = rep.nested_integrals[k];
    s1 += 1;
    sx += x;
    sxx += x * x;
    sy += y;
    sxy += x * y;
  }
  const double det = s1 * sxx - sx * sx;
  double c1 = det != 0 ? (sy * sxx - sx * sxy) / det : sy / s1;
  double c2 = det != 0 ? (s1 * sxy - sx * sy) / det : 0.0;
  if (c1 < 0) {
    c1 = 0;
    c2 = sxx > 0 ? std::fmax(0.0, sxy / sxx) : 0.0;
  } else if (c2 < 0) {
    c2 = 0;
    c1 = std::fmax(0.0, sy / s1);
  }
  rep.c1 = c1;
  rep.c2 = c2;
  return rep;
}

double pohozaev_boundary_term(const RadialProfile& u, const Parameters& params, double r) {
  const int N = params.N();
  const double p = params.p();
  const RadialValue v = u(r);
  return sphere_area(N) * (0.5 * std::pow(r, N) * v.du * v.du + 0.5 * params.mu() * std::pow(r, N - 2) * v.u * v.u +
                           std::pow(r, N + params.l()) * std::pow(std::fabs(v.u), p + 1) / (p + 1));
}

PohozaevReport pohozaev_check(const RadialProfile& u, const Parameters& params, double sigma, double R,
                              const quad::Options& opts) {
  if (!(sigma > 0 && sigma < R)) throw std::invalid_argument("pohozaev_check requires 0 < sigma < R");
  require_cover(u, sigma, R);
  const int N = params.N();
  const double l = params.l(), mu = params.mu(), p = params.p();

  const auto res = quad::integrate<2>(
      [&](double t) {
        const double r = std::exp(t);
        const RadialValue v = u(r);
        const double rN = std::pow(r, N);
        return std::array<double, 2>{std::pow(r, l) * std::pow(std::fabs(v.u), p + 1) * rN,
                                     (mu * v.u * v.u / (r * r) - v.du * v.du) * rN};
      },
      std::log(sigma), std::log(R), opts);

  PohozaevReport rep{};
  rep.bulk = sphere_area(N) * ((N + l) / (p + 1) * res.value[0] + 0.5 * (N - 2) * res.value[1]);
  rep.boundary = pohozaev_boundary_term(u, params, R) - pohozaev_boundary_term(u, params, sigma);
  rep.residual = std::fabs(rep.bulk - rep.boundary) /
                 std::max({std::fabs(rep.bulk), std::fabs(rep.boundary), 1.0});
  return rep;
}

EnergyBalance energy_identity_balance(const RadialProfile& u, const Parameters& params, double sigma, double R,
                                      const quad::Options& opts) {
  if (!(sigma > 0 && sigma < R)) throw std::invalid_argument("energy_identity_balance requires 0 < sigma < R");
  require_cover(u, sigma, R);
  const int N = params.N();
  const double l = params.l(), mu = params.mu(), p = params.p();
  const double omega = sphere_area(N);

  const auto res = quad::integrate<2>(
      [&](double t) {
        const double r = std::exp(t);
        const RadialValue v = u(r);
        const double rN = std::pow(r, N);
        return std::array<double, 2>{(v.du * v.du - mu * v.u * v.u / (r * r)) * rN,
                                     std::pow(r, l) * std::pow(std::fabs(v.u), p + 1) * rN};
      },
      std::log(sigma), std::log(R), opts);

  auto flux = [&](double r) {
    const RadialValue v = u(r);
    return std::pow(r, N - 1) * v.u * v.du;
  };
  EnergyBalance out{};
  out.coefficient = 0.5 * (N - 2) - (l + N) / (p + 1);
  out.gradient_hardy = omega * res.value[0];
  out.potential = omega * res.value[1];
  out.discrepancy = out.gradient_hardy - out.potential;
  out.boundary_flux = omega * (flux(R) - flux(sigma));
  return out;
}

}  // namespace hardy
