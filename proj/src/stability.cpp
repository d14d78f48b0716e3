#include "hardy/stability.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hardy/format.hpp"

namespace hardy {

double RadialBump::r_lo() const { return std::exp(center_log_r - half_width_log_r); }
double RadialBump::r_hi() const { return std::exp(center_log_r + half_width_log_r); }

std::array<double, 2> RadialBump::shape(double x) const {
  const double s = x / half_width_log_r;
  if (std::fabs(s) >= 1) return {0.0, 0.0};
  const double q = 1 - s * s;
  return {q * q * q, -6 * s * q * q / half_width_log_r};
}

std::array<double, 2> RadialBump::at(double r) const {
  const double x = std::log(r) - center_log_r;
  const auto [b, db] = shape(x);
  const double tilt_factor = std::exp(-tilt * x);
  return {tilt_factor * b, tilt_factor * (db - tilt * b) / r};
}

RadialBump RadialBump::dilated(double rho) const {
  return {center_log_r + std::log(rho), half_width_log_r, tilt};
}

double sphere_area(int N) { return 2 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N); }

namespace {

void require_support(const RadialProfile& u, const RadialBump& phi) {
  if (!(phi.half_width_log_r > 0)) throw std::invalid_argument("bump half width must be > 0");
  if (!u.covers(phi.r_lo(), phi.r_hi()))
    throw SupportError("test function support [" + format_number(phi.r_lo()) + ", " + format_number(phi.r_hi()) +
                       "] outside solution domain [" + format_number(u.r_min) + ", " + format_number(u.r_max) + "]");
}

}  // namespace

namespace {

// Q(φ) in units of ω·e^{(N−2)c}, c the bump's centre in t = ln r. Factoring the
// centre out keeps bumps far from r = 1 clear of overflow and subnormals.
QuadraticFormReport q_form_centred(const RadialProfile& u, const RadialBump& phi, const Parameters& params,
                                   const quad::Options& opts) {
  require_support(u, phi);
  const int N = params.N();
  const double l = params.l(), mu = params.mu(), p = params.p();

  auto integrand = [&](double t) {
    const double x = t - phi.center_log_r;
    const auto [b, db] = phi.shape(x);
    const double weight = std::exp((N - 2 - 2 * phi.tilt) * x);
    const double dphi_dt = db - phi.tilt * b;
    const double r = std::exp(t);
    const double uu = u(r).u;
    return std::array<double, 3>{
        dphi_dt * dphi_dt * weight,
        mu * b * b * weight,
        p * std::pow(r, l + 2) * std::pow(std::fabs(uu), p - 1) * b * b * weight,
    };
  };
  const double a = phi.center_log_r - phi.half_width_log_r;
  const double b = phi.center_log_r + phi.half_width_log_r;
  const auto res = quad::integrate<3>(integrand, a, b, opts);

  QuadraticFormReport rep{};
  rep.gradient_term = res.value[0];
  rep.hardy_term = res.value[1];
  rep.potential_term = res.value[2];
  rep.value = rep.gradient_term - rep.hardy_term - rep.potential_term;
  rep.quadrature_error_estimate = res.error;
  return rep;
}

QuadraticFormReport rescaled(QuadraticFormReport rep, const RadialBump& phi, int N) {
  const double k = sphere_area(N) * std::exp((N - 2) * phi.center_log_r);
  rep.gradient_term *= k;
  rep.hardy_term *= k;
  rep.potential_term *= k;
  rep.value = rep.gradient_term - rep.hardy_term - rep.potential_term;
  rep.quadrature_error_estimate *= k;
  return rep;
}

}  // namespace

QuadraticFormReport q_form_radial(const RadialProfile& u, const RadialBump& phi, const Parameters& params,
                                  const quad::Options& opts) {
  return rescaled(q_form_centred(u, phi, params, opts), phi, params.N());
}

HardyMargin hardy_sufficient(const Parameters& params) {
  const DerivedConstants c = derive(params);
  const double mu = params.mu();
  if (!(c.L_pow > mu))
    throw std::domain_error("hardy_sufficient requires L^{p-1} > mu (L^{p-1}=" + format_number(c.L_pow) +
                            ", mu=" + format_number(mu) + ")");
  const double margin = c.mu_bar - (mu + params.p() * (c.L_pow - mu));
  return {margin, margin >= 0};
}

SearchBounds search_bounds_for(const RadialProfile& u, const Parameters& params, SearchBounds base) {
  if (base.tilts.empty()) base.tilts = {0.0, std::sqrt(mu_bar(params.N()))};
  const double t_lo = u.r_min > 0 ? std::log(u.r_min) : -std::numeric_limits<double>::infinity();
  const double t_hi = std::isfinite(u.r_max) ? std::log(u.r_max) : std::numeric_limits<double>::infinity();
  if (std::isfinite(t_lo) && std::isfinite(t_hi)) {
    base.width_hi = std::fmin(base.width_hi, 0.25 * (t_hi - t_lo));
    base.width_lo = std::fmin(base.width_lo, 0.5 * base.width_hi);
  }
  const double margin = base.width_hi * (1 + 1e-9);
  if (std::isfinite(t_lo)) base.center_lo = std::fmax(base.center_lo, t_lo + margin);
  if (std::isfinite(t_hi)) base.center_hi = std::fmin(base.center_hi, t_hi - margin);
  if (base.center_lo > base.center_hi) {
    const double mid = std::isfinite(t_lo) && std::isfinite(t_hi) ? 0.5 * (t_lo + t_hi)
                       : std::isfinite(t_lo)                       ? base.center_lo
                                                                    : base.center_hi;
    base.center_lo = base.center_hi = mid;
  }
  return base;
}

std::vector<RadialBump> bump_family(const SearchBounds& bounds, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(bounds.center_lo, bounds.center_hi);
  std::uniform_real_distribution<double> log_width(std::log(bounds.width_lo), std::log(bounds.width_hi));
  std::vector<RadialBump> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double tilt = bounds.tilts.empty() ? 0.0 : bounds.tilts[i % bounds.tilts.size()];
    const double c = center(rng);
    out.push_back({c, std::exp(log_width(rng)), tilt});
  }
  return out;
}

SearchResult adversarial_search(const RadialProfile& u, const Parameters& params, const SearchBounds& bounds_in) {
  SearchBounds bounds = bounds_in;
  if (bounds.tilts.empty()) bounds.tilts = {0.0, std::sqrt(mu_bar(params.N()))};

  SearchResult out{};
  out.best_ratio = std::numeric_limits<double>::infinity();
  bool have_best = false;

  auto feasible = [&](const RadialBump& b) {
    return b.half_width_log_r > 0 && u.covers(b.r_lo(), b.r_hi());
  };
  // Ratio Q/gradient_term; +∞ for infeasible candidates.
  auto evaluate = [&](const RadialBump& b) {
    if (!feasible(b)) return std::numeric_limits<double>::infinity();
    QuadraticFormReport rep;
    try {
      rep = q_form_centred(u, b, params, {});
    } catch (const quad::QuadratureError& e) {
      throw quad::QuadratureError(std::string(e.what()) + " (bump center=" + format_number(b.center_log_r) +
                                  ", half_width=" + format_number(b.half_width_log_r) +
                                  ", tilt=" + format_number(b.tilt) + ")");
    }
    ++out.evaluations;
    const double ratio = rep.gradient_term > 0 ? rep.value / rep.gradient_term : 0.0;
    if (ratio < out.best_ratio) {
      out.best_ratio = ratio;
      out.best = rescaled(rep, b, params.N());
      out.best_bump = b;
      have_best = true;
    }
    return ratio;
  };

  auto width_at = [&](int k) {
    if (bounds.widths == 1) return bounds.width_lo;
    return bounds.width_lo * std::pow(bounds.width_hi / bounds.width_lo, double(k) / (bounds.widths - 1));
  };
  auto center_at = [&](int k) {
    if (bounds.centers == 1) return bounds.center_lo;
    return bounds.center_lo + (bounds.center_hi - bounds.center_lo) * k / (bounds.centers - 1);
  };

  for (int iw = 0; iw < bounds.widths; ++iw) {
    for (int ic = 0; ic < bounds.centers; ++ic) {
      for (double tilt : bounds.tilts) {
        const RadialBump b{center_at(ic), width_at(iw), tilt};
        if (evaluate(b) < -kStabilityTolerance) {
          out.witness = b;
          return out;
        }
      }
    }
  }
  if (!have_best) return out;

  // Pattern search in (center, ln width) around the best grid point.
  RadialBump cur = out.best_bump;
  double cur_ratio = out.best_ratio;
  double dc = bounds.centers > 1 ? (bounds.center_hi - bounds.center_lo) / (bounds.centers - 1) : 0.5;
  double dlw = bounds.widths > 1 ? std::log(bounds.width_hi / bounds.width_lo) / (bounds.widths - 1) : 0.5;
  for (int it = 0; it < bounds.refine_iterations; ++it) {
    bool improved = false;
    const std::array<RadialBump, 4> moves{{
        {cur.center_log_r, cur.half_width_log_r * std::exp(-dlw), cur.tilt},
        {cur.center_log_r - dc, cur.half_width_log_r, cur.tilt},
        {cur.center_log_r + dc, cur.half_width_log_r, cur.tilt},
        {cur.center_log_r, cur.half_width_log_r * std::exp(dlw), cur.tilt},
    }};
    for (const RadialBump& m : moves) {
      if (m.half_width_log_r > bounds.width_hi || m.half_width_log_r < bounds.width_lo) continue;
      const double r = evaluate(m);
      if (r < cur_ratio) {
        cur = m;
        cur_ratio = r;
        improved = true;
        break;
      }
    }
    if (cur_ratio < -kStabilityTolerance) {
      out.witness = cur;
      return out;
    }
    if (!improved) {
      dc *= 0.5;
      dlw *= 0.5;
    }
  }
  return out;
}

double verify_weak_solution(const RadialProfile& u, const Parameters& params, std::span<const RadialBump> phis,
                            const quad::Options& opts) {
  const int N = params.N();
  const double l = params.l(), mu = params.mu(), p = params.p();
  double worst = 0.0;
  for (const RadialBump& phi : phis) {
    require_support(u, phi);
    auto integrand = [&](double t) {
      const double x = t - phi.center_log_r;
      const auto [b, db] = phi.shape(x);
      const double r = std::exp(t);
      const double weight = std::exp((N - 1 - phi.tilt) * x);
      const RadialValue v = u(r);
      const double grad = v.du * (db - phi.tilt * b) * weight;
      const double rest = (mu * v.u / r + std::pow(r, l + 1) * std::pow(std::fabs(v.u), p - 1) * v.u) * b * weight;
      return std::array<double, 2>{grad - rest, std::fabs(grad)};
    };
    const auto res = quad::integrate<2>(integrand, phi.center_log_r - phi.half_width_log_r,
                                        phi.center_log_r + phi.half_width_log_r, opts);
    if (res.value[1] > 0) worst = std::fmax(worst, std::fabs(res.value[0]) / res.value[1]);
  }
  return worst;
}

}  // namespace hardy
