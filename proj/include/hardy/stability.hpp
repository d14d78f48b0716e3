#pragma once

// Radial evaluation of the second-variation form
//     Q_u(φ) = ∫ |∇φ|² − μ|x|⁻²φ² − p|x|ˡ|u|^{p−1}φ²  dx
// on log-radius bump test functions.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hardy/exponents.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/radial.hpp"

namespace hardy {

/// φ(r) = e^{−tilt·(ln r − center)} · (1 − s²)³ for |s| < 1, s = (ln r − center)/half_width.
/// The profile is C² at |s| = 1 and has sup 1; with tilt = √μ̄ the family
/// approaches the extremals of the Hardy inequality as the width grows.
struct RadialBump {
  double center_log_r = 0.0;
  double half_width_log_r = 1.0;
  double tilt = 0.0;

  double r_lo() const;
  double r_hi() const;
  /// φ and dφ/dr at r.
  std::array<double, 2> at(double r) const;
  /// The untilted profile (1 − s²)³ and its x-derivative at x = ln r − center.
  std::array<double, 2> shape(double x) const;
  /// The same bump dilated by ρ: φ(·/ρ).
  RadialBump dilated(double rho) const;
};

/// |S^{N−1}| = 2π^{N/2} / Γ(N/2).
double sphere_area(int N);

struct QuadraticFormReport {
  double value;
  double gradient_term;
  double hardy_term;
  double potential_term;
  double quadrature_error_estimate;
};

class SupportError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Throws SupportError when φ's support leaves u's domain and
/// quad::QuadratureError when the panel refinement does not converge.
QuadraticFormReport q_form_radial(const RadialProfile& u, const RadialBump& phi, const Parameters& params,
                                  const quad::Options& opts = {});

struct HardyMargin {
  double margin;  // μ̄ − (μ + p(L^{p−1} − μ))
  bool sufficient;
};

/// Throws std::domain_error when μ ≥ L^{p−1}.
HardyMargin hardy_sufficient(const Parameters& params);

struct SearchBounds {
  double center_lo = -2.0;
  double center_hi = 2.0;
  int centers = 9;
  double width_lo = 0.25;
  double width_hi = 24.0;
  int widths = 12;  // geometric
  std::vector<double> tilts;  // empty: {0, √μ̄}
  int refine_iterations = 40;
};

/// Bounds clipped so that every candidate's support lies inside u's domain.
SearchBounds search_bounds_for(const RadialProfile& u, const Parameters& params, SearchBounds base = {});

/// `count` bumps drawn from `bounds`: centers uniform, half widths
/// log-uniform, tilts cycling through bounds.tilts (0 if empty).
std::vector<RadialBump> bump_family(const SearchBounds& bounds, int count, std::uint64_t seed);

struct SearchResult {
  std::optional<RadialBump> witness;  // first bump with Q < −1e−8·gradient_term
  QuadraticFormReport best;           // report at the minimizing candidate
  RadialBump best_bump;
  double best_ratio;  // min Q / gradient_term seen
  int evaluations;
};

/// Coarse grid over (tilt, width, center), then a pattern search around the
/// best candidate with widths kept in [width_lo, width_hi]. Ties break toward
/// smaller width, then smaller center.
SearchResult adversarial_search(const RadialProfile& u, const Parameters& params, const SearchBounds& bounds = {});

inline constexpr double kStabilityTolerance = 1e-8;

/// Quadrature default for the weak form: interpolated solutions carry kinks at
/// the integrator's tolerance, so tighter targets only cost panels.
inline constexpr quad::Options kWeakFormQuadrature{1e-9};

/// Max over φ of |∫ u′φ′ − μr⁻²uφ − rˡ|u|^{p−1}uφ| / ∫|u′φ′| (radial weak form).
double verify_weak_solution(const RadialProfile& u, const Parameters& params, std::span<const RadialBump> phis,
                            const quad::Options& opts = kWeakFormQuadrature);

}  // namespace hardy
