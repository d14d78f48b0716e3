#pragma once

// Numerical checks of the integral machinery behind the Liouville results:
// the stable-solution integral estimate and its scaling exponent, annulus
// growth, and the Pohozaev identity on annuli.

#include <array>
#include <optional>
#include <vector>

#include "hardy/exponents.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/radial.hpp"

namespace hardy {

/// ψ_R(r) = ψ(r/R) with ψ = 1 on [0,1], ψ = 0 on [2,∞) and a quintic
/// smoothstep in between (C²), raised to the power 2m inside the estimate.
struct CutoffFunction {
  double R;
  int m;

  /// ψ_R, ψ_R′, ψ_R″ at r.
  std::array<double, 3> at(double r) const;
  /// m = ⌈max{(p+γ)/(p−1), 2}⌉.
  static int minimal_power(double p, double gamma);
};

struct AlphaBeta {
  double alpha;  // μ̄/μ − (γ+1)²/(4γ)
  double beta;   // p − (γ+1)²/(4γ) − (γ−1)²(γ+1)²/(16γ²α)
};

/// Defined for μ > 0 only; throws std::domain_error otherwise.
AlphaBeta alpha_beta(const Parameters& params, double gamma);

/// p − (γ+1)²/(4γ), the μ ≤ 0 coefficient.
double nonpositive_mu_coefficient(double p, double gamma);

struct EstimateReport {
  double R;
  double gamma;
  int m;
  double lhs;           // ∫(|∇(|u|^{(γ−1)/2}u)|² + |x|ˡ|u|^{p+γ}) ψ_R^{2m}
  double rhs_integral;  // ∫|x|^{(γ+1)l/(1−p)} (|∇ψ_R|² + |ψ_R Δψ_R|)^{(p+γ)/(p−1)}
  double fitted_constant;
  std::optional<double> alpha;
  std::optional<double> beta;
};

/// Throws std::invalid_argument for γ ∉ [1, γ_M) or m below its floor, and
/// std::out_of_range when u is not defined up to 2R.
EstimateReport verify_prop31(const RadialProfile& u, const Parameters& params, double gamma,
                             const CutoffFunction& cutoff, const quad::Options& opts = {});

struct EstimateSweep {
  std::vector<EstimateReport> reports;
  double final_growth_slope;  // d ln C / d ln R over the last two radii
  bool bounded;               // all finite and final_growth_slope < 0.1
};

/// verify_prop31 over the given radii with m = minimal_power unless m > 0.
EstimateSweep verify_prop31_sweep(const RadialProfile& u, const Parameters& params, double gamma,
                                  const std::vector<double>& radii, int m = 0);

/// N − ((γ+1)l + 2(p+γ))/(p−1).
double scaling_exponent(const Parameters& params, double gamma);
/// inf over γ ∈ [1, γ_M) of scaling_exponent, attained in the limit γ → γ_M.
double scaling_exponent_infimum(const Parameters& params);

struct AnnulusReport {
  std::vector<double> radii;
  std::vector<double> shell_integrals;   // over (r_k, r_{k+1})
  std::vector<double> nested_integrals;  // over (r_0, r_{k+1})
  double exponent;                       // scaling_exponent(params, γ)
  std::optional<double> fitted_rate;     // empty when every integral is zero
  double tail_rate;                      // log-slope of the last two shells
  double c1;                             // least-squares fit nested ≈ c1 + c2 r^exponent
  double c2;
  bool envelope_pass;                    // tail_rate ≤ exponent + 0.05·max(1,|exponent|)
};

/// Radii must be geometric (constant ratio) with at least three entries.
AnnulusReport annulus_growth(const RadialProfile& u, const Parameters& params, double gamma,
                             const std::vector<double>& radii, const quad::Options& opts = {});

struct PohozaevReport {
  double bulk;      // (N+l)/(p+1)∫|x|ˡ|u|^{p+1} + (N−2)/2∫(μ|x|⁻²u² − |∇u|²)
  double boundary;  // boundary terms at R minus those at σ
  double residual;  // |bulk − boundary| / max(|bulk|, |boundary|, 1)
};

PohozaevReport pohozaev_check(const RadialProfile& u, const Parameters& params, double sigma, double R,
                              const quad::Options& opts = {});

/// Per-sphere Pohozaev boundary term
///   ω (r^N u′²/2 + μ r^{N−2} u²/2 + r^{N+l}|u|^{p+1}/(p+1)).
double pohozaev_boundary_term(const RadialProfile& u, const Parameters& params, double r);

struct EnergyBalance {
  double coefficient;        // (N−2)/2 − (l+N)/(p+1)
  double gradient_hardy;     // ∫(|∇u|² − μ|x|⁻²u²) on (σ, R)
  double potential;          // ∫|x|ˡ|u|^{p+1} on (σ, R)
  double discrepancy;        // gradient_hardy − potential
  double boundary_flux;      // ω [r^{N−1} u u′]_σ^R, equal to discrepancy for solutions
};

EnergyBalance energy_identity_balance(const RadialProfile& u, const Parameters& params, double sigma, double R,
                                      const quad::Options& opts = {});

}  // namespace hardy
