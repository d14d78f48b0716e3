#pragma once

// Closed-form constants and critical exponents for
//     Δu + μ|x|⁻²u + |x|ˡ|u|^{p−1}u = 0   in ℝᴺ.

#include <optional>
#include <stdexcept>
#include <string>

namespace hardy {

class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Smallest admissible p. Below this γ_M and f(p,μ) lose all precision.
inline constexpr double kMinExponent = 1.0 + 1e-9;

/// The parameter tuple (N, l, μ, p). Construction validates
/// N ≥ 3, l > −2, μ < (N−2)²/4 and p ≥ 1 + 1e−9.
class Parameters {
 public:
  Parameters(int N, double l, double mu, double p);

  /// Describes the first violated precondition, or nullopt if the tuple is valid.
  static std::optional<std::string> violation(int N, double l, double mu, double p);
  /// Same check without p.
  static std::optional<std::string> violation(int N, double l, double mu);

  int N() const { return N_; }
  double l() const { return l_; }
  double mu() const { return mu_; }
  double p() const { return p_; }

  Parameters with_p(double p) const { return {N_, l_, mu_, p}; }
  Parameters with_mu(double mu) const { return {N_, l_, mu, p_}; }

  friend bool operator==(const Parameters&, const Parameters&) = default;

 private:
  int N_;
  double l_;
  double mu_;
  double p_;
};

/// A critical exponent which may be +∞. Infinity is its own state and is
/// serialized as the literal "inf", never as a floating-point infinity.
class Exponent {
 public:
  static Exponent finite(double value) { return Exponent(value); }
  static Exponent infinite() { return Exponent(); }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  /// Throws std::logic_error for the infinite exponent.
  double value() const;
  /// True when p lies strictly below this exponent.
  bool above(double p) const { return is_infinite() || p < *value_; }
  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent() = default;
  explicit Exponent(double v) : value_(v) {}
  std::optional<double> value_;
};

struct DerivedConstants {
  Parameters params;
  double mu_bar;     // (N−2)²/4
  double mu_plus;    // max(μ,0)
  double l_minus;    // min(l,0)
  double scaling;    // (l+2)/(p−1), the Emden–Fowler power
  double A;          // N − 2 − 2(l+2)/(p−1)
  double L_pow;      // L^{p−1} = ((l+2)/(p−1))(N − 2 − (l+2)/(p−1))
  double nu_minus;   // smaller root of ν(N−2−ν) = μ
  double nu_plus;
  std::optional<double> w0;  // (L^{p−1} − μ)^{1/(p−1)}, only when L^{p−1} > μ
  double sobolev_p;  // (N+2+2l)/(N−2)
};

DerivedConstants derive(const Parameters& params);

double mu_bar(int N);
double sobolev_exponent(int N, double l);
/// Roots ν₋ ≤ ν₊ of ν(N−2−ν) = μ, computed as √μ̄ ∓ √(μ̄−μ).
double nu_minus(int N, double mu);
double nu_plus(int N, double mu);

/// γ_M(p,μ); equals 2p + 2√(p(p−1)) − 1 for μ ≤ 0.
double gamma_max(int N, double mu, double p);
double gamma_max(const Parameters& params);

/// f(p,μ) = (2p + l + (l+2)γ_M(p,μ)) / (p−1).
double f_of_p(int N, double l, double mu, double p);
double f_of_p(const Parameters& params);

struct RootOptions {
  double rel_tol = 1e-12;
  int max_iter = 400;
};

/// p_c(l,μ): the closed form for μ ≤ 0, otherwise the root of f(p,μ) = N.
Exponent p_critical(int N, double l, double mu, const RootOptions& opts = {});
/// The μ ≤ 0 closed form; +∞ when N ≤ 10 + 4l.
Exponent p_critical_closed_form(int N, double l);
/// Root of f(p,μ) = N by bracketed bisection, for any admissible μ.
/// Infinite when no root exists (μ ≤ 0 and N ≤ 10 + 4l).
Exponent solve_critical_exponent(int N, double l, double mu, const RootOptions& opts = {});

/// h_μ(m) = 4m³ + 4(l+4−N)m² + (N−2)(N−10−4l)m + 4μ(l+2).
double h_cubic(double m, double mu, int N, double l);

/// True when N > 10 + 4l, i.e. the curves p± exist.
bool has_lower_branch(int N, double l);

/// μ★ and p★; both throw std::domain_error when N ≤ 10 + 4l.
double mu_star(int N, double l);
double p_star(int N, double l);

struct PlusMinus {
  double p_minus;
  Exponent p_plus;
};

/// The two branches p₋ ≤ p₊ over μ ∈ [μ★, 0], via the roots of h_μ on
/// (0, √μ̄). Throws std::domain_error outside that range or for N ≤ 10 + 4l.
PlusMinus p_plus_minus(double mu, int N, double l, const RootOptions& opts = {});

/// H(p,γ,l) = N(p−1) − (γ+1)l − 2(p+γ).
double h_balance(double p, double gamma, int N, double l);
/// The γ solving H(p,γ,l) = 0.
double gamma_star(double p, int N, double l);

}  // namespace hardy
