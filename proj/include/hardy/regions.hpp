#pragma once

// Classification of the (μ,p)-plane into existence / non-existence regions
// for stable solutions, and the dividing curves between them.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hardy/exponents.hpp"

namespace hardy {

enum class Region { Unstable, Stable, Unknown, Invalid, Boundary };

std::string_view to_string(Region region);

struct RegionLabel {
  Region region;
  std::string detail;  // machine-readable reason code
};

inline constexpr double kBoundaryTolerance = 1e-9;

/// Membership in the explicitly parameterized stable-existence set S:
///   p_c(l,μ) ≤ p < (l+2)/ν₋ + 1      for 0 < μ < μ̄,
///   p₋ ≤ p ≤ p₊                        for μ★ ≤ μ ≤ 0 and N > 10 + 4l.
/// Non-strict inequalities are relaxed and strict ones tightened by tol
/// (relative to max(1, |bound|)).
bool membership_S(const Parameters& params, double tol = kBoundaryTolerance);

/// Membership in Σ: p > (N+2+2l)/(N−2) and L^{p−1} > μ ≥ L^{p−1} − A²/(4(p−1)).
bool membership_Sigma(const Parameters& params, double tol = kBoundaryTolerance);

/// The third Σ inequality alone: μ ≥ L^{p−1} − A²/(4(p−1)).
bool sigma_lower_inequality(const Parameters& params, double tol = 0.0);

/// Upper end (l+2)/ν₋ + 1 of S for μ > 0; infinite for μ ≤ 0.
Exponent upper_exponent(int N, double mu, double l);

/// The dividing curves evaluated at one value of μ.
struct CurveValues {
  double mu;
  Exponent p_c;
  std::optional<double> p_minus;   // only for μ ∈ [μ★, 0], N > 10+4l
  std::optional<Exponent> p_plus;  // only for μ ∈ [μ★, 0], N > 10+4l
  std::optional<Exponent> upper;   // only for μ > 0
};

CurveValues curves_at(int N, double l, double mu);

/// True when (μ,p) lies within `band` of any dividing curve, measured
/// relative to max(1,|curve|) in p for the p-curves and absolutely in μ for
/// μ = 0, μ = μ★, μ = L^{p−1} and μ = L^{p−1} − A²/(4(p−1)).
bool near_boundary(int N, double l, double mu, double p, double band);

/// Takes raw values so that invalid tuples can be labelled rather than rejected.
RegionLabel classify(int N, double l, double mu, double p, double tol = kBoundaryTolerance);

struct Range {
  double lo;
  double hi;
  int count;
  double at(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

struct SweepGrid {
  int N;
  double l;
  Range mu;
  Range p;

  /// Throws InvalidParameters when counts < 1, lo > hi (or lo == hi with
  /// count > 1), or μ_hi ≥ μ̄.
  void validate() const;
};

struct SweepCell {
  double mu;
  double p;
  RegionLabel label;
};

struct SweepResult {
  SweepGrid grid;
  std::vector<SweepCell> cells;     // row-major: p outer, μ inner
  std::vector<CurveValues> curves;  // one entry per μ grid value
};

SweepResult sweep(const SweepGrid& grid);

}  // namespace hardy
