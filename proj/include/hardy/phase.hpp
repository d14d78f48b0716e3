#pragma once

// The Emden–Fowler phase plane. With w(t) = r^{(l+2)/(p−1)} u(r), t = ln r,
// radial solutions become trajectories of the autonomous system
//     w' = v,
//     v' = −A v + (L^{p−1} − μ) w − |w|^{p−1} w.

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hardy/exponents.hpp"
#include "hardy/radial.hpp"

namespace hardy {

struct PhaseState {
  double t;  // ln r
  double w;
  double v;  // dw/dt
};

std::array<double, 2> vector_field(double w, double v, const DerivedConstants& c);

/// E_w = v²/2 − (L^{p−1} − μ) w²/2 + |w|^{p+1}/(p+1); dE/dt = −A v².
double energy(double w, double v, const DerivedConstants& c);

enum class EquilibriumType { Saddle, StableNode, StableSpiral, UnstableNode, UnstableSpiral, Center, Degenerate };
enum class EquilibriumTag { Origin, PositiveW0, NegativeW0 };

std::string_view to_string(EquilibriumType type);
std::string_view to_string(EquilibriumTag tag);

struct EquilibriumReport {
  EquilibriumTag tag;
  double w;
  double v;
  /// Coefficient c of the linearization v' = −A v + c w.
  double coefficient;
  std::array<std::complex<double>, 2> eigenvalues;  // roots of λ² + Aλ − c = 0
  EquilibriumType type;
};

/// The origin always; (±w₀, 0) iff L^{p−1} > μ.
std::vector<EquilibriumReport> equilibria(const DerivedConstants& c);

/// A² − 4(p−1)(L^{p−1} − μ): negative exactly when (w₀,0) is a spiral.
double w0_discriminant(const DerivedConstants& c);

/// Positive eigenvalue (−A + √(A² + 4(L^{p−1}−μ)))/2 at the origin.
/// Throws std::domain_error when the origin is not a saddle.
double origin_unstable_eigenvalue(const DerivedConstants& c);

struct IntegratorConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  double max_step = 0.25;
};

struct ShootConfig {
  double offset = 1e-8;  // distance from the origin along the unstable eigenvector
  double t_max = 200.0;  // absolute end time
  /// Start time. By default ln(w_init)/λ₀⁺, which normalizes the solution
  /// so that r^{ν₋} u(r) → 1 as r → 0.
  std::optional<double> t_start;
  bool negative_branch = false;
  double convergence_radius = 1e-8;
  double convergence_window = 5.0;
  IntegratorConfig integrator;
};

class ShootingError : public std::runtime_error {
 public:
  enum class Kind { NotSaddle, LeftPositiveRegion };
  ShootingError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class Trajectory {
 public:
  Trajectory(DerivedConstants constants, IntegratorConfig integrator)
      : constants_(std::move(constants)), integrator_(integrator) {}

  std::vector<PhaseState> states;  // t strictly increasing, one per accepted step
  std::optional<EquilibriumTag> converged_to;
  int sign_changes_of_w_minus_w0 = 0;
  /// max over consecutive states of (E(tᵢ₊₁) − E(tᵢ)) / max(1, |E(tᵢ)|), floored at 0.
  double max_energy_violation = 0.0;

  const DerivedConstants& constants() const { return constants_; }
  double t_begin() const { return states.front().t; }
  double t_end() const { return states.back().t; }

  /// Phase point at any t in [t_begin, t_end], by a single embedded
  /// Runge–Kutta step from the preceding stored state.
  PhaseState at(double t) const;

 private:
  DerivedConstants constants_;
  IntegratorConfig integrator_;
};

/// Integrates the branch of the unstable manifold of the origin (positive w
/// unless cfg.negative_branch) until t_max or until the phase point has
/// stayed within convergence_radius of (±w₀, 0) for convergence_window.
/// Throws ShootingError for a non-saddle origin or when w reaches 0.
Trajectory shoot_unstable_manifold(const DerivedConstants& c, const ShootConfig& cfg = {});

/// Fixed-step integration with the same embedded Runge–Kutta pair (5th-order
/// solution), used for convergence studies.
PhaseState integrate_fixed(const DerivedConstants& c, PhaseState start, double t_end, int steps);

/// E(t₁) − E(t₀) + A∫_{t₀}^{t₁} v² dt along the trajectory; zero for exact solutions.
double energy_balance_defect(const Trajectory& traj);

/// 0 < |w| < w₀ at every stored state, on whichever branch the trajectory follows.
/// |w| may reach w₀ within slack·w₀, the rounding level once the trajectory has converged.
bool within_envelope(const Trajectory& traj, double slack = 1e-12);

/// Inverse Emden–Fowler transform with decay diagnostics near r = 0.
/// Throws std::invalid_argument for an empty trajectory.
RadialSolution to_radial(const Trajectory& traj);

/// U_s(r) = w₀ r^{−(l+2)/(p−1)}. Throws std::domain_error when μ ≥ L^{p−1}.
RadialProfile singular_solution(const DerivedConstants& c);

/// u″ + (N−1)u′/r + μu/r² + rˡ|u|^{p−1}u, with u″ from extrapolated central
/// differences of the profile's u′, divided by the sum of the magnitudes of the four terms.
double radial_ode_residual(const RadialProfile& u, const Parameters& params, double r);

struct KelvinResult {
  RadialSolution solution;
  Parameters params;  // weight exponent replaced by m = (N−2)(p−1) − (l+4)
};

/// v(ρ) = ρ^{2−N} u(1/ρ). Throws std::domain_error when m ≤ −2.
KelvinResult kelvin_transform(const RadialSolution& solution, const Parameters& params);

/// m = (N−2)(p−1) − (l+4).
double kelvin_weight(const Parameters& params);

}  // namespace hardy
