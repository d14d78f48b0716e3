#include <doctest.h>

#include <cmath>
#include <random>

#include "hardy/phase.hpp"
#include "hardy/regions.hpp"
#include "hardy/stability.hpp"
#include "support.hpp"

using namespace hardy;

namespace {

const DerivedConstants& c12() {
  static const DerivedConstants c = derive(Parameters(12, 0, 0, 5));
  return c;
}

const Trajectory& shot12() {
  static const Trajectory t = shoot_unstable_manifold(c12());
  return t;
}

// Time at which w first reaches `level`, by linear search and bisection on Trajectory::at.
double crossing_time(const Trajectory& traj, double level) {
  for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
    if (traj.states[i].w < level && traj.states[i + 1].w >= level) {
      return testing::oracle_root([&](double t) { return traj.at(t).w - level; }, traj.states[i].t,
                                  traj.states[i + 1].t);
    }
  }
  return std::nan("");
}

}  // namespace

TEST_CASE("vector field") {
  const auto& c = c12();
  CHECK(vector_field(0, 0, c) == std::array<double, 2>{0, 0});
  const auto at_w0 = vector_field(*c.w0, 0, c);
  CHECK(at_w0[0] == 0);
  CHECK(std::fabs(at_w0[1]) < 1e-14);
  const auto one = vector_field(1, 0, c);
  CHECK(one[0] == 0);
  CHECK(one[1] == doctest::Approx(3.75).epsilon(1e-14));
}

TEST_CASE("equilibria") {
  const auto eq = equilibria(c12());
  REQUIRE(eq.size() == 3);
  CHECK(eq[0].tag == EquilibriumTag::Origin);
  CHECK(eq[0].type == EquilibriumType::Saddle);
  CHECK(eq[0].eigenvalues[0].real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eq[0].eigenvalues[1].real() == doctest::Approx(-9.5).epsilon(1e-14));
  CHECK(eq[1].tag == EquilibriumTag::PositiveW0);
  CHECK(w0_discriminant(c12()) == doctest::Approx(5).epsilon(1e-13));
  CHECK(eq[1].type == EquilibriumType::StableNode);
  for (const auto& e : eq)
    for (const auto& z : e.eigenvalues) {
      const auto res = z * z + c12().A * z - e.coefficient;
      CHECK(std::abs(res) < 1e-10);
    }

  const auto none = equilibria(derive(Parameters(12, 0, 4.8, 5)));
  REQUIRE(none.size() == 1);
  CHECK(none[0].tag == EquilibriumTag::Origin);
  CHECK(none[0].type == EquilibriumType::StableNode);

  // N=11, l=0, μ=0, p=2: A = 5, c = −14 at w₀; discriminant 25 − 56 < 0.
  const auto spiral = equilibria(derive(Parameters(11, 0, 0, 2)));
  CHECK(spiral[1].type == EquilibriumType::StableSpiral);
}

TEST_CASE("energy") {
  const auto& c = c12();
  CHECK(energy(0, 0, c) == 0);
  const double expect = -std::pow(4.75, 1.5) / 3;
  CHECK(energy(*c.w0, 0, c) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(energy(*c.w0, 0, c) == doctest::Approx(-3.4510).epsilon(1e-4));
}

TEST_CASE("eigenvalue identity on random tuples") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0, 1);
  int checked = 0;
  while (checked < 100) {
    const int N = 3 + int(18 * u01(rng));
    const double l = -1.9 + 5 * u01(rng);
    const double mu = -3 + (mu_bar(N) + 3) * 0.999 * u01(rng);
    const double p = 1.05 + 20 * u01(rng);
    const auto c = derive(Parameters(N, l, mu, p));
    if (!(c.L_pow > mu)) continue;
    CHECK(origin_unstable_eigenvalue(c) + c.nu_minus == doctest::Approx(c.scaling).epsilon(1e-10));
    ++checked;
  }
  CHECK_THROWS_AS(origin_unstable_eigenvalue(derive(Parameters(12, 0, 4.8, 5))), std::domain_error);
}

TEST_CASE("shooting inside S: N=12, l=0, mu=0, p=5") {
  const Trajectory& traj = shot12();
  REQUIRE(traj.converged_to);
  CHECK(*traj.converged_to == EquilibriumTag::PositiveW0);
  const double w0 = *c12().w0;
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    CHECK(traj.states[i].t > traj.states[i - 1].t);
    CHECK(traj.states[i].w > 0);
    CHECK(traj.states[i].w < w0);
  }
  CHECK(traj.max_energy_violation < 1e-9);
  CHECK(traj.sign_changes_of_w_minus_w0 == 0);
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double e0 = energy(traj.states[i - 1].w, traj.states[i - 1].v, c12());
    const double e1 = energy(traj.states[i].w, traj.states[i].v, c12());
    CHECK(e1 <= e0 + 1e-9 * std::fmax(1.0, std::fabs(e0)));
  }
  CHECK(std::fabs(energy_balance_defect(traj)) < 1e-6);
}

TEST_CASE("shooting: spiral case oscillates") {
  // Pick a strictly negative discriminant by scanning, rather than trusting a fixed tuple.
  std::optional<Parameters> pick;
  for (double p = 1.5; p < 10 && !pick; p += 0.25)
    for (double mu = -2; mu < 0.5 && !pick; mu += 0.25) {
      const Parameters params(11, 0, mu, p);
      const auto c = derive(params);
      if (c.L_pow > mu && c.A > 0 && w0_discriminant(c) < -1) pick = params;
    }
  REQUIRE(pick);
  const auto traj = shoot_unstable_manifold(derive(*pick));
  CHECK(traj.sign_changes_of_w_minus_w0 >= 2);
  REQUIRE(traj.converged_to);
  CHECK(*traj.converged_to == EquilibriumTag::PositiveW0);
  CHECK(traj.max_energy_violation < 1e-9);
}

TEST_CASE("shooting: errors and negative branch") {
  CHECK_THROWS_AS(shoot_unstable_manifold(derive(Parameters(12, 0, 4.8, 5))), ShootingError);
  try {
    shoot_unstable_manifold(derive(Parameters(12, 0, 4.8, 5)));
  } catch (const ShootingError& e) {
    CHECK(e.kind() == ShootingError::Kind::NotSaddle);
  }
  ShootConfig neg;
  neg.negative_branch = true;
  const auto traj = shoot_unstable_manifold(c12(), neg);
  REQUIRE(traj.converged_to);
  CHECK(*traj.converged_to == EquilibriumTag::NegativeW0);
  CHECK(traj.states.back().w == doctest::Approx(-shot12().states.back().w).epsilon(1e-6));
}

TEST_CASE("shooting: halving the offset shifts time by ln2/lambda") {
  ShootConfig a, b;
  a.t_start = b.t_start = 0.0;
  a.t_max = b.t_max = 120.0;
  b.offset = a.offset / 2;
  const auto ta = shoot_unstable_manifold(c12(), a);
  const auto tb = shoot_unstable_manifold(c12(), b);
  REQUIRE(ta.converged_to);
  REQUIRE(tb.converged_to);
  CHECK(*ta.converged_to == *tb.converged_to);
  const double lambda = origin_unstable_eigenvalue(c12());
  const double w0 = *c12().w0;
  for (double frac : {0.1, 0.5, 0.9}) {
    const double shift = crossing_time(tb, frac * w0) - crossing_time(ta, frac * w0);
    CHECK(std::fabs(shift - std::log(2.0) / lambda) < 1e-4);
  }
}

TEST_CASE("integrator order on fixed steps") {
  const auto& c = c12();
  const PhaseState start = shot12().at(shot12().t_begin() + 30);
  const double t1 = start.t + 10;
  const PhaseState ref = integrate_fixed(c, start, t1, 6400);
  double prev_err = 0;
  for (int n : {100, 200, 400}) {
    const PhaseState s = integrate_fixed(c, start, t1, n);
    const double err = std::hypot(s.w - ref.w, s.v - ref.v);
    if (prev_err > 0) CHECK(std::log2(prev_err / err) > 4.0);
    prev_err = err;
  }
}

TEST_CASE("to_radial") {
  const RadialSolution sol = to_radial(shot12());
  REQUIRE(sol.samples.size() == shot12().states.size());
  for (std::size_t i = 1; i < sol.samples.size(); ++i) {
    CHECK(sol.samples[i].r > sol.samples[i - 1].r);
    CHECK(sol.samples[i].u > 0);
  }
  CHECK(std::fabs(sol.decay_slope_fit - (-c12().nu_minus)) < 1e-3);
  CHECK(sol.lambda_fit == doctest::Approx(1.0).epsilon(1e-6));
  const Parameters params(12, 0, 0, 5);
  // Near r = 0, u′ = r^{−a−1}(v − a w) is a cancelling difference, so the
  // residual there reflects the integrator tolerance; check interior radii.
  for (double r : {0.05, 0.1, 1.0, 10.0, 1e3}) CHECK(radial_ode_residual(sol.profile, params, r) < 1e-6);

  // Inverse transform of the sample points, checked against the definitions.
  const auto& s = shot12().states[shot12().states.size() / 2];
  const auto& rs = sol.samples[shot12().states.size() / 2];
  CHECK(rs.r == doctest::Approx(std::exp(s.t)));
  CHECK(rs.u == doctest::Approx(s.w * std::pow(rs.r, -0.5)).epsilon(1e-14));
  CHECK(rs.du == doctest::Approx(std::pow(rs.r, -1.5) * (s.v - 0.5 * s.w)).epsilon(1e-13));

  // A trajectory resting at (w₀, 0) maps onto the singular solution.
  Trajectory rest(c12(), {});
  const double w0 = *c12().w0;
  for (int i = 0; i <= 10; ++i) rest.states.push_back({-5.0 + i, w0, 0.0});
  const RadialSolution us = to_radial(rest);
  for (const auto& smp : us.samples) CHECK(smp.u * std::pow(smp.r, c12().scaling) == doctest::Approx(w0).epsilon(1e-14));

  CHECK_THROWS_AS(to_radial(Trajectory(c12(), {})), std::invalid_argument);
}

TEST_CASE("decay fit for mu != 0") {
  for (double mu : {-3.0, 2.0, 15.0}) {
    const Parameters params(12, 0, mu, 5);
    if (!membership_S(params)) continue;
    const auto c = derive(params);
    const RadialSolution sol = to_radial(shoot_unstable_manifold(c));
    CHECK(std::fabs(sol.decay_slope_fit + c.nu_minus) < 1e-3);
    CHECK(sol.lambda_fit == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("singular solution") {
  const RadialProfile us = singular_solution(c12());
  CHECK(us(1.0).u == doctest::Approx(std::pow(4.75, 0.25)).epsilon(1e-15));
  const Parameters params(12, 0, 0, 5);
  const double a = c12().scaling, w0 = *c12().w0;
  for (double r : {0.1, 1.0, 10.0}) {
    // Analytic second derivative: the residual vanishes up to rounding.
    const RadialValue v = us(r);
    const double d2 = a * (a + 1) * w0 * std::pow(r, -a - 2);
    const double terms[] = {d2, 11 * v.du / r, 0.0, std::pow(v.u, 5)};
    const double scale = std::fabs(terms[0]) + std::fabs(terms[1]) + std::fabs(terms[3]);
    CHECK(std::fabs(terms[0] + terms[1] + terms[2] + terms[3]) / scale < 1e-12);
    CHECK(radial_ode_residual(us, params, r) < 1e-8);
  }
  for (double r : {0.3, 2.0, 17.0}) CHECK(us(2 * r).u / us(r).u == doctest::Approx(std::pow(2.0, -a)).epsilon(1e-14));
  CHECK_THROWS_AS(singular_solution(derive(Parameters(12, 0, 4.8, 5))), std::domain_error);
}

TEST_CASE("Kelvin transform") {
  const Parameters params(12, 0, 0, 5);
  CHECK(kelvin_weight(params) == 36);

  const RadialSolution sol = to_radial(shot12());
  const KelvinResult k = kelvin_transform(sol, params);
  CHECK(k.params.l() == 36);
  CHECK(k.params.mu() == params.mu());
  const KelvinResult back = kelvin_transform(k.solution, k.params.with_p(params.p()));
  REQUIRE(back.solution.samples.size() == sol.samples.size());
  for (std::size_t i = 0; i < sol.samples.size(); i += 7) {
    CHECK(testing::rel_close(back.solution.samples[i].r, sol.samples[i].r, 1e-10));
    CHECK(testing::rel_close(back.solution.samples[i].u, sol.samples[i].u, 1e-10));
    // u′ comes back through a difference of two terms of size ~ (N−2)u/r.
    const double scale = 10 * sol.samples[i].u / sol.samples[i].r + std::fabs(sol.samples[i].du);
    CHECK(std::fabs(back.solution.samples[i].du - sol.samples[i].du) <= 1e-10 * scale);
  }
  for (double rho : {1e-2, 0.5, 3.0}) CHECK(radial_ode_residual(k.solution.profile, k.params, rho) < 1e-6);

  // U_s goes to the singular solution of the transformed equation.
  RadialSolution us;
  us.profile = singular_solution(c12());
  const KelvinResult ku = kelvin_transform(us, params);
  const RadialProfile target = singular_solution(derive(ku.params));
  for (double rho : {0.1, 1.0, 7.0}) {
    CHECK(ku.solution.profile(rho).u == doctest::Approx(target(rho).u).epsilon(1e-12));
    CHECK(ku.solution.profile(rho).du == doctest::Approx(target(rho).du).epsilon(1e-12));
    CHECK(radial_ode_residual(ku.solution.profile, ku.params, rho) < 1e-8);
  }
  CHECK(*derive(ku.params).w0 == doctest::Approx(*c12().w0).epsilon(1e-12));
  // p = (N+l)/(N−2) gives m = −2.
  CHECK_THROWS_AS(kelvin_transform(us, Parameters(12, 0, 0, 1.2)), std::domain_error);
}

TEST_CASE("envelope helper") {
  const auto traj = shoot_unstable_manifold(c12());
  CHECK(within_envelope(traj));
  ShootConfig neg;
  neg.negative_branch = true;
  CHECK(within_envelope(shoot_unstable_manifold(c12(), neg)));

  Trajectory overshoot = traj;
  overshoot.states.back().w = *c12().w0 * (1 + 1e-6);
  CHECK_FALSE(within_envelope(overshoot));
  overshoot.states.back().w = *c12().w0;
  CHECK(within_envelope(overshoot));
  CHECK_FALSE(within_envelope(overshoot, 0.0));
}
