#include <doctest.h>

#include <cmath>
#include <set>

#include "hardy/regions.hpp"
#include "support.hpp"

using namespace hardy;

namespace {

// Σ evaluated directly from its three inequalities, without the library's derive().
bool sigma_oracle(int N, double l, double mu, double p) {
  const double a = (l + 2) / (p - 1);
  const double L = a * (N - 2 - a);
  const double A = N - 2 - 2 * a;
  return p > (N + 2 + 2 * l) / (N - 2.0) && L > mu && mu >= L - A * A / (4 * (p - 1));
}

}  // namespace

TEST_CASE("membership_S examples") {
  CHECK(membership_S(Parameters(12, 0, 0, 5)));
  CHECK(h_cubic(0.5, 0, 12, 0) >= 0);
  CHECK_FALSE(membership_S(Parameters(11, 0, 0, 5)));
  CHECK(5 < p_critical(11, 0, 0).value());

  const double upper = 2 / ((1 - std::sqrt(0.2)) / 2) + 1;
  CHECK(upper == doctest::Approx(8.236).epsilon(1e-4));
  CHECK(upper_exponent(3, 0.2, 0).value() == doctest::Approx(upper).epsilon(1e-12));
  CHECK_FALSE(membership_S(Parameters(3, 0, 0.2, 20)));
  CHECK(membership_S(Parameters(3, 0, 0.2, 0.5 * (p_critical(3, 0, 0.2).value() + upper))));
}

TEST_CASE("membership_Sigma examples") {
  CHECK(membership_Sigma(Parameters(12, 0, 0, 5)));
  CHECK(sigma_oracle(12, 0, 0, 5));
  // N=11, p=5: L = 4.25, A = 8, so the lower bound is 4.25 − 64/16 = 0.25 > 0.
  CHECK_FALSE(membership_Sigma(Parameters(11, 0, 0, 5)));
  CHECK_FALSE(sigma_oracle(11, 0, 0, 5));
  CHECK_FALSE(sigma_lower_inequality(Parameters(11, 0, 0, 5)));
  CHECK(membership_S(Parameters(11, 0, 0, 5)) == membership_Sigma(Parameters(11, 0, 0, 5)));
  // μ ≥ L^{p−1}.
  CHECK_FALSE(membership_Sigma(Parameters(12, 0, 4.8, 5)));
  CHECK_FALSE(membership_Sigma(Parameters(12, 0, 4.75, 5)));
}

TEST_CASE("S equals Sigma away from boundaries") {
  for (auto [N, l] : {std::pair{11, 0.0}, std::pair{12, 0.0}, std::pair{15, 1.0}, std::pair{14, -0.5}}) {
    const double ms = mu_star(N, l);
    const double mu_lo = 2 * ms, mu_hi = mu_bar(N);
    const double p_hi = 3 * p_star(N, l);
    int compared = 0, in_S = 0;
    for (int i = 0; i < 10000; ++i) {
      const double mu = mu_lo + (mu_hi - mu_lo) * testing::halton(i, 0);
      const double p = 1.01 + (p_hi - 1.01) * testing::halton(i, 1);
      if (!(mu < mu_hi)) continue;
      if (near_boundary(N, l, mu, p, 1e-6)) continue;
      const Parameters params(N, l, mu, p);
      const bool s = membership_S(params);
      CHECK_MESSAGE(s == membership_Sigma(params), "N=", N, " l=", l, " mu=", mu, " p=", p);
      CHECK(membership_Sigma(params) == sigma_oracle(N, l, mu, p));
      ++compared;
      in_S += s;
    }
    CHECK(compared > 9000);
    CHECK(in_S > 100);
  }
}

TEST_CASE("classify") {
  CHECK(classify(10, 0, -1, 100).region == Region::Unstable);
  CHECK(classify(12, 0, 0, 5).region == Region::Stable);
  CHECK(classify(11, 0, -0.1, 4).region == Region::Unstable);
  CHECK(classify(2, 0, 0, 4).region == Region::Invalid);
  CHECK(classify(5, -2, 0, 4).region == Region::Invalid);
  CHECK(classify(5, 0, 2.25, 4).region == Region::Invalid);
  CHECK(classify(5, 0, 0, 1).region == Region::Invalid);
  CHECK(classify(5, 0, 0, 1).detail == "p_not_above_1");

  const double pc = p_critical(11, 0, 0).value();
  CHECK(classify(11, 0, 0, pc).region == Region::Boundary);
  CHECK(classify(11, 0, 0, pc).detail == "p_c");
  CHECK(classify(11, 0, 0, pc * (1 + 1e-6)).region == Region::Stable);

  const double ms = mu_star(11, 0);
  CHECK(classify(11, 0, 1.5 * ms, 13).detail == "mu_below_mu_star");
  const auto pm = p_plus_minus(0.5 * ms, 11, 0);
  CHECK(classify(11, 0, 0.5 * ms, 0.5 * (pc + pm.p_minus)).detail == "between_p_c_and_p_minus");
  CHECK(classify(11, 0, 0.5 * ms, pm.p_plus.value() + 1).detail == "above_p_plus");
  CHECK(classify(11, 0, 0.5 * ms, pm.p_plus.value()).region == Region::Boundary);
  CHECK(classify(3, 0, 0.2, 20).detail == "above_upper_bound");
}

TEST_CASE("sweep over the N > 10+4l diagram") {
  const SweepGrid grid{11, 0, {-0.3, 0.24, 50}, {1.1, 20, 50}};
  const SweepResult res = sweep(grid);
  REQUIRE(res.cells.size() == 2500);
  REQUIRE(res.curves.size() == 50);
  std::set<Region> seen;
  const double ms = mu_star(11, 0);
  for (const SweepCell& c : res.cells) {
    seen.insert(c.label.region);
    if (c.mu < ms) CHECK(c.label.region != Region::Stable);
    const bool stable = c.label.region == Region::Stable;
    const bool unstable = c.label.region == Region::Unstable;
    CHECK_FALSE((stable && unstable));
  }
  CHECK(seen.count(Region::Unstable));
  CHECK(seen.count(Region::Stable));
  CHECK(seen.count(Region::Unknown));

  // Row-major with p outer.
  CHECK(res.cells[1].p == res.cells[0].p);
  CHECK(res.cells[50].p > res.cells[0].p);

  // μ ≤ 0 columns: Unstable exactly below p_c(l,0).
  const double pc0 = p_critical(11, 0, 0).value();
  for (const SweepCell& c : res.cells)
    if (c.mu <= 0) CHECK((c.label.region == Region::Unstable) == (c.p < pc0));

  for (const CurveValues& cv : res.curves) {
    if (cv.mu > 0) {
      CHECK(cv.upper.has_value());
      CHECK_FALSE(cv.p_minus.has_value());
    } else if (cv.mu >= ms) {
      CHECK(cv.p_minus.has_value());
    } else {
      CHECK_FALSE(cv.p_minus.has_value());
    }
  }
}

TEST_CASE("sweep for N <= 10+4l has no stable cell with mu <= 0") {
  const SweepResult res = sweep({5, 0, {-1, 2, 10}, {1.1, 10, 10}});
  CHECK(res.cells.size() == 100);
  int stable_pos = 0;
  for (const SweepCell& c : res.cells) {
    if (c.mu <= 0) CHECK(c.label.region != Region::Stable);
    else stable_pos += c.label.region == Region::Stable;
  }
  CHECK(stable_pos > 0);
}

TEST_CASE("sweep grids") {
  const SweepResult one = sweep({12, 0, {0, 0, 1}, {5, 5, 1}});
  REQUIRE(one.cells.size() == 1);
  CHECK(one.cells[0].label.region == Region::Stable);
  CHECK_THROWS_AS(sweep({12, 0, {0, 1, 0}, {2, 5, 3}}), InvalidParameters);
  CHECK_THROWS_AS(sweep({12, 0, {1, 0, 3}, {2, 5, 3}}), InvalidParameters);
  CHECK_THROWS_AS(sweep({12, 0, {0, 25, 3}, {2, 5, 3}}), InvalidParameters);
  CHECK_THROWS_AS(sweep({12, 0, {0, 0, 2}, {2, 5, 3}}), InvalidParameters);
  CHECK_THROWS_AS(sweep({2, 0, {0, 0.1, 2}, {2, 5, 3}}), InvalidParameters);
}
