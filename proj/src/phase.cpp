#include "hardy/phase.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <boost/numeric/odeint.hpp>

#include "hardy/format.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;
using Stepper = odeint::runge_kutta_dopri5<State>;

struct PhaseSystem {
  const DerivedConstants& c;
  void operator()(const State& x, State& dxdt, double /*t*/) const { dxdt = vector_field(x[0], x[1], c); }
};

EquilibriumType classify_eigenvalues(const std::array<std::complex<double>, 2>& ev) {
  const double re0 = ev[0].real(), re1 = ev[1].real();
  if (ev[0].imag() != 0.0) {
    if (re0 < 0) return EquilibriumType::StableSpiral;
    if (re0 > 0) return EquilibriumType::UnstableSpiral;
    return EquilibriumType::Center;
  }
  if (re0 == 0.0 || re1 == 0.0) return EquilibriumType::Degenerate;
  if ((re0 > 0) != (re1 > 0)) return EquilibriumType::Saddle;
  return re0 < 0 ? EquilibriumType::StableNode : EquilibriumType::UnstableNode;
}

// Roots of λ² + Aλ − c = 0, larger real part first.
std::array<std::complex<double>, 2> linear_roots(double A, double c) {
  const double disc = A * A + 4 * c;
  if (disc >= 0) {
    const double s = std::sqrt(disc);
    return {std::complex<double>((-A + s) / 2, 0.0), std::complex<double>((-A - s) / 2, 0.0)};
  }
  const double s = std::sqrt(-disc);
  return {std::complex<double>(-A / 2, s / 2), std::complex<double>(-A / 2, -s / 2)};
}

}  // namespace

std::array<double, 2> vector_field(double w, double v, const DerivedConstants& c) {
  const double p = c.params.p(), mu = c.params.mu();
  return {v, -c.A * v + (c.L_pow - mu) * w - std::pow(std::fabs(w), p - 1) * w};
}

double energy(double w, double v, const DerivedConstants& c) {
  const double p = c.params.p(), mu = c.params.mu();
  return 0.5 * v * v - 0.5 * (c.L_pow - mu) * w * w + std::pow(std::fabs(w), p + 1) / (p + 1);
}

std::string_view to_string(EquilibriumType type) {
  switch (type) {
    case EquilibriumType::Saddle: return "Saddle";
    case EquilibriumType::StableNode: return "StableNode";
    case EquilibriumType::StableSpiral: return "StableSpiral";
    case EquilibriumType::UnstableNode: return "UnstableNode";
    case EquilibriumType::UnstableSpiral: return "UnstableSpiral";
    case EquilibriumType::Center: return "Center";
    case EquilibriumType::Degenerate: return "Degenerate";
  }
  return "?";
}

std::string_view to_string(EquilibriumTag tag) {
  switch (tag) {
    case EquilibriumTag::Origin: return "origin";
    case EquilibriumTag::PositiveW0: return "+w0";
    case EquilibriumTag::NegativeW0: return "-w0";
  }
  return "?";
}

std::vector<EquilibriumReport> equilibria(const DerivedConstants& c) {
  const double mu = c.params.mu(), p = c.params.p();
  std::vector<EquilibriumReport> out;
  const double c0 = c.L_pow - mu;
  const auto ev0 = linear_roots(c.A, c0);
  out.push_back({EquilibriumTag::Origin, 0.0, 0.0, c0, ev0, classify_eigenvalues(ev0)});
  if (c.w0) {
    // d/dw [(L−μ)w − w^p] at w₀ is (L−μ)(1−p).
    const double c1 = (c.L_pow - mu) * (1 - p);
    const auto ev1 = linear_roots(c.A, c1);
    const auto type = classify_eigenvalues(ev1);
    out.push_back({EquilibriumTag::PositiveW0, *c.w0, 0.0, c1, ev1, type});
    out.push_back({EquilibriumTag::NegativeW0, -*c.w0, 0.0, c1, ev1, type});
  }
  return out;
}

double w0_discriminant(const DerivedConstants& c) {
  return c.A * c.A - 4 * (c.params.p() - 1) * (c.L_pow - c.params.mu());
}

double origin_unstable_eigenvalue(const DerivedConstants& c) {
  const double c0 = c.L_pow - c.params.mu();
  if (!(c0 > 0))
    throw std::domain_error("origin is not a saddle: L^{p-1} - mu = " + format_number(c0) + " <= 0");
  return (-c.A + std::sqrt(c.A * c.A + 4 * c0)) / 2;
}

PhaseState Trajectory::at(double t) const {
  if (states.empty()) throw std::out_of_range("Trajectory::at: empty trajectory");
  if (t < t_begin() || t > t_end())
    throw std::out_of_range("Trajectory::at: t=" + format_number(t) + " outside [" + format_number(t_begin()) + ", " +
                            format_number(t_end()) + "]");
  auto it = std::upper_bound(states.begin(), states.end(), t,
                             [](double tt, const PhaseState& s) { return tt < s.t; });
  const PhaseState& left = *std::prev(it);
  if (t == left.t) return left;
  State x{left.w, left.v};
  Stepper stepper;
  stepper.do_step(PhaseSystem{constants_}, x, left.t, t - left.t);
  return {t, x[0], x[1]};
}

Trajectory shoot_unstable_manifold(const DerivedConstants& c, const ShootConfig& cfg) {
  double lambda;
  try {
    lambda = origin_unstable_eigenvalue(c);
  } catch (const std::domain_error& e) {
    throw ShootingError(ShootingError::Kind::NotSaddle, e.what());
  }
  if (!(cfg.offset > 0)) throw std::invalid_argument("shoot: offset must be > 0");

  const double sign = cfg.negative_branch ? -1.0 : 1.0;
  const double norm = std::hypot(1.0, lambda);
  const double w_init = cfg.offset / norm;
  const double t0 = cfg.t_start.value_or(std::log(w_init) / lambda);
  if (!(cfg.t_max > t0)) throw std::invalid_argument("shoot: t_max must exceed the start time");

  Trajectory traj(c, cfg.integrator);
  State x{sign * w_init, sign * lambda * w_init};
  double t = t0;
  traj.states.push_back({t, x[0], x[1]});

  const IntegratorConfig& ic = cfg.integrator;
  auto controlled = odeint::make_controlled(ic.abs_tol, ic.rel_tol, Stepper());
  const PhaseSystem system{c};

  const std::optional<double> w0 = c.w0;
  double dt = ic.initial_step;
  double e_prev = energy(x[0], x[1], c);
  int last_side = 0;
  double t_inside = std::nan("");  // entry time into the convergence ball

  while (t < cfg.t_max) {
    dt = std::min({dt, ic.max_step, cfg.t_max - t});
    int rejections = 0;
    while (controlled.try_step(system, x, t, dt) == odeint::fail) {
      if (++rejections > 500) throw std::runtime_error("shoot: step size underflow at t=" + format_number(t));
    }
    traj.states.push_back({t, x[0], x[1]});

    const double w = sign * x[0];
    if (!(w > 0)) {
      throw ShootingError(ShootingError::Kind::LeftPositiveRegion,
                          "trajectory left the positive region (w=" + format_number(x[0]) +
                              " at t=" + format_number(t) + ")");
    }

    const double e = energy(x[0], x[1], c);
    traj.max_energy_violation = std::fmax(traj.max_energy_violation, (e - e_prev) / std::fmax(1.0, std::fabs(e_prev)));
    e_prev = e;

    if (w0) {
      const double d = w - *w0;
      // Hysteresis keeps integration noise near w₀ from counting as crossings.
      if (std::fabs(d) > cfg.convergence_radius) {
        const int side = d > 0 ? 1 : -1;
        if (last_side != 0 && side != last_side) ++traj.sign_changes_of_w_minus_w0;
        last_side = side;
      }
      if (std::hypot(d, x[1]) < cfg.convergence_radius) {
        if (std::isnan(t_inside)) t_inside = t;
        if (t - t_inside >= cfg.convergence_window) {
          traj.converged_to = cfg.negative_branch ? EquilibriumTag::NegativeW0 : EquilibriumTag::PositiveW0;
          break;
        }
      } else {
        t_inside = std::nan("");
      }
    }
  }
  return traj;
}

PhaseState integrate_fixed(const DerivedConstants& c, PhaseState start, double t_end, int steps) {
  if (steps < 1) throw std::invalid_argument("integrate_fixed: steps must be >= 1");
  State x{start.w, start.v};
  const double h = (t_end - start.t) / steps;
  Stepper stepper;
  double t = start.t;
  for (int i = 0; i < steps; ++i) {
    stepper.do_step(PhaseSystem{c}, x, t, h);
    t = start.t + (i + 1) * h;
  }
  return {t_end, x[0], x[1]};
}

bool within_envelope(const Trajectory& traj, double slack) {
  const DerivedConstants& c = traj.constants();
  if (!c.w0 || traj.states.empty()) return false;
  const double sign = traj.states.front().w < 0 ? -1.0 : 1.0;
  const double cap = *c.w0 * (1 + slack);
  for (const PhaseState& s : traj.states) {
    const double w = sign * s.w;
    if (!(w > 0 && w < cap)) return false;
  }
  return true;
}

double energy_balance_defect(const Trajectory& traj) {
  const DerivedConstants& c = traj.constants();
  double dissipated = 0.0;
  for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
    const double a = traj.states[i].t, b = traj.states[i + 1].t;
    dissipated += quad::composite<1>(
        [&](double t) {
          const double v = traj.at(t).v;
          return std::array<double, 1>{v * v};
        },
        a, b, 1)[0];
  }
  const PhaseState& s0 = traj.states.front();
  const PhaseState& s1 = traj.states.back();
  return energy(s1.w, s1.v, c) - energy(s0.w, s0.v, c) + c.A * dissipated;
}

RadialSolution to_radial(const Trajectory& traj) {
  if (traj.states.empty()) throw std::invalid_argument("to_radial: empty trajectory");
  const DerivedConstants& c = traj.constants();
  const double a = c.scaling;

  RadialSolution out;
  out.samples.reserve(traj.states.size());
  for (const PhaseState& s : traj.states) {
    const double r = std::exp(s.t);
    const double ra = std::exp(-a * s.t);
    out.samples.push_back({r, ra * s.w, ra / r * (s.v - a * s.w)});
  }

  auto shared = std::make_shared<const Trajectory>(traj);
  out.profile.kind = "shot";
  out.profile.r_min = std::exp(traj.t_begin());
  out.profile.r_max = std::exp(traj.t_end());
  out.profile.eval = [shared, a](double r) {
    const double t = std::log(r);
    const PhaseState s = shared->at(std::clamp(t, shared->t_begin(), shared->t_end()));
    const double ra = std::exp(-a * t);
    return RadialValue{ra * s.w, ra / r * (s.v - a * s.w)};
  };

  if (traj.states.size() < 2) {
    out.lambda_fit = out.samples.front().u * std::pow(out.samples.front().r, c.nu_minus);
    return out;
  }

  // Fit over the earliest decade while w still follows c·e^{λ₀⁺ t} to 10%.
  const double t0 = traj.t_begin();
  const double t1 = std::min(traj.t_end(), t0 + std::log(10.0));
  const PhaseState first = traj.states.front();
  std::optional<double> lambda0;
  if (c.L_pow > c.params.mu()) lambda0 = origin_unstable_eigenvalue(c);

  constexpr int kFitPoints = 41;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int i = 0; i < kFitPoints; ++i) {
    const double t = t0 + (t1 - t0) * i / (kFitPoints - 1);
    const PhaseState s = traj.at(t);
    if (lambda0) {
      const double lead = first.w * std::exp(*lambda0 * (t - t0));
      if (std::fabs(s.w - lead) > 0.1 * std::fabs(lead)) break;
    }
    const double x = t;
    const double y = std::log(std::fabs(s.w)) - a * t;  // ln|u|
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2) out.decay_slope_fit = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.lambda_fit = std::fabs(out.samples.front().u) * std::pow(out.samples.front().r, c.nu_minus);
  return out;
}

RadialProfile zero_profile() {
  RadialProfile z;
  z.kind = "zero";
  z.eval = [](double) { return RadialValue{0.0, 0.0}; };
  return z;
}

RadialProfile singular_solution(const DerivedConstants& c) {
  if (!c.w0)
    throw std::domain_error("singular solution requires L^{p-1} > mu (L^{p-1}=" + format_number(c.L_pow) +
                            ", mu=" + format_number(c.params.mu()) + ")");
  const double w0 = *c.w0, a = c.scaling;
  RadialProfile s;
  s.kind = "singular";
  s.eval = [w0, a](double r) {
    const double u = w0 * std::pow(r, -a);
    return RadialValue{u, -a * u / r};
  };
  return s;
}

double radial_ode_residual(const RadialProfile& u, const Parameters& params, double r) {
  const int N = params.N();
  const double h = 4e-3 * r;
  if (!u.covers(r - 2 * h, r + 2 * h)) throw std::out_of_range("radial_ode_residual: stencil outside profile domain");
  // Fourth-order central difference of u′, Richardson-extrapolated to sixth order.
  auto d4 = [&](double k) {
    return (-u(r + 2 * k).du + 8 * u(r + k).du - 8 * u(r - k).du + u(r - 2 * k).du) / (12 * k);
  };
  const double d2u = (16 * d4(0.5 * h) - d4(h)) / 15;
  const RadialValue v = u(r);
  const double t1 = d2u;
  const double t2 = (N - 1) * v.du / r;
  const double t3 = params.mu() * v.u / (r * r);
  const double t4 = std::pow(r, params.l()) * std::pow(std::fabs(v.u), params.p() - 1) * v.u;
  const double scale = std::fabs(t1) + std::fabs(t2) + std::fabs(t3) + std::fabs(t4);
  return scale == 0.0 ? 0.0 : std::fabs(t1 + t2 + t3 + t4) / scale;
}

double kelvin_weight(const Parameters& params) { return (params.N() - 2) * (params.p() - 1) - (params.l() + 4); }

KelvinResult kelvin_transform(const RadialSolution& solution, const Parameters& params) {
  const double m = kelvin_weight(params);
  if (!(m > -2))
    throw std::domain_error("Kelvin transform requires p > (N+l)/(N-2), giving weight m=" + format_number(m) +
                            " <= -2");
  const int N = params.N();
  Parameters transformed(N, m, params.mu(), params.p());

  auto map = [N](double rho, RadialValue u) {
    const double pw = std::pow(rho, 2 - N);
    return RadialValue{pw * u.u, (2 - N) * pw / rho * u.u - pw / (rho * rho) * u.du};
  };

  RadialSolution out;
  out.samples.reserve(solution.samples.size());
  for (auto it = solution.samples.rbegin(); it != solution.samples.rend(); ++it) {
    const double rho = 1.0 / it->r;
    const RadialValue v = map(rho, {it->u, it->du});
    out.samples.push_back({rho, v.u, v.du});
  }
  out.lambda_fit = std::nan("");
  out.decay_slope_fit = std::nan("");

  const RadialProfile& src = solution.profile;
  out.profile.kind = "kelvin(" + src.kind + ")";
  out.profile.r_min = src.r_max == std::numeric_limits<double>::infinity() ? 0.0 : 1.0 / src.r_max;
  out.profile.r_max = src.r_min == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / src.r_min;
  auto eval = src.eval;
  out.profile.eval = [eval, map](double rho) { return map(rho, eval(1.0 / rho)); };
  return {std::move(out), transformed};
}

}  // namespace hardy
