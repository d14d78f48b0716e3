#include "hardy/exponents.hpp"

#include <cmath>
#include <sstream>

#include "hardy/format.hpp"
#include "hardy/roots.hpp"

namespace hardy {

std::optional<std::string> Parameters::violation(int N, double l, double mu) {
  if (N < 3) return "N >= 3 required (got N=" + std::to_string(N) + ")";
  if (!std::isfinite(l) || !(l > -2.0)) return "l > -2 required (got l=" + format_number(l) + ")";
  if (!std::isfinite(mu) || !(mu < mu_bar(N)))
    return "mu < (N-2)^2/4 = " + format_number(mu_bar(N)) + " required (got mu=" + format_number(mu) + ")";
  return std::nullopt;
}

std::optional<std::string> Parameters::violation(int N, double l, double mu, double p) {
  if (auto v = violation(N, l, mu)) return v;
  if (!std::isfinite(p) || !(p >= kMinExponent))
    return "p > 1 required, with p >= 1+1e-9 (got p=" + format_number(p) + ")";
  return std::nullopt;
}

Parameters::Parameters(int N, double l, double mu, double p) : N_(N), l_(l), mu_(mu), p_(p) {
  if (auto v = violation(N, l, mu, p)) throw InvalidParameters(*v);
}

double Exponent::value() const {
  if (!value_) throw std::logic_error("Exponent::value: exponent is infinite");
  return *value_;
}

std::string Exponent::to_string() const { return value_ ? format_number(*value_) : std::string("inf"); }

double mu_bar(int N) {
  const double half = 0.5 * (N - 2);
  return half * half;
}

double sobolev_exponent(int N, double l) { return (N + 2 + 2 * l) / (N - 2.0); }

double nu_minus(int N, double mu) {
  const double mb = mu_bar(N);
  // Rationalized form avoids cancellation for small |μ|.
  return mu / (std::sqrt(mb) + std::sqrt(mb - mu));
}

double nu_plus(int N, double mu) {
  const double mb = mu_bar(N);
  return std::sqrt(mb) + std::sqrt(mb - mu);
}

DerivedConstants derive(const Parameters& params) {
  const int N = params.N();
  const double l = params.l(), mu = params.mu(), p = params.p();
  const double a = (l + 2) / (p - 1);
  DerivedConstants c{
      .params = params,
      .mu_bar = mu_bar(N),
      .mu_plus = std::fmax(mu, 0.0),
      .l_minus = std::fmin(l, 0.0),
      .scaling = a,
      .A = N - 2 - 2 * a,
      .L_pow = a * (N - 2 - a),
      .nu_minus = nu_minus(N, mu),
      .nu_plus = nu_plus(N, mu),
      .w0 = std::nullopt,
      .sobolev_p = sobolev_exponent(N, l),
  };
  if (c.L_pow > mu) c.w0 = std::pow(c.L_pow - mu, 1.0 / (p - 1));
  return c;
}

double gamma_max(int N, double mu, double p) {
  const double mb = mu_bar(N);
  const double mp = std::fmax(mu, 0.0);
  const double root = std::sqrt(mb * (mb - mp) * p * (p - 1));
  return ((2 * mb - mp) * p + mp - mb + 2 * root) / ((p - 1) * mp + mb);
}

double gamma_max(const Parameters& params) { return gamma_max(params.N(), params.mu(), params.p()); }

double f_of_p(int N, double l, double mu, double p) {
  return (2 * p + l + (l + 2) * gamma_max(N, mu, p)) / (p - 1);
}

double f_of_p(const Parameters& params) { return f_of_p(params.N(), params.l(), params.mu(), params.p()); }

bool has_lower_branch(int N, double l) { return N > 10 + 4 * l; }

Exponent p_critical_closed_form(int N, double l) {
  if (!has_lower_branch(N, l)) return Exponent::infinite();
  const double n2 = N - 2.0, nl = N + l, l2 = l + 2;
  const double num = n2 * n2 - 2 * l2 * nl + 2 * l2 * std::sqrt(nl * nl - n2 * n2);
  return Exponent::finite(num / (n2 * (N - 10 - 4 * l)));
}

Exponent solve_critical_exponent(int N, double l, double mu, const RootOptions& opts) {
  if (auto v = Parameters::violation(N, l, mu)) throw InvalidParameters(*v);
  auto excess = [&](double p) { return f_of_p(N, l, mu, p) - N; };

  // f decreases from +∞; grow the right end until f drops below N.
  double lo = kMinExponent, hi = 2.0;
  int doublings = 0;
  while (excess(hi) >= 0) {
    if (++doublings > 200) return Exponent::infinite();
    lo = hi;
    hi *= 2;
  }
  return Exponent::finite(bisect(excess, lo, hi, opts.rel_tol, opts.max_iter));
}

Exponent p_critical(int N, double l, double mu, const RootOptions& opts) {
  if (auto v = Parameters::violation(N, l, mu)) throw InvalidParameters(*v);
  if (mu <= 0) return p_critical_closed_form(N, l);
  return solve_critical_exponent(N, l, mu, opts);
}

double h_cubic(double m, double mu, int N, double l) {
  return ((4 * m + 4 * (l + 4 - N)) * m + (N - 2) * (N - 10 - 4 * l)) * m + 4 * mu * (l + 2);
}

namespace {

void require_lower_branch(int N, double l) {
  if (!has_lower_branch(N, l)) {
    std::ostringstream os;
    os << "curves p_star/p_plus/p_minus require N > 10+4l (got N=" << N << ", l=" << format_number(l) << ")";
    throw std::domain_error(os.str());
  }
}

}  // namespace

double mu_star(int N, double l) {
  require_lower_branch(N, l);
  const double gap = N - 10 - 4 * l;
  return -(2 * N + l - 2) * gap * gap / (108 * (l + 2));
}

double p_star(int N, double l) {
  require_lower_branch(N, l);
  return (N + 2 + 2 * l) / (N - 10 - 4 * l);
}

PlusMinus p_plus_minus(double mu, int N, double l, const RootOptions& opts) {
  require_lower_branch(N, l);
  const double ms = mu_star(N, l);
  if (mu > 0 || mu < ms * (1 + 1e-12))
    throw std::domain_error("p_plus_minus: mu=" + format_number(mu) + " outside [mu_star, 0] = [" +
                            format_number(ms) + ", 0]");
  mu = std::fmax(mu, ms);

  const double l2 = l + 2;
  const double m_peak = (N - 10 - 4 * l) / 6.0;
  const double m_top = std::sqrt(mu_bar(N));
  auto h = [&](double m) { return h_cubic(m, mu, N, l); };

  // At μ★ the local maximum of h touches zero and both roots merge.
  const double scale = 4 * l2 * std::fabs(ms);
  if (h(m_peak) <= 1e-13 * scale) {
    const double ps = p_star(N, l);
    return {ps, Exponent::finite(ps)};
  }

  const double m_minus = bisect(h, m_peak, m_top, opts.rel_tol, opts.max_iter);
  PlusMinus out{l2 / m_minus + 1, Exponent::infinite()};
  if (mu < 0) {
    const double m_plus = bisect(h, 0.0, m_peak, opts.rel_tol, opts.max_iter);
    out.p_plus = Exponent::finite(l2 / m_plus + 1);
  }
  return out;
}

double h_balance(double p, double gamma, int N, double l) { return N * (p - 1) - (gamma + 1) * l - 2 * (p + gamma); }

double gamma_star(double p, int N, double l) { return (N * (p - 1) - 2 * p - l) / (l + 2); }

}  // namespace hardy
