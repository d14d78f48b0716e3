#include "hardy/io.hpp"

#include <fstream>
#include <sstream>

namespace hardy {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

json to_json(const Exponent& e) { return e.is_infinite() ? json("inf") : json(e.value()); }

json to_json(const Parameters& params) {
  return {{"N", params.N()}, {"l", params.l()}, {"mu", params.mu()}, {"p", params.p()}};
}

json to_json(const DerivedConstants& c) {
  json j{{"mu_bar", c.mu_bar},     {"mu_plus", c.mu_plus},   {"l_minus", c.l_minus},
         {"A", c.A},               {"L_pow", c.L_pow},       {"nu_minus", c.nu_minus},
         {"nu_plus", c.nu_plus},   {"sobolev_p", c.sobolev_p}};
  j["w0"] = c.w0 ? json(*c.w0) : json(nullptr);
  return j;
}

json to_json(const EquilibriumReport& e) {
  json ev = json::array();
  for (const auto& z : e.eigenvalues) ev.push_back({{"re", z.real()}, {"im", z.imag()}});
  return {{"tag", std::string(to_string(e.tag))},
          {"w", e.w},
          {"v", e.v},
          {"coefficient", e.coefficient},
          {"eigenvalues", ev},
          {"type", std::string(to_string(e.type))}};
}

json to_json(const RadialBump& b) {
  return {{"center_log_r", b.center_log_r}, {"half_width_log_r", b.half_width_log_r}, {"tilt", b.tilt}};
}

json to_json(const QuadraticFormReport& q) {
  return {{"value", q.value},
          {"gradient_term", q.gradient_term},
          {"hardy_term", q.hardy_term},
          {"potential_term", q.potential_term},
          {"quadrature_error_estimate", q.quadrature_error_estimate}};
}

json to_json(const SearchResult& s) {
  json j{{"found_negative", s.witness.has_value()},
         {"witness", s.witness ? to_json(*s.witness) : json(nullptr)},
         {"best_ratio", number(s.best_ratio)},
         {"evaluations", s.evaluations}};
  if (s.evaluations > 0) {
    j["best_bump"] = to_json(s.best_bump);
    j["best"] = to_json(s.best);
  }
  return j;
}

json to_json(const EstimateReport& r) {
  json j{{"R", r.R},
         {"gamma", r.gamma},
         {"m", r.m},
         {"lhs", number(r.lhs)},
         {"rhs_integral", number(r.rhs_integral)},
         {"fitted_constant", number(r.fitted_constant)}};
  j["alpha"] = r.alpha ? json(*r.alpha) : json(nullptr);
  j["beta"] = r.beta ? json(*r.beta) : json(nullptr);
  return j;
}

json to_json(const AnnulusReport& r) {
  json j{{"radii", r.radii},
         {"shell_integrals", r.shell_integrals},
         {"nested_integrals", r.nested_integrals},
         {"exponent", r.exponent}};
  j["fitted_rate"] = r.fitted_rate ? json(*r.fitted_rate) : json(nullptr);
  j["tail_rate"] = number(r.tail_rate);
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  j["envelope_pass"] = r.envelope_pass;
  return j;
}

json to_json(const PohozaevReport& r) {
  return {{"bulk", r.bulk}, {"boundary", r.boundary}, {"residual", number(r.residual)}};
}

json to_json(const EnergyBalance& e) {
  return {{"coefficient", e.coefficient},
          {"gradient_hardy", e.gradient_hardy},
          {"potential", e.potential},
          {"discrepancy", e.discrepancy},
          {"boundary_flux", e.boundary_flux}};
}

namespace {

json range_json(const Range& r) { return {{"lo", r.lo}, {"hi", r.hi}, {"count", r.count}}; }

std::string optional_field(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }
std::string optional_field(const std::optional<Exponent>& x) { return x ? x->to_string() : std::string(); }

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }
json optional_json(const std::optional<Exponent>& x) { return x ? to_json(*x) : json(nullptr); }

}  // namespace

std::string sweep_csv(const SweepResult& result) {
  std::string out = "mu,p,label,detail\n";
  for (const SweepCell& c : result.cells) {
    out += format_number(c.mu) + ',' + format_number(c.p) + ',' + std::string(to_string(c.label.region)) + ',' +
           c.label.detail + '\n';
  }
  return out;
}

std::string curves_csv(const SweepResult& result) {
  std::string out = "mu,p_c,p_minus,p_plus,upper\n";
  for (const CurveValues& c : result.curves) {
    out += format_number(c.mu) + ',' + c.p_c.to_string() + ',' + optional_field(c.p_minus) + ',' +
           optional_field(c.p_plus) + ',' + optional_field(c.upper) + '\n';
  }
  return out;
}

json sweep_json(const SweepResult& result) {
  json cells = json::array();
  for (const SweepCell& c : result.cells)
    cells.push_back({{"mu", c.mu}, {"p", c.p}, {"label", std::string(to_string(c.label.region))},
                     {"detail", c.label.detail}});
  json mu = json::array(), pc = json::array(), pm = json::array(), pp = json::array(), up = json::array();
  for (const CurveValues& c : result.curves) {
    mu.push_back(c.mu);
    pc.push_back(to_json(c.p_c));
    pm.push_back(optional_json(c.p_minus));
    pp.push_back(optional_json(c.p_plus));
    up.push_back(optional_json(c.upper));
  }
  return {{"schema_version", kSchemaVersion},
          {"grid",
           {{"N", result.grid.N}, {"l", result.grid.l}, {"mu", range_json(result.grid.mu)},
            {"p", range_json(result.grid.p)}}},
          {"cells", cells},
          {"curves", {{"mu", mu}, {"p_c", pc}, {"p_minus", pm}, {"p_plus", pp}, {"upper", up}}}};
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,w,v\n";
  for (const PhaseState& s : traj.states)
    out += format_number(s.t) + ',' + format_number(s.w) + ',' + format_number(s.v) + '\n';
  return out;
}

std::string radial_csv(const RadialSolution& sol) {
  std::string out = "r,u,du_dr\n";
  for (const RadialSample& s : sol.samples)
    out += format_number(s.r) + ',' + format_number(s.u) + ',' + format_number(s.du) + '\n';
  return out;
}

}  // namespace hardy
