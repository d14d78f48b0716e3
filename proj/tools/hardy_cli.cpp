// hardy: command-line front end for the critical-exponent, region, shooting
// and verification routines.
//
// Exit codes: 0 pass, 1 verification failed, 2 bad parameters, 3 I/O error,
// 4 dynamical precondition (origin not a saddle, trajectory left w > 0).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <CLI11.hpp>

#include "hardy/estimates.hpp"
#include "hardy/exponents.hpp"
#include "hardy/io.hpp"
#include "hardy/phase.hpp"
#include "hardy/regions.hpp"
#include "hardy/stability.hpp"

namespace fs = std::filesystem;
using namespace hardy;

namespace {

enum Exit { kPass = 0, kFail = 1, kBadParams = 2, kIo = 3, kDynamics = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stdout)); }

std::string verdict(bool pass) {
  if (!use_color()) return pass ? "PASS" : "FAIL";
  return pass ? "\033[32mPASS\033[0m" : "\033[31mFAIL\033[0m";
}

Range parse_range(const std::string& text, const char* flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw UsageError(std::string(flag) + " expects lo:hi:count, got '" + text + "'");
  try {
    std::size_t used = 0;
    Range r{std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2], &used)};
    if (used != parts[2].size()) throw std::invalid_argument("count");
    return r;
  } catch (const std::logic_error&) {
    throw UsageError(std::string(flag) + " expects lo:hi:count, got '" + text + "'");
  }
}

// Options shared by several subcommands; unset values come from --config or stay empty.
struct Common {
  std::optional<int> N;
  std::optional<double> l;
  std::optional<double> mu;
  std::optional<double> p;
  std::string out;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::string config;
};

void add_tuple_flags(CLI::App* cmd, Common& o, bool with_p) {
  cmd->add_option("--N", o.N, "dimension N >= 3 (required)");
  cmd->add_option("--l", o.l, "weight exponent l > -2 (required)");
  cmd->add_option("--mu", o.mu, "Hardy coefficient mu < (N-2)^2/4 (required)");
  if (with_p) cmd->add_option("--p", o.p, "nonlinearity exponent p > 1 (required)");
}

void add_config_flag(CLI::App* cmd, Common& o) {
  cmd->add_option("--config", o.config, "JSON file of flag values; explicit flags take precedence");
}

// Fills every option that was not given on the command line from the JSON config.
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  json cfg;
  try {
    cfg = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config " + path + ": top level must be an object");
  for (CLI::Option* opt : cmd->get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "config" || name == "help") continue;
    auto it = cfg.find(name);
    if (it == cfg.end()) continue;
    std::string value;
    if (it->is_string()) {
      value = it->get<std::string>();
    } else if (it->is_boolean()) {
      value = it->get<bool>() ? "true" : "false";
    } else if (it->is_number_integer()) {
      value = std::to_string(it->get<long long>());
    } else if (it->is_number()) {
      value = format_number(it->get<double>());
    } else {
      throw UsageError("config key '" + name + "' must be a scalar");
    }
    opt->add_result(value);
    opt->run_callback();
  }
}

Parameters tuple_from(const Common& o) {
  if (!o.N || !o.l || !o.mu || !o.p) throw UsageError("--N, --l, --mu and --p are required");
  if (auto v = Parameters::violation(*o.N, *o.l, *o.mu, *o.p)) throw InvalidParameters(*v);
  return {*o.N, *o.l, *o.mu, *o.p};
}

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  throw UsageError("unrecognized --format '" + format + "'");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file(out_path, content);
  }
}

// ---------------------------------------------------------------- exponents

int cmd_exponents(const Common& o) {
  check_format(o.format, {"text", "json"});
  if (!o.N || !o.l || !o.mu) throw UsageError("--N, --l and --mu are required");
  const int N = *o.N;
  const double l = *o.l, mu = *o.mu;
  if (auto v = Parameters::violation(N, l, mu)) throw InvalidParameters(*v);

  const Exponent pc = p_critical(N, l, mu);
  json j{{"schema_version", kSchemaVersion}, {"N", N}, {"l", l}, {"mu", mu}};
  j["p_c"] = to_json(pc);
  j["gamma_M_at_p_c"] = pc.is_finite() ? json(gamma_max(N, mu, pc.value())) : json(nullptr);
  j["nu_minus"] = nu_minus(N, mu);
  j["nu_plus"] = nu_plus(N, mu);
  j["mu_bar"] = mu_bar(N);
  j["sobolev_p"] = sobolev_exponent(N, l);
  j["upper"] = to_json(upper_exponent(N, mu, l));
  if (has_lower_branch(N, l)) {
    j["mu_star"] = mu_star(N, l);
    j["p_star"] = p_star(N, l);
    if (mu <= 0 && mu >= mu_star(N, l)) {
      const PlusMinus pm = p_plus_minus(mu, N, l);
      j["p_minus"] = pm.p_minus;
      j["p_plus"] = to_json(pm.p_plus);
    }
  }

  if (o.format == "json") {
    emit(o.out, j.dump(2) + "\n");
    return kPass;
  }
  std::ostringstream os;
  auto line = [&](const char* key, const json& v) {
    os << key << " = " << (v.is_string() ? v.get<std::string>() : v.is_null() ? "undefined" : v.dump()) << '\n';
  };
  auto num = [&](const char* key, double v) { os << key << " = " << format_number(v) << '\n'; };
  os << "N = " << N << ", l = " << format_number(l) << ", mu = " << format_number(mu) << '\n';
  os << "p_c = " << pc.to_string() << '\n';
  if (pc.is_finite()) num("gamma_M(p_c)", gamma_max(N, mu, pc.value()));
  num("nu_minus", nu_minus(N, mu));
  num("nu_plus", nu_plus(N, mu));
  num("mu_bar", mu_bar(N));
  num("sobolev_p", sobolev_exponent(N, l));
  line("upper", j["upper"]);
  for (const char* key : {"mu_star", "p_star", "p_minus", "p_plus"})
    if (j.contains(key)) {
      if (j[key].is_number()) num(key, j[key].get<double>());
      else line(key, j[key]);
    }
  emit(o.out, os.str());
  return kPass;
}

// -------------------------------------------------------------------- sweep

int cmd_sweep(const Common& o, const std::string& mu_range, const std::string& p_range) {
  check_format(o.format, {"csv", "json"});
  if (!o.N || !o.l) throw UsageError("--N and --l are required");
  if (mu_range.empty() || p_range.empty()) throw UsageError("--mu-range and --p-range are required");
  const SweepGrid grid{*o.N, *o.l, parse_range(mu_range, "--mu-range"), parse_range(p_range, "--p-range")};
  const SweepResult res = sweep(grid);

  if (o.format == "json") {
    json j = sweep_json(res);
    j["seed"] = o.seed;
    emit(o.out, j.dump(2) + "\n");
  } else if (o.out.empty()) {
    std::cout << sweep_csv(res) << '\n' << curves_csv(res);
  } else {
    const fs::path out(o.out);
    write_file(out, sweep_csv(res));
    write_file(out.parent_path() / (out.stem().string() + "_curves" + out.extension().string()), curves_csv(res));
  }
  std::size_t counts[5] = {};
  for (const SweepCell& c : res.cells) ++counts[static_cast<int>(c.label.region)];
  std::cerr << res.cells.size() << " cells: " << counts[0] << " Unstable, " << counts[1] << " Stable, " << counts[2]
            << " Unknown, " << counts[3] << " Invalid, " << counts[4] << " Boundary\n";
  return kPass;
}

// -------------------------------------------------------------------- solve

struct ShootFlags {
  double offset = 1e-8;
  double t_max = 200;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  bool negative = false;
};

void add_shoot_flags(CLI::App* cmd, ShootFlags& s) {
  cmd->add_option("--offset", s.offset, "initial distance from the origin along the unstable eigenvector")
      ->capture_default_str();
  cmd->add_option("--t-max", s.t_max, "integration end time (t = ln r)")->capture_default_str();
  cmd->add_option("--abs-tol", s.abs_tol, "integrator absolute tolerance")->capture_default_str();
  cmd->add_option("--rel-tol", s.rel_tol, "integrator relative tolerance")->capture_default_str();
  cmd->add_flag("--negative-branch", s.negative, "follow the w < 0 branch");
}

ShootConfig shoot_config(const ShootFlags& s) {
  if (!(s.offset > 0) || !(s.abs_tol > 0) || !(s.rel_tol > 0)) throw UsageError("offset and tolerances must be > 0");
  ShootConfig cfg;
  cfg.offset = s.offset;
  cfg.t_max = s.t_max;
  cfg.negative_branch = s.negative;
  cfg.integrator.abs_tol = s.abs_tol;
  cfg.integrator.rel_tol = s.rel_tol;
  return cfg;
}

// Bumps on the interior radii [0.05, 50] clipped to the solution's domain.
std::vector<RadialBump> interior_bumps(const RadialProfile& u, const Parameters& params, int count, std::uint64_t seed) {
  SearchBounds b;
  b.center_lo = -1.0;
  b.center_hi = 2.0;
  b.width_lo = 0.2;
  b.width_hi = 1.5;
  b.tilts = {0.0};
  b = search_bounds_for(u, params, b);
  return bump_family(b, count, seed);
}

int cmd_solve(const Common& o, const ShootFlags& flags) {
  check_format(o.format, {"csv", "json"});
  const Parameters params = tuple_from(o);
  const DerivedConstants c = derive(params);
  const Trajectory traj = shoot_unstable_manifold(c, shoot_config(flags));
  const RadialSolution sol = to_radial(traj);

  const bool envelope = within_envelope(traj);
  const auto bumps = interior_bumps(sol.profile, params, 10, o.seed);
  const double weak = verify_weak_solution(sol.profile, params, bumps);

  json eq = json::array();
  for (const auto& e : equilibria(c)) eq.push_back(to_json(e));
  json summary{{"schema_version", kSchemaVersion},
               {"parameters", to_json(params)},
               {"derived", to_json(c)},
               {"region", std::string(to_string(classify(params.N(), params.l(), params.mu(), params.p()).region))},
               {"equilibria", eq},
               {"converged_to", traj.converged_to ? json(std::string(to_string(*traj.converged_to))) : json(nullptr)},
               {"t_begin", traj.t_begin()},
               {"t_end", traj.t_end()},
               {"steps", traj.states.size()},
               {"sign_changes_of_w_minus_w0", traj.sign_changes_of_w_minus_w0},
               {"oscillates", traj.sign_changes_of_w_minus_w0 >= 2},
               {"envelope", envelope ? "pass" : "fail"},
               {"max_energy_violation", traj.max_energy_violation},
               {"energy_balance_defect", energy_balance_defect(traj)},
               {"decay_slope_fit", sol.decay_slope_fit},
               {"decay_slope_expected", 0.0 - c.nu_minus},
               {"lambda_fit", sol.lambda_fit},
               {"weak_form_residual", weak},
               {"seed", o.seed}};

  if (!o.out.empty()) {
    const std::string stem = o.out;
    if (o.format == "json") {
      json states = json::array();
      for (const PhaseState& s : traj.states) states.push_back({s.t, s.w, s.v});
      json samples = json::array();
      for (const RadialSample& s : sol.samples) samples.push_back({s.r, s.u, s.du});
      write_file(stem + "_trajectory.json", json{{"schema_version", kSchemaVersion},
                                                 {"columns", {"t", "w", "v"}},
                                                 {"rows", states}}
                                                .dump() +
                                                "\n");
      write_file(stem + "_radial.json", json{{"schema_version", kSchemaVersion},
                                             {"columns", {"r", "u", "du_dr"}},
                                             {"rows", samples}}
                                            .dump() +
                                            "\n");
    } else {
      write_file(stem + "_trajectory.csv", trajectory_csv(traj));
      write_file(stem + "_radial.csv", radial_csv(sol));
    }
    write_file(stem + "_summary.json", summary.dump(2) + "\n");
  }
  std::cout << summary.dump(2) << '\n';
  return kPass;
}

// -------------------------------------------------------------------- check

struct CheckFlags {
  std::string target;
  std::string source = "singular";
  std::optional<double> sigma;
  std::optional<double> R;
  std::optional<double> tol;
  double gamma = 1.0;
  std::vector<double> radii{1, 2, 4, 8, 16, 32, 64};
  double r0 = 0.5;
  double ratio = 2.0;
  int shells = 6;
  int bumps = 20;
};

int cmd_check(const Common& o, const CheckFlags& f, const ShootFlags& sf) {
  check_format(o.format, {"text", "json"});
  if (f.source != "singular" && f.source != "shoot") throw UsageError("--source must be 'shoot' or 'singular'");
  const Parameters params = tuple_from(o);
  const DerivedConstants c = derive(params);
  const bool shot = f.source == "shoot";

  RadialProfile u;
  if (shot) {
    u = to_radial(shoot_unstable_manifold(c, shoot_config(sf))).profile;
  } else {
    if (!c.w0)
      throw InvalidParameters("singular solution requires L^{p-1} > mu (L^{p-1}=" + format_number(c.L_pow) +
                              ", mu=" + format_number(params.mu()) + ")");
    u = singular_solution(c);
  }

  json report{{"schema_version", kSchemaVersion}, {"target", f.target}, {"source", f.source},
              {"parameters", to_json(params)}};
  bool pass = false;
  std::ostringstream text;

  if (f.target == "stability") {
    const HardyMargin margin = hardy_sufficient(params);
    const SearchBounds bounds = search_bounds_for(u, params);
    const SearchResult search = adversarial_search(u, params, bounds);
    json q_values = json::array();
    bool family_ok = true;
    for (const RadialBump& b : bump_family(bounds, f.bumps, o.seed)) {
      const QuadraticFormReport q = q_form_radial(u, b, params);
      family_ok = family_ok && q.value >= -kStabilityTolerance * q.gradient_term;
      q_values.push_back({{"bump", to_json(b)}, {"value", q.value}, {"gradient_term", q.gradient_term}});
    }
    pass = !search.witness && family_ok;
    report["margin"] = margin.margin;
    report["hardy_sufficient"] = margin.sufficient;
    report["search_result"] = to_json(search);
    report["q_values"] = q_values;
    text << "hardy margin = " << format_number(margin.margin) << (margin.sufficient ? " (>= 0)" : " (< 0)") << '\n';
    text << "adversarial search: " << search.evaluations << " evaluations, min Q/grad = "
         << format_number(search.best_ratio) << '\n';
    if (search.witness)
      text << "negative bump: center_log_r = " << format_number(search.witness->center_log_r)
           << ", half_width_log_r = " << format_number(search.witness->half_width_log_r)
           << ", tilt = " << format_number(search.witness->tilt) << ", Q = " << format_number(search.best.value)
           << '\n';
  } else if (f.target == "prop31") {
    const EstimateSweep sw = verify_prop31_sweep(u, params, f.gamma, f.radii);
    json reps = json::array();
    for (const auto& r : sw.reports) {
      reps.push_back(to_json(r));
      text << "R = " << format_number(r.R) << "  lhs = " << format_number(r.lhs)
           << "  rhs = " << format_number(r.rhs_integral) << "  C = " << format_number(r.fitted_constant) << '\n';
    }
    pass = sw.bounded;
    report["reports"] = reps;
    report["final_growth_slope"] = sw.final_growth_slope;
    report["bounded"] = sw.bounded;
    report["scaling_exponent"] = scaling_exponent(params, f.gamma);
    text << "growth slope of C over the last radii = " << format_number(sw.final_growth_slope) << '\n';
  } else if (f.target == "pohozaev") {
    const double sigma = f.sigma.value_or(shot ? 0.1 : 0.5);
    const double R = f.R.value_or(shot ? 10.0 : 2.0);
    const double tol = f.tol.value_or(shot ? 1e-5 : 1e-8);
    if (!(tol > 0)) throw UsageError("--tol must be > 0");
    const PohozaevReport rep = pohozaev_check(u, params, sigma, R);
    pass = rep.residual < tol;
    report["sigma"] = sigma;
    report["R"] = R;
    report["tol"] = tol;
    report["pohozaev"] = to_json(rep);
    report["energy_balance"] = to_json(energy_identity_balance(u, params, sigma, R));
    text << "bulk = " << format_number(rep.bulk) << "  boundary = " << format_number(rep.boundary)
         << "  residual = " << format_number(rep.residual) << " (tol " << format_number(tol) << ")\n";
  } else if (f.target == "annulus") {
    if (f.shells < 2 || !(f.ratio > 1) || !(f.r0 > 0)) throw UsageError("annulus needs --shells >= 2, --ratio > 1, --r0 > 0");
    std::vector<double> radii;
    for (int k = 0; k <= f.shells; ++k) radii.push_back(f.r0 * std::pow(f.ratio, k));
    const AnnulusReport rep = annulus_growth(u, params, f.gamma, radii);
    pass = rep.envelope_pass;
    report["annulus"] = to_json(rep);
    text << "scaling exponent = " << format_number(rep.exponent) << "  fitted rate = "
         << (rep.fitted_rate ? format_number(*rep.fitted_rate) : std::string("degenerate"))
         << "  tail rate = " << format_number(rep.tail_rate) << '\n';
  } else {
    throw UsageError("unknown check target '" + f.target + "' (stability, prop31, pohozaev, annulus)");
  }

  report["pass"] = pass;
  if (!o.out.empty()) write_file(o.out, report.dump(2) + "\n");
  if (o.format == "json") {
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << text.str() << f.target << ": " << verdict(pass) << '\n';
  }
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical exponents, stability regions and radial solutions of\n"
               "  Δu + μ|x|⁻²u + |x|ˡ|u|^{p−1}u = 0"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  Common common;
  ShootFlags shoot;
  CheckFlags check;
  std::string mu_range, p_range;

  auto* exponents = app.add_subcommand("exponents", "critical exponents and derived constants for (N, l, mu)");
  add_tuple_flags(exponents, common, false);
  exponents->add_option("--format", common.format, "text or json")->capture_default_str();
  exponents->add_option("--out", common.out, "write to this file instead of stdout");
  add_config_flag(exponents, common);

  auto* sw = app.add_subcommand("sweep", "classify a (mu, p) grid and sample the dividing curves");
  sw->add_option("--N", common.N, "dimension N >= 3 (required)");
  sw->add_option("--l", common.l, "weight exponent l > -2 (required)");
  sw->add_option("--mu-range", mu_range, "lo:hi:count (required)");
  sw->add_option("--p-range", p_range, "lo:hi:count (required)");
  sw->add_option("--format", common.format, "csv or json")->capture_default_str();
  sw->add_option("--out", common.out, "output file; CSV also writes <stem>_curves<ext>");
  sw->add_option("--seed", common.seed, "recorded in JSON output; the sweep itself is deterministic")
      ->capture_default_str();
  add_config_flag(sw, common);

  auto* solve = app.add_subcommand("solve", "shoot the unstable manifold and reconstruct the radial solution");
  add_tuple_flags(solve, common, true);
  add_shoot_flags(solve, shoot);
  solve->add_option("--format", common.format, "csv or json for the trajectory and radial files")
      ->capture_default_str();
  solve->add_option("--out", common.out, "file prefix: <out>_trajectory, <out>_radial, <out>_summary.json");
  solve->add_option("--seed", common.seed, "seed for the 10 weak-form test bumps (ln r centres in [-1, 2], half widths in [0.2, 1.5])")->capture_default_str();
  add_config_flag(solve, common);

  auto* chk = app.add_subcommand("check", "run one verification and report pass/fail");
  chk->add_option("target", check.target, "stability, prop31, pohozaev or annulus")->required();
  add_tuple_flags(chk, common, true);
  chk->add_option("--source", check.source, "solution source: shoot or singular")->capture_default_str();
  chk->add_option("--sigma", check.sigma, "pohozaev inner radius (default: 0.5 singular, 0.1 shoot)");
  chk->add_option("--R", check.R, "pohozaev outer radius (default: 2 singular, 10 shoot)");
  chk->add_option("--tol", check.tol, "pohozaev residual tolerance (default: 1e-8 singular, 1e-5 shoot)");
  chk->add_option("--gamma", check.gamma, "exponent gamma in [1, gamma_M) for prop31 and annulus")
      ->capture_default_str();
  chk->add_option("--radii", check.radii, "prop31 cutoff radii")->capture_default_str()->delimiter(',');
  chk->add_option("--r0", check.r0, "annulus innermost radius")->capture_default_str();
  chk->add_option("--ratio", check.ratio, "annulus radius ratio")->capture_default_str();
  chk->add_option("--shells", check.shells, "annulus shell count")->capture_default_str();
  chk->add_option("--bumps", check.bumps, "stability test-family size")->capture_default_str();
  chk->add_option("--seed", common.seed, "seed for the stability test family")->capture_default_str();
  add_shoot_flags(chk, shoot);
  chk->add_option("--format", common.format, "text or json")->capture_default_str();
  chk->add_option("--out", common.out, "also write the JSON report here");
  add_config_flag(chk, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kBadParams;
  }

  try {
    if (*exponents) {
      apply_config(exponents, common.config);
      return cmd_exponents(common);
    }
    if (*sw) {
      if (common.format == "text") common.format = "csv";
      apply_config(sw, common.config);
      return cmd_sweep(common, mu_range, p_range);
    }
    if (*solve) {
      if (common.format == "text") common.format = "csv";
      apply_config(solve, common.config);
      return cmd_solve(common, shoot);
    }
    apply_config(chk, common.config);
    return cmd_check(common, check, shoot);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ShootingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDynamics;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadParams;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadParams;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadParams;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadParams;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadParams;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
}
