// hgs: ground states of the Lane-Emden type system on hyperbolic space.
// Subcommands: classify, solve, sweep, verify.

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "hgs/diagnostics.hpp"
#include "hgs/exponents.hpp"
#include "hgs/io.hpp"
#include "hgs/radial_ode.hpp"
#include "hgs/shooting.hpp"
#include "hgs/verification.hpp"
#include "hgs/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDiagnostics = 2;
constexpr int kExitNoConvergence = 3;

struct Options {
  int N = 3;
  double p = 3.0, q = 3.0;
  double rel_tol = 1e-10, abs_tol = 1e-10;
  double t0 = 1e-3, t_max = 60.0;
  double blowup_threshold = 1e6, decay_margin = 1e-8;
  double seed_lo = 1e-2, seed_hi = 1e2;
  int jobs = 1;
  std::string out_dir = ".";
  bool override_regime = false;
  // sweep-specific
  std::string mode = "pq";
  double p_lo = 1.5, p_hi = 6.0, q_lo = 1.5, q_hi = 6.0;
  int np = 8, nq = 8, na = 8, nb = 8;

  hgs::IntegratorControls controls() const {
    hgs::IntegratorControls ctl;
    ctl.rel_tol = rel_tol;
    ctl.abs_tol = abs_tol;
    ctl.t0 = t0;
    ctl.t_max = t_max;
    ctl.blowup_threshold = blowup_threshold;
    ctl.decay_margin = decay_margin;
    return ctl;
  }
};

// Flat key = value config file; command-line flags win over file entries.
void apply_config_file(CLI::App& cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw CLI::ValidationError("--config", "line " + std::to_string(lineno) +
                                                   " is not `key = value`");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (!opt) throw CLI::ValidationError("--config", "unknown key `" + key + "`");
    if (opt->count() == 0) {  // command line wins
      opt->add_result(value);
      opt->run_callback();
    }
  }
}

void add_common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--N", o.N, "space dimension (>= 3)");
  cmd->add_option("--p", o.p, "exponent p (> 1)");
  cmd->add_option("--q", o.q, "exponent q (> 1)");
  cmd->add_option("--rel-tol", o.rel_tol, "integrator relative tolerance");
  cmd->add_option("--abs-tol", o.abs_tol, "integrator absolute tolerance");
  cmd->add_option("--t0", o.t0, "series-start matching point, in (0, 0.1]");
  cmd->add_option("--T-max", o.t_max, "maximum geodesic distance");
  cmd->add_option("--blowup-threshold", o.blowup_threshold, "magnitude bound");
  cmd->add_option("--decay-margin", o.decay_margin, "smallness level declaring decay");
  cmd->add_option("--seed-lo", o.seed_lo, "seed region lower bound");
  cmd->add_option("--seed-hi", o.seed_hi, "seed region upper bound");
  cmd->add_option("--jobs", o.jobs, "worker threads for sweeps");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_flag("--override-regime", o.override_regime,
                "attempt the solve even when the existence condition fails");
}

json regime_json(const hgs::ExponentRegime& r) {
  return json{{"critical_exponent", r.critical_exponent},
              {"slack_p", r.slack_p},
              {"slack_q", r.slack_q},
              {"hyperbola_margin", r.hyperbola_margin},
              {"sobolev_s_lo", r.sobolev.lo},
              {"sobolev_s_hi", r.sobolev.hi},
              {"sobolev_empty", r.sobolev.empty()},
              {"pointwise_subcritical", r.pointwise_subcritical},
              {"below_hyperbola_strict", r.below_hyperbola_strict},
              {"ground_state_nonstrict", r.ground_state_nonstrict},
              {"ground_state_strict", r.ground_state_strict}};
}

json config_json(const Options& o, const std::string& command) {
  return json{{"command", command},
              {"N", o.N},
              {"p", o.p},
              {"q", o.q},
              {"rel-tol", o.rel_tol},
              {"abs-tol", o.abs_tol},
              {"t0", o.t0},
              {"T-max", o.t_max},
              {"blowup-threshold", o.blowup_threshold},
              {"decay-margin", o.decay_margin},
              {"seed-lo", o.seed_lo},
              {"seed-hi", o.seed_hi},
              {"jobs", o.jobs},
              {"out-dir", o.out_dir},
              {"override-regime", o.override_regime}};
}

int run_classify(const Options& o) {
  const hgs::ExponentRegime r = hgs::classify_exponents(hgs::SpaceDim(o.N), o.p, o.q);
  json out = regime_json(r);
  out["N"] = o.N;
  out["p"] = o.p;
  out["q"] = o.q;
  std::cout << out.dump(2) << std::endl;
  return kExitOk;
}

int run_solve(const Options& o) {
  const hgs::SpaceDim dim(o.N);
  const hgs::ExponentPair pq(o.p, o.q);
  const hgs::ExponentRegime regime = hgs::classify_exponents(dim, o.p, o.q);
  if (!regime.below_hyperbola_strict && !o.override_regime) {
    std::cerr << "solve: (N, p, q) fails the strict condition 1/(p+1) + 1/(q+1) > (N-2)/N "
                 "(hyperbola margin "
              << regime.hyperbola_margin << "); pass --override-regime to attempt anyway\n";
    return kExitUsage;
  }

  hgs::SeedRegion seed;
  seed.lo = o.seed_lo;
  seed.hi = o.seed_hi;

  const auto started = std::chrono::steady_clock::now();
  hgs::GroundState gs;
  try {
    gs = hgs::find_ground_state(dim, pq, o.controls(), seed, !o.override_regime);
  } catch (const std::exception& e) {
    std::cerr << "solve: no converged ground state: " << e.what() << "\n";
    return kExitNoConvergence;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::filesystem::create_directories(o.out_dir);
  {
    std::ofstream csv(std::filesystem::path(o.out_dir) / "ground_state.csv");
    hgs::write_trajectory_csv(csv, gs.trajectory);
  }

  const hgs::MonotoneReport mono = hgs::check_monotone(gs.trajectory);
  const hgs::EnergyReport energy = hgs::check_energy_dissipation(gs.trajectory, dim, pq);
  const hgs::DecayReport decay = hgs::fit_decay(gs.trajectory, dim);
  const hgs::IdentityReport ident = hgs::check_identities(gs.trajectory, gs.outcome, dim, pq);
  const double j0 = hgs::energy(gs.trajectory.front(), pq);
  const double energy_bound = 100.0 * gs.trajectory.tol().rel * j0;

  const double cap = 0.25 * dim.damping() * dim.damping();
  json tails = json::array();
  bool tails_pass = true;
  for (double frac : {0.1, 0.25, 0.5}) {
    const hgs::TailBoundReport tb =
        hgs::characteristic_tail_bound(gs.trajectory, dim, pq, frac * cap);
    tails_pass = tails_pass && tb.applicable && tb.passed;
    tails.push_back(json{{"eps", frac * cap},
                         {"applicable", tb.applicable},
                         {"passed", tb.passed},
                         {"t_eps", tb.t_eps},
                         {"lower_rate", tb.lower_rate},
                         {"upper_rate", tb.upper_rate},
                         {"worst_lower_margin", tb.worst_lower_margin},
                         {"worst_upper_margin", tb.worst_upper_margin}});
  }

  const bool diagnostics_pass = mono.passed && energy.max_increase <= energy_bound &&
                                decay.max_rel_dev <= 0.05 && ident.max_residual <= 1e-3 &&
                                ident.action > 0.0 && ident.action_mismatch <= 1e-3 &&
                                tails_pass;

  json report;
  report["schema_version"] = 1;
  report["tool_version"] = hgs::kVersion;
  report["config"] = config_json(o, "solve");
  report["result"] = json{{"a", gs.a},
                          {"b", gs.b},
                          {"residual", gs.residual},
                          {"polished", gs.polished},
                          {"outcome", hgs::to_string(gs.outcome.kind)},
                          {"outcome_t", gs.outcome.time},
                          {"nodes", gs.trajectory.size()},
                          {"solve_seconds", seconds}};
  report["regime"] = regime_json(regime);
  report["decay"] = json{{"slope_u2", decay.slope_u2},
                         {"slope_v2", decay.slope_v2},
                         {"slope_du2", decay.slope_du2},
                         {"slope_dv2", decay.slope_dv2},
                         {"target", decay.target},
                         {"t_lo", decay.t_lo},
                         {"t_hi", decay.t_hi},
                         {"max_rel_dev", decay.max_rel_dev}};
  report["energy"] = json{{"max_increase", energy.max_increase},
                          {"bound", energy_bound},
                          {"dissipation_residual", energy.dissipation_residual}};
  report["identities"] = json{{"gradient_pairing", ident.gradient_pairing},
                              {"u_power_mass", ident.u_power_mass},
                              {"v_power_mass", ident.v_power_mass},
                              {"max_residual", ident.max_residual},
                              {"action", ident.action},
                              {"action_direct", ident.action_direct},
                              {"action_mismatch", ident.action_mismatch}};
  report["tail_bounds"] = tails;
  report["diagnostics_pass"] = diagnostics_pass;

  {
    std::ofstream out(std::filesystem::path(o.out_dir) / "report.json");
    out << report.dump(2) << "\n";
  }

  std::cout << "a = " << hgs::format_g17(gs.a) << "\nb = " << hgs::format_g17(gs.b)
            << "\nresidual = " << gs.residual << "\ndiagnostics "
            << (diagnostics_pass ? "pass" : "FAIL") << " (" << seconds << " s)\n";
  return diagnostics_pass ? kExitOk : kExitDiagnostics;
}

int run_sweep(const Options& o) {
  std::filesystem::create_directories(o.out_dir);
  if (o.mode == "pq") {
    if (o.np < 2 || o.nq < 2) {
      std::cerr << "sweep: grid sizes --np/--nq must be >= 2\n";
      return kExitUsage;
    }
    std::ofstream csv(std::filesystem::path(o.out_dir) / "regime.csv");
    csv << "p,q,hyperbola_margin,subcritical_p,subcritical_q,s_lo,s_hi\n";
    for (int i = 0; i < o.np; ++i) {
      const double p = o.p_lo + (o.p_hi - o.p_lo) * i / (o.np - 1);
      for (int j = 0; j < o.nq; ++j) {
        const double q = o.q_lo + (o.q_hi - o.q_lo) * j / (o.nq - 1);
        const hgs::ExponentRegime r = hgs::classify_exponents(hgs::SpaceDim(o.N), p, q);
        csv << hgs::format_g17(p) << ',' << hgs::format_g17(q) << ','
            << hgs::format_g17(r.hyperbola_margin) << ',' << (r.slack_p >= 0.0 ? 1 : 0)
            << ',' << (r.slack_q >= 0.0 ? 1 : 0) << ',' << hgs::format_g17(r.sobolev.lo)
            << ',' << hgs::format_g17(r.sobolev.hi) << '\n';
      }
    }
    return kExitOk;
  }
  if (o.mode == "ab") {
    if (o.na < 2 || o.nb < 2) {
      std::cerr << "sweep: grid sizes --na/--nb must be >= 2\n";
      return kExitUsage;
    }
    const hgs::SpaceDim dim(o.N);
    const hgs::ExponentPair pq(o.p, o.q);
    const hgs::IntegratorControls ctl = o.controls();
    const int total = o.na * o.nb;
    std::vector<hgs::ShootingOutcome> outcomes(total);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
        const int i = idx / o.nb, j = idx % o.nb;
        const double a = o.seed_lo * std::pow(o.seed_hi / o.seed_lo,
                                              static_cast<double>(i) / (o.na - 1));
        const double b = o.seed_lo * std::pow(o.seed_hi / o.seed_lo,
                                              static_cast<double>(j) / (o.nb - 1));
        outcomes[idx] = hgs::classify_outcome(a, b, dim, pq, ctl);
      }
    };
    std::vector<std::thread> pool;
    const int jobs = std::max(1, o.jobs);
    for (int w = 1; w < jobs; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ofstream csv(std::filesystem::path(o.out_dir) / "outcomes.csv");
    csv << "a,b,outcome,event_t\n";
    for (int idx = 0; idx < total; ++idx) {
      const int i = idx / o.nb, j = idx % o.nb;
      const double a =
          o.seed_lo * std::pow(o.seed_hi / o.seed_lo, static_cast<double>(i) / (o.na - 1));
      const double b =
          o.seed_lo * std::pow(o.seed_hi / o.seed_lo, static_cast<double>(j) / (o.nb - 1));
      csv << hgs::format_g17(a) << ',' << hgs::format_g17(b) << ','
          << hgs::to_string(outcomes[idx].kind) << ',' << hgs::format_g17(outcomes[idx].time)
          << '\n';
    }
    return kExitOk;
  }
  std::cerr << "sweep: --mode must be pq or ab\n";
  return kExitUsage;
}

int run_verify() {
  const auto results = hgs::run_verification_suite(&std::cout);
  hgs::print_results_table(std::cout, results);
  for (const auto& r : results)
    if (!r.passed) return kExitDiagnostics;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ground states of -Lap u = |v|^{p-1}v, -Lap v = |u|^{q-1}u on hyperbolic "
               "space, by radial shooting"};
  app.set_version_flag("--version", hgs::kVersion);
  app.require_subcommand(1);

  Options o;
  std::string config_path;

  CLI::App* classify = app.add_subcommand("classify", "classify an exponent triple");
  CLI::App* solve = app.add_subcommand("solve", "compute a ground state and its report");
  CLI::App* sweep = app.add_subcommand("sweep", "grid sweeps over (p,q) or (a,b)");
  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  for (CLI::App* cmd : {classify, solve, sweep}) {
    add_common_flags(cmd, o);
    cmd->add_option("--config", config_path, "flat key = value config file");
  }
  sweep->add_option("--mode", o.mode, "pq or ab");
  sweep->add_option("--p-lo", o.p_lo, "p grid lower bound");
  sweep->add_option("--p-hi", o.p_hi, "p grid upper bound");
  sweep->add_option("--q-lo", o.q_lo, "q grid lower bound");
  sweep->add_option("--q-hi", o.q_hi, "q grid upper bound");
  sweep->add_option("--np", o.np, "p grid size");
  sweep->add_option("--nq", o.nq, "q grid size");
  sweep->add_option("--na", o.na, "a grid size");
  sweep->add_option("--nb", o.nb, "b grid size");

  try {
    app.parse(argc, argv);
    CLI::App* active = classify->parsed() ? classify : solve->parsed() ? solve : sweep;
    if (!config_path.empty()) apply_config_file(*active, config_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (classify->parsed()) return run_classify(o);
    if (solve->parsed()) return run_solve(o);
    if (sweep->parsed()) return run_sweep(o);
    if (verify->parsed()) return run_verify();
  } catch (const hgs::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hgs::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  }
  return kExitUsage;
}
