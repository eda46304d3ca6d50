#include "hgs/verification.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "hgs/diagnostics.hpp"
#include "hgs/exponents.hpp"
#include "hgs/geometry.hpp"
#include "hgs/radial_ode.hpp"
#include "hgs/shooting.hpp"

namespace hgs {

namespace {

struct FixtureRun {
  int N;
  double p, q;
  GroundState gs;
  double solve_seconds = 0.0;
};

std::string fixture_tag(const FixtureRun& f) {
  std::ostringstream os;
  os << "(" << f.N << "," << f.p << "," << f.q << ")";
  return os.str();
}

// Re-integrates a converged pair at `factor`-tightened tolerances, stopping at
// the same depth as the fixture trajectory.
IntegrationResult refine_fixture(const FixtureRun& f, double factor) {
  const Trajectory& traj = f.gs.trajectory;
  IntegratorControls ctl;
  ctl.rel_tol = traj.tol().rel / factor;
  ctl.abs_tol = traj.tol().abs / factor;
  ctl.t_max = 60.0;
  ctl.decay_margin =
      1.01 * std::max(std::abs(traj.back().u), std::abs(traj.back().v)) /
      std::max(f.gs.a, f.gs.b);
  return integrate(f.gs.a, f.gs.b, SpaceDim(f.N), ExponentPair(f.p, f.q), ctl);
}

std::string describe(double x) {
  std::ostringstream os;
  os << std::setprecision(4) << x;
  return os.str();
}

bool regime_row_matches(SpaceDim dim, double p, double q, double margin_expect,
                        bool nonstrict_expect, bool strict_expect, double s_lo_expect,
                        double s_hi_expect, std::string& why) {
  const ExponentRegime r = classify_exponents(dim, p, q);
  const double tol = 1e-12;
  if (std::abs(r.hyperbola_margin - margin_expect) > tol) {
    why = "margin " + describe(r.hyperbola_margin) + " != " + describe(margin_expect);
    return false;
  }
  if (r.pointwise_subcritical != nonstrict_expect || r.below_hyperbola_strict != strict_expect) {
    why = "verdict mismatch";
    return false;
  }
  if (!r.sobolev.empty()) {
    if (std::abs(r.sobolev.lo - s_lo_expect) > tol || std::abs(r.sobolev.hi - s_hi_expect) > tol) {
      why = "sobolev [" + describe(r.sobolev.lo) + "," + describe(r.sobolev.hi) + "]";
      return false;
    }
  } else if (s_lo_expect <= s_hi_expect) {
    why = "sobolev unexpectedly empty";
    return false;
  }
  return true;
}

}  // namespace

std::vector<CriterionResult> run_verification_suite(std::ostream* progress) {
  std::vector<CriterionResult> out;
  auto log = [&](const std::string& line) {
    if (progress) *progress << line << std::endl;
  };

  // Solve the fixture set once; most criteria reuse these runs.
  const std::vector<std::tuple<int, double, double>> fixture_params = {
      {3, 3.0, 3.0}, {4, 2.0, 2.0}, {5, 2.0, 2.0}, {3, 2.0, 4.0}};
  std::vector<FixtureRun> fixtures;
  std::string solve_failure;
  for (const auto& [N, p, q] : fixture_params) {
    FixtureRun f;
    f.N = N;
    f.p = p;
    f.q = q;
    log("solving fixture (" + std::to_string(N) + "," + describe(p) + "," + describe(q) + ")");
    try {
      const auto start = std::chrono::steady_clock::now();
      f.gs = find_ground_state(SpaceDim(N), ExponentPair(p, q), IntegratorControls{});
      f.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      log("  (a, b) = (" + describe(f.gs.a) + ", " + describe(f.gs.b) + ") in " +
          describe(f.solve_seconds) + " s");
      fixtures.push_back(std::move(f));
    } catch (const std::exception& e) {
      solve_failure += fixture_tag(f) + ": " + e.what() + "; ";
    }
  }

  const bool all_solved = fixtures.size() == fixture_params.size();

  // 1. Decay rate: fitted slopes of the four log-squared quantities within 5%
  //    of -2(N-1); each solve under 30 s.
  {
    bool ok = all_solved;
    std::string detail = solve_failure;
    for (const FixtureRun& f : fixtures) {
      try {
        const DecayReport rep = fit_decay(f.gs.trajectory, SpaceDim(f.N));
        const bool slopes_ok = rep.max_rel_dev <= 0.05;
        const bool time_ok = f.solve_seconds < 30.0;
        if (!slopes_ok || !time_ok) ok = false;
        detail += fixture_tag(f) + " dev=" + describe(rep.max_rel_dev) + " t=" +
                  describe(f.solve_seconds) + "s; ";
      } catch (const std::exception& e) {
        ok = false;
        detail += fixture_tag(f) + ": " + e.what() + "; ";
      }
    }
    out.push_back({1, "decay rate -2(N-1) within 5%, solve < 30 s", ok, detail});
  }

  // 2. Monotonicity: u' < 0 and v' < 0 past t0 with 10*abs_tol slack.
  {
    bool ok = all_solved;
    std::string detail = solve_failure;
    for (const FixtureRun& f : fixtures) {
      const MonotoneReport rep = check_monotone(f.gs.trajectory);
      if (!rep.passed) {
        ok = false;
        detail += fixture_tag(f) + " violation at node " +
                  std::to_string(rep.first_violation.value_or(0)) + "; ";
      }
    }
    out.push_back({2, "monotone profiles (u' < 0, v' < 0)", ok, detail});
  }

  // 3. Energy dissipation: bounded increments and residual shrinking >= 4x
  //    under 10x tolerance tightening.
  {
    bool ok = all_solved;
    std::string detail = solve_failure;
    for (const FixtureRun& f : fixtures) {
      const SpaceDim dim(f.N);
      const ExponentPair pq(f.p, f.q);
      const EnergyReport rep = check_energy_dissipation(f.gs.trajectory, dim, pq);
      const double bound = 100.0 * f.gs.trajectory.tol().rel * energy(f.gs.trajectory.front(), pq);
      if (!(rep.max_increase <= bound)) {
        ok = false;
        detail += fixture_tag(f) + " dJ+=" + describe(rep.max_increase) + " > " +
                  describe(bound) + "; ";
      }
    }
    if (!fixtures.empty()) {
      const FixtureRun& f = fixtures.front();
      const SpaceDim dim(f.N);
      const ExponentPair pq(f.p, f.q);
      const EnergyReport base = check_energy_dissipation(f.gs.trajectory, dim, pq);
      const IntegrationResult fine = refine_fixture(f, 10.0);
      const EnergyReport tight = check_energy_dissipation(fine.trajectory, dim, pq);
      const double shrink = base.dissipation_residual /
                            std::max(tight.dissipation_residual, 1e-300);
      if (!(shrink >= 4.0)) ok = false;
      detail += "residual shrink x" + describe(shrink) + "; ";
    }
    out.push_back({3, "energy dissipation (J non-increasing, residual order)", ok, detail});
  }

  // 4. Integral identities: pairwise residuals <= 1e-3 and decreasing under
  //    refinement.
  {
    bool ok = all_solved;
    std::string detail = solve_failure;
    for (const FixtureRun& f : fixtures) {
      const IdentityReport rep =
          check_identities(f.gs.trajectory, f.gs.outcome, SpaceDim(f.N), ExponentPair(f.p, f.q));
      if (!(rep.max_residual <= 1e-3)) ok = false;
      detail += fixture_tag(f) + " res=" + describe(rep.max_residual) + "; ";
    }
    if (!fixtures.empty()) {
      const FixtureRun& f = fixtures.front();
      const IdentityReport base =
          check_identities(f.gs.trajectory, f.gs.outcome, SpaceDim(f.N), ExponentPair(f.p, f.q));
      const IntegrationResult fine = refine_fixture(f, 10.0);
      const IdentityReport tight =
          check_identities(fine.trajectory, fine.outcome, SpaceDim(f.N), ExponentPair(f.p, f.q));
      if (!(tight.max_residual < base.max_residual)) {
        ok = false;
        detail += "refinement did not reduce residual; ";
      }
    }
    out.push_back({4, "integral identities agree to 1e-3 and refine", ok, detail});
  }

  // 5. Action positivity and agreement of its two computation routes.
  {
    bool ok = all_solved;
    std::string detail = solve_failure;
    for (const FixtureRun& f : fixtures) {
      const IdentityReport rep =
          check_identities(f.gs.trajectory, f.gs.outcome, SpaceDim(f.N), ExponentPair(f.p, f.q));
      if (!(rep.action > 0.0) || !(rep.action_mismatch <= 1e-3)) {
        ok = false;
        detail += fixture_tag(f) + " I=" + describe(rep.action) + " mismatch=" +
                  describe(rep.action_mismatch) + "; ";
      } else {
        detail += fixture_tag(f) + " I=" + describe(rep.action) + "; ";
      }
    }
    out.push_back({5, "action positive, two routes agree to 1e-3", ok, detail});
  }

  // 6. Diagonal oracle: the 2-D solver matches symmetric 1-D bisection.
  {
    bool ok = true;
    std::string detail;
    for (const FixtureRun& f : fixtures) {
      if (f.p != f.q) continue;
      try {
        IntegratorControls oracle_ctl;
        oracle_ctl.rel_tol = 1e-12;
        oracle_ctl.abs_tol = 1e-12;
        const double a_star =
            bisect_on_diagonal(SpaceDim(f.N), ExponentPair(f.p, f.q), oracle_ctl, 1e-2, 5e2);
        const double pair_gap = std::abs(f.gs.a - f.gs.b) / f.gs.a;
        const double oracle_gap = std::abs(f.gs.a - a_star) / a_star;
        detail += fixture_tag(f) + " a*=" + describe(a_star) + " |a-b|/a=" +
                  describe(pair_gap) + " |a-a*|/a*=" + describe(oracle_gap) + "; ";
        if (!(pair_gap <= 1e-6) || !(oracle_gap <= 1e-6)) ok = false;
      } catch (const std::exception& e) {
        ok = false;
        detail += fixture_tag(f) + ": " + e.what() + "; ";
      }
    }
    if (fixtures.empty()) ok = false;
    out.push_back({6, "diagonal oracle matches 2-D solver to 1e-6", ok, detail});
  }

  // 7. Exponent arithmetic: hand-checked truth table and the interval/margin
  //    equivalence over random triples.
  {
    bool ok = true;
    std::string detail;
    std::string why;
    struct Row {
      int N;
      double p, q, margin;
      bool nonstrict, strict;
      double s_lo, s_hi;
    };
    const Row rows[] = {
        {3, 2.0, 2.0, 1.0 / 3.0, true, true, 0.5, 1.5},
        {3, 5.0, 5.0, 0.0, true, false, 1.0, 1.0},
        {3, 3.0, 3.0, 1.0 / 6.0, true, true, 0.75, 1.25},
        {4, 2.0, 2.0, 1.0 / 6.0, true, true, 2.0 / 3.0, 4.0 / 3.0},
        {5, 2.0, 2.0, 1.0 / 15.0, true, true, 2.5 - 5.0 / 3.0, 2.0 - 2.5 + 5.0 / 3.0},
        {3, 2.0, 4.0, 0.2, true, true, 1.5 - 0.6, 2.0 - 1.5 + 1.0},
        {5, 10.0, 1.2, 1.0 / 11.0 + 1.0 / 2.2 - 0.6, false, false, 1.0, 0.0},
        {4, 3.0, 3.0, 0.0, true, false, 1.0, 1.0},
    };
    for (const Row& r : rows) {
      if (!regime_row_matches(SpaceDim(r.N), r.p, r.q, r.margin, r.nonstrict, r.strict, r.s_lo,
                              r.s_hi, why)) {
        ok = false;
        detail += "(" + std::to_string(r.N) + "," + describe(r.p) + "," + describe(r.q) +
                  "): " + why + "; ";
      }
    }
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<int> pick_n(3, 10);
    std::uniform_real_distribution<double> pick_exp(1.0 + 1e-9, 20.0);
    int mismatches = 0;
    for (int i = 0; i < 10'000; ++i) {
      const SpaceDim dim(pick_n(rng));
      const double p = pick_exp(rng), q = pick_exp(rng);
      const ExponentRegime r = classify_exponents(dim, p, q);
      const bool nonempty = !r.sobolev.empty();
      const bool margin_nonneg = r.hyperbola_margin >= 0.0;
      const bool positive_len = r.sobolev.length() > 0.0;
      const bool margin_pos = r.hyperbola_margin > 0.0;
      if (nonempty != margin_nonneg || positive_len != margin_pos) ++mismatches;
    }
    if (mismatches > 0) {
      ok = false;
      detail += std::to_string(mismatches) + " interval/margin mismatches; ";
    }
    out.push_back({7, "exponent truth table and interval equivalence", ok, detail});
  }

  // 8. Tail sandwich for eps in {0.1, 0.25, 0.5} * (N-1)^2/4 on every fixture.
  {
    bool ok = all_solved;
    std::string detail = solve_failure;
    for (const FixtureRun& f : fixtures) {
      const SpaceDim dim(f.N);
      const double cap = 0.25 * dim.damping() * dim.damping();
      for (double frac : {0.1, 0.25, 0.5}) {
        const TailBoundReport rep =
            characteristic_tail_bound(f.gs.trajectory, dim, ExponentPair(f.p, f.q), frac * cap);
        if (!rep.applicable || !rep.passed) {
          ok = false;
          detail += fixture_tag(f) + " eps=" + describe(frac * cap) +
                    (rep.applicable ? " failed" : " n/a") + "; ";
        }
      }
    }
    out.push_back({8, "characteristic tail sandwich", ok, detail});
  }

  // 9. Infrastructure: coordinate round trips, closed-form quadrature, and
  //    planted-exponential slope recovery.
  {
    bool ok = true;
    std::string detail;
    // 1e-12-relative round trips hold on the range where the ball radius
    // still carries the information; beyond it the half-ulp of rho amplifies
    // as ~eps e^t / 4 through the inverse map.
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 0; i <= 400; ++i) {
      const double t = 30.0 * i / 400.0;
      const double back = geodesic_from_ball_radius(ball_radius_from_geodesic(t));
      const double bound = t <= 12.0 ? 1e-12 * std::max(t, 1.0)
                                     : std::max(1e-12 * t, 0.5 * eps * std::exp(t));
      if (std::abs(back - t) > bound) {
        ok = false;
        detail += "round trip failed at t=" + describe(t) + "; ";
        break;
      }
    }
    {
      const SpaceDim dim(3);
      const Eigen::Index n = 16001;
      Eigen::ArrayXd nodes = Eigen::ArrayXd::LinSpaced(n, 0.0, 40.0);
      Eigen::ArrayXd values = (-4.0 * nodes).exp();
      const double got = radial_integral(RadialGrid(nodes, values), dim);
      const double expect = std::acos(-1.0) / 6.0;
      if (std::abs(got - expect) > 1e-8) {
        ok = false;
        detail += "quadrature " + describe(got) + " != pi/6; ";
      }
    }
    {
      const SpaceDim dim(3);
      const double rate = dim.damping();
      std::vector<RadialState> states;
      for (int i = 0; i <= 2000; ++i) {
        const double t = 20.0 * i / 2000.0;
        const double e = std::exp(-rate * t);
        states.push_back({t, e, -rate * e, e, -rate * e});
      }
      const Trajectory planted(states, Tolerances{1e-10, 1e-10}, StepStats{});
      const DecayReport rep = fit_decay(planted, dim);
      if (!(rep.max_rel_dev <= 1e-10)) {
        ok = false;
        detail += "planted slope dev=" + describe(rep.max_rel_dev) + "; ";
      }
    }
    out.push_back({9, "infrastructure (round trips, quadrature, slope fit)", ok, detail});
  }

  return out;
}

void print_results_table(std::ostream& os, const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results) {
    os << (r.passed ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name;
    if (!r.detail.empty()) os << "  -- " << r.detail;
    os << '\n';
  }
}

}  // namespace hgs
