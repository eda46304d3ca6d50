#include "hgs/shooting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "hgs/exponents.hpp"

namespace hgs {

namespace {

constexpr double kFarFieldLevel = 1e-4;  // residual matching level, per contract
constexpr double kPolishLevel = 1e-6;    // deeper matching levels for refinement
constexpr double kDeepLevel = 1e-8;

// Which way the pair is unbalanced. `b_low` means v carries too little mass
// (v dies first), `b_high` the opposite. The drift charge
// u^{q+1}/(q+1) - v^{p+1}/(p+1) is conserved along the slow non-crossing
// tails and its sign predicts which component eventually crosses, so
// undetermined runs are classified by their tail imbalance.
enum class Side { b_low, b_high };

Side side_of(const IntegrationResult& res, const ExponentPair& pq) {
  switch (res.outcome.kind) {
    case OutcomeKind::v_crossed:
      return Side::b_low;
    case OutcomeKind::u_crossed:
      return Side::b_high;
    case OutcomeKind::blowup: {
      const RadialState& last = res.trajectory.back();
      return std::max(std::abs(last.u), std::abs(last.du)) >=
                     std::max(std::abs(last.v), std::abs(last.dv))
                 ? Side::b_high
                 : Side::b_low;
    }
    case OutcomeKind::undetermined:
    case OutcomeKind::decay: {
      const RadialState& last = res.trajectory.back();
      const double charge = std::pow(std::abs(last.u), pq.q() + 1.0) / (pq.q() + 1.0) -
                            std::pow(std::abs(last.v), pq.p() + 1.0) / (pq.p() + 1.0);
      return charge > 0.0 ? Side::b_low : Side::b_high;
    }
  }
  return Side::b_low;
}

bool is_crossing_like(const ShootingOutcome& out) {
  return out.crossed() || out.kind == OutcomeKind::blowup;
}

double dip_depth(const Trajectory& traj, double scale) {
  double dip = std::numeric_limits<double>::infinity();
  for (const RadialState& s : traj.states())
    dip = std::min(dip, std::max(std::abs(s.u), std::abs(s.v)));
  return dip / scale;
}

IntegratorControls probe_controls(const IntegratorControls& ctl) {
  IntegratorControls probe = ctl;
  probe.decay_margin = 0.0;  // keep the crossing/non-crossing flip visible at depth
  return probe;
}

IntegratorControls tight_controls(const IntegratorControls& ctl, double scale) {
  IntegratorControls tight = ctl;
  tight.rel_tol = std::min(ctl.rel_tol, 1e-12);
  tight.abs_tol = std::min(ctl.abs_tol, 1e-30 * scale);
  tight.decay_margin = 0.0;
  return tight;
}

struct LineResult {
  double b_hat = 0.0;
  double b_lo = 0.0, b_hi = 0.0;  // final inner bracket
  OutcomeKind lo_kind = OutcomeKind::undetermined;
  OutcomeKind hi_kind = OutcomeKind::undetermined;
  // Some run on this line stayed positive through T_max: the boundary orbit
  // here is a slow drift, which happens exactly on the sub-ground-state side
  // (past the ground state the boundary orbit crosses at finite time).
  bool drift_seen = false;
};

// Bisects b at fixed a on the first-event boundary, down to machine width.
// The bracket must have side b_low at b_lo and b_high at b_hi.
LineResult bisect_b(double a, double b_lo, double b_hi, SpaceDim dim,
                    const ExponentPair& pq, const IntegratorControls& probe) {
  LineResult line;
  line.b_hat = 0.5 * (b_lo + b_hi);
  for (int it = 0; it < 120; ++it) {
    const double b_mid = 0.5 * (b_lo + b_hi);
    if (b_mid <= b_lo || b_mid >= b_hi) break;
    const IntegrationResult mid_res = integrate(a, b_mid, dim, pq, probe);
    if (mid_res.outcome.kind == OutcomeKind::undetermined) line.drift_seen = true;
    // Near the ground state both sides of a machine-width bracket drift, so
    // keep the last crossing actually witnessed as the corner record.
    if (side_of(mid_res, pq) == Side::b_low) {
      b_lo = b_mid;
      if (is_crossing_like(mid_res.outcome) || line.lo_kind == OutcomeKind::undetermined)
        line.lo_kind = mid_res.outcome.kind;
    } else {
      b_hi = b_mid;
      if (is_crossing_like(mid_res.outcome) || line.hi_kind == OutcomeKind::undetermined)
        line.hi_kind = mid_res.outcome.kind;
    }
    line.b_hat = b_mid;
    if (b_hi - b_lo <= 4.0 * std::numeric_limits<double>::epsilon() * b_mid) break;
  }
  line.b_lo = b_lo;
  line.b_hi = b_hi;
  return line;
}

// Establishes a (b_low, b_high) side bracket around a previous estimate,
// expanding geometrically within the seed bounds.
std::optional<std::pair<double, double>> bracket_b(double a, double b_guess,
                                                   const SeedRegion& seed, SpaceDim dim,
                                                   const ExponentPair& pq,
                                                   const IntegratorControls& probe) {
  double lo = std::max(seed.lo, 0.5 * b_guess);
  double hi = std::min(seed.hi, 2.0 * b_guess);
  Side lo_side = side_of(integrate(a, lo, dim, pq, probe), pq);
  Side hi_side = side_of(integrate(a, hi, dim, pq, probe), pq);
  for (int it = 0; it < 40 && lo_side != Side::b_low && lo > seed.lo; ++it) {
    hi = lo;
    hi_side = lo_side;
    lo = std::max(seed.lo, 0.25 * lo);
    lo_side = side_of(integrate(a, lo, dim, pq, probe), pq);
  }
  for (int it = 0; it < 40 && hi_side != Side::b_high && hi < seed.hi; ++it) {
    lo = hi;
    lo_side = hi_side;
    hi = std::min(seed.hi, 4.0 * hi);
    hi_side = side_of(integrate(a, hi, dim, pq, probe), pq);
  }
  if (lo_side == Side::b_low && hi_side == Side::b_high) return std::make_pair(lo, hi);
  return std::nullopt;
}

// Far-field residual R = (u' + (N-1)u, v' + (N-1)v) evaluated at the final
// node of a run capped at t = T. Empty when the run crossed before T.
std::optional<Eigen::Vector2d> far_field_residual(double a, double b, double T,
                                                  SpaceDim dim, const ExponentPair& pq,
                                                  const IntegratorControls& tight,
                                                  RadialState* state_out = nullptr) {
  IntegratorControls run = tight;
  run.t_max = T;
  const IntegrationResult res = integrate(a, b, dim, pq, run);
  if (res.outcome.kind != OutcomeKind::undetermined) return std::nullopt;
  const RadialState& s = res.trajectory.back();
  if (state_out) *state_out = s;
  const double m = dim.damping();
  return Eigen::Vector2d(s.du + m * s.u, s.dv + m * s.v);
}

}  // namespace

ShootingOutcome classify_outcome(double a, double b, SpaceDim dim, const ExponentPair& pq,
                                 const IntegratorControls& ctl) {
  return integrate(a, b, dim, pq, ctl).outcome;
}

double bisect_on_diagonal(SpaceDim dim, const ExponentPair& pq,
                          const IntegratorControls& ctl, double a_lo, double a_hi) {
  if (!pq.symmetric()) throw input_error("bisect_on_diagonal: requires p == q");
  ctl.validate();
  if (!(a_lo > 0.0) || !(a_hi > a_lo))
    throw input_error("bisect_on_diagonal: need 0 < a_lo < a_hi");

  const IntegratorControls probe = probe_controls(ctl);
  auto crossing = [&](double a) {
    return is_crossing_like(classify_outcome(a, a, dim, pq, probe));
  };

  const bool lo_crossing = crossing(a_lo);
  const bool hi_crossing = crossing(a_hi);
  if (lo_crossing == hi_crossing)
    throw bracket_error("bisect_on_diagonal: outcomes at a_lo and a_hi do not differ");

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a_lo + a_hi);
    if (a_hi - a_lo <= 1e-12 * mid) break;
    if (mid <= a_lo || mid >= a_hi) break;
    if (crossing(mid) == hi_crossing)
      a_hi = mid;
    else
      a_lo = mid;
  }
  const double a_star = 0.5 * (a_lo + a_hi);

  // The decay-side trajectory must satisfy the ground-state invariants.
  const IntegrationResult res = integrate(a_star, a_star, dim, pq, ctl);
  if (!res.outcome.is_decay())
    throw structure_error("bisect_on_diagonal: bracket collapsed without a decay trajectory");
  const double slack = 10.0 * ctl.abs_tol;
  for (const RadialState& s : res.trajectory.states()) {
    if (!(s.u > 0.0) || !(s.v > 0.0))
      throw structure_error("bisect_on_diagonal: decay trajectory not positive");
    if (s.t > ctl.t0 && (s.du >= slack || s.dv >= slack))
      throw structure_error("bisect_on_diagonal: decay trajectory not monotone");
  }
  return a_star;
}

GroundState find_ground_state(SpaceDim dim, const ExponentPair& pq,
                              const IntegratorControls& ctl, const SeedRegion& seed,
                              bool enforce_regime) {
  ctl.validate();
  if (!(seed.lo > 0.0) || !(seed.hi > seed.lo) || seed.grid < 2)
    throw input_error("find_ground_state: invalid seed region");
  const ExponentRegime regime = classify_exponents(dim, pq.p(), pq.q());
  if (enforce_regime && !regime.below_hyperbola_strict)
    throw domain_error(
        "find_ground_state: (N, p, q) violates the strict hyperbola condition "
        "1/(p+1) + 1/(q+1) > (N-2)/N");

  const IntegratorControls probe = probe_controls(ctl);
  const double m = dim.damping();

  // Phase 1a: log-grid scan for classification flips along b.
  const int n = seed.grid;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = seed.lo * std::pow(seed.hi / seed.lo, static_cast<double>(i) / (n - 1));

  std::vector<FlipCell> flips;
  std::vector<int> flips_per_column(n, 0);
  int best_col = -1;
  double best_col_dip = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, int>> col_bracket(n, {-1, -1});

  for (int i = 0; i < n; ++i) {
    Side prev = Side::b_low;
    OutcomeKind prev_kind = OutcomeKind::undetermined;
    double col_dip = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const IntegrationResult res = integrate(grid[i], grid[j], dim, pq, probe);
      const Side side = side_of(res, pq);
      col_dip = std::min(col_dip, dip_depth(res.trajectory, std::max(grid[i], grid[j])));
      if (j > 0 && side != prev) {
        flips.push_back({grid[i], grid[j - 1], grid[j], prev_kind, res.outcome.kind});
        ++flips_per_column[i];
        if (prev == Side::b_low && side == Side::b_high && col_bracket[i].first < 0)
          col_bracket[i] = {j - 1, j};
      }
      prev = side;
      prev_kind = res.outcome.kind;
    }
    if (col_bracket[i].first >= 0 && col_dip < best_col_dip) {
      best_col_dip = col_dip;
      best_col = i;
    }
  }

  if (best_col < 0)
    throw bracket_error("find_ground_state: no classification flip in the seed region");

  // Phase 1b/1c: nested bisection. The inner loop bisects b on the
  // first-event boundary at fixed a; the outer loop bisects a on the nature
  // of the boundary orbit (slow positive drift below the ground state,
  // finite-time double crossing above it), which balances the two residual
  // components to the inner-bisection depth.
  SeedRegion bounds = seed;  // b-range for bracketing; widened if a expands
  double b_guess = 0.5 * (grid[col_bracket[best_col].first] + grid[col_bracket[best_col].second]);

  auto line_at = [&](double a_trial) -> std::optional<LineResult> {
    const auto br = bracket_b(a_trial, b_guess, bounds, dim, pq, probe);
    if (!br) return std::nullopt;
    LineResult line = bisect_b(a_trial, br->first, br->second, dim, pq, probe);
    b_guess = line.b_hat;
    return line;
  };

  std::optional<double> a_drift, a_cross;  // outer bracket endpoints
  for (int i = 0; i < n && (!a_drift || !a_cross); ++i) {
    if (col_bracket[i].first < 0) continue;
    if (flips_per_column[i] > 1)
      throw structure_error("find_ground_state: multiple flips along one scan line");
    b_guess = 0.5 * (grid[col_bracket[i].first] + grid[col_bracket[i].second]);
    const auto line = line_at(grid[i]);
    if (!line) continue;
    if (line->drift_seen) {
      a_drift = grid[i];  // keep the largest drift-side a seen so far
    } else if (!a_drift) {
      a_cross = grid[i];  // transition sits below the scanned columns
      break;
    } else if (!a_cross) {
      a_cross = grid[i];
    }
  }

  // The transition can fall outside the scanned region (the seed region is a
  // default, not a guarantee); walk the boundary outward in grid steps.
  const double ratio = grid[1] / grid[0];
  for (int k = 0; k < 16 && a_drift && !a_cross; ++k) {
    const double a_next = *a_drift * ratio;
    bounds.hi = std::max(bounds.hi, a_next * ratio);
    const auto line = line_at(a_next);
    if (!line) break;
    if (line->drift_seen)
      a_drift = a_next;
    else
      a_cross = a_next;
  }
  for (int k = 0; k < 16 && !a_drift; ++k) {
    double a_next = a_cross ? *a_cross / ratio : grid[0] / ratio;
    bounds.lo = std::min(bounds.lo, a_next / ratio);
    const auto line = line_at(a_next);
    if (!line) break;
    if (line->drift_seen)
      a_drift = a_next;
    else
      a_cross = a_next;
  }
  if (!a_drift || !a_cross)
    throw bracket_error(
        "find_ground_state: no drift-to-crossing transition along the "
        "first-event boundary");

  double a = *a_drift, b = b_guess;
  ShootingBracket bracket;
  bracket.a_lo = *a_drift;
  bracket.a_hi = *a_cross;
  {
    double lo = *a_drift, hi = *a_cross;
    for (int it = 0; it < 80 && (hi - lo) > 1e-10 * lo; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto line = line_at(mid);
      if (!line) break;
      if (line->drift_seen) {
        lo = mid;
        a = mid;
        b = line->b_hat;
        bracket.b_lo = line->b_lo;
        bracket.b_hi = line->b_hi;
        bracket.b_lo_kind = line->lo_kind;
        bracket.b_hi_kind = line->hi_kind;
      } else {
        hi = mid;
      }
    }
    bracket.a_lo = lo;
    bracket.a_hi = hi;
  }

  // Phase 2: damped Newton on the far-field residual R at a frozen matching
  // point T, deepening T stage by stage. A Newton stage at level L converges
  // to the root of the truncated condition, which sits O(u(T) e^{-2T}) off
  // the ground state; the dip guard keeps a stage only when it actually
  // moves the pair closer, so a shallow-stage bias can never undo a better
  // iterate. The forward-difference step at the contract level is 1e-6 (a,b).
  const IntegratorControls tight = tight_controls(ctl, std::max(a, b));
  bool polished = false;

  auto full_run = [&](double a_at, double b_at) {
    IntegratorControls full = tight;
    full.t_max = ctl.t_max;
    return integrate(a_at, b_at, dim, pq, full);
  };
  auto matching_point = [&](const Trajectory& traj, double level,
                            double scale) -> std::optional<double> {
    for (const RadialState& s : traj.states())
      if (std::max(std::abs(s.u), std::abs(s.v)) <= level * scale) return s.t;
    return std::nullopt;
  };

  const struct {
    double level;
    double fd_step;
  } stages[] = {{kFarFieldLevel, 1e-6}, {kPolishLevel, 1e-8}, {kDeepLevel, 1e-9}};

  const double scale = std::max(a, b);
  double best_dip = dip_depth(full_run(a, b).trajectory, scale);

  for (const auto& stage : stages) {
    const auto T = matching_point(full_run(a, b).trajectory, stage.level, scale);
    if (!T) continue;
    double a_try = a, b_try = b;
    double prev_norm = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int it = 0; it < 40; ++it) {
      RadialState sT;
      const auto F0 = far_field_residual(a_try, b_try, *T, dim, pq, tight, &sT);
      if (!F0) break;
      const double floor = 1e-30 * scale;
      const double target = 1e-8 * (std::abs(sT.u) + std::abs(sT.v) + floor);
      if (F0->norm() <= target) {
        if (stage.level == kFarFieldLevel) polished = true;
        break;
      }
      // The forward-difference Jacobian yields linear convergence when the
      // symmetric mode is nearly singular; stop once progress plateaus.
      stalled = F0->norm() > 0.9 * prev_norm ? stalled + 1 : 0;
      if (stalled >= 3) break;
      prev_norm = F0->norm();
      const double ha = stage.fd_step * a_try, hb = stage.fd_step * b_try;
      const auto Fa = far_field_residual(a_try + ha, b_try, *T, dim, pq, tight);
      const auto Fb = far_field_residual(a_try, b_try + hb, *T, dim, pq, tight);
      if (!Fa || !Fb) break;
      Eigen::Matrix2d J;
      J.col(0) = (*Fa - *F0) / ha;
      J.col(1) = (*Fb - *F0) / hb;
      const Eigen::Vector2d step = J.fullPivLu().solve(-*F0);
      if (!step.allFinite()) break;
      double lambda = 1.0;
      bool moved = false;
      for (int damp = 0; damp < 7; ++damp, lambda *= 0.5) {
        const double a_next = a_try + lambda * step[0];
        const double b_next = b_try + lambda * step[1];
        if (!(a_next > 0.0) || !(b_next > 0.0)) continue;
        const auto F_next = far_field_residual(a_next, b_next, *T, dim, pq, tight);
        if (F_next && F_next->norm() < F0->norm() * (1.0 - 0.25 * lambda)) {
          a_try = a_next;
          b_try = b_next;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    const double dip_try = dip_depth(full_run(a_try, b_try).trajectory, scale);
    if (dip_try <= best_dip) {
      a = a_try;
      b = b_try;
      best_dip = dip_try;
    }
  }

  // Final trajectory: tight tolerances, decay margin deep enough that the
  // trailing window supports the decay-rate fit but still above the
  // double-precision contamination floor.
  IntegratorControls final_ctl = tight;
  final_ctl.t_max = ctl.t_max;
  final_ctl.decay_margin = std::min(ctl.decay_margin, std::exp(-6.2 * m));
  IntegrationResult final_res = integrate(a, b, dim, pq, final_ctl);
  for (int relax = 0; relax < 6 && !final_res.outcome.is_decay(); ++relax) {
    final_ctl.decay_margin = std::min(ctl.decay_margin, final_ctl.decay_margin * 10.0);
    final_res = integrate(a, b, dim, pq, final_ctl);
    if (final_ctl.decay_margin >= ctl.decay_margin) break;
  }
  if (!final_res.outcome.is_decay())
    throw structure_error("find_ground_state: converged pair does not classify as decay");

  GroundState gs;
  gs.a = a;
  gs.b = b;
  gs.trajectory = std::move(final_res.trajectory);
  gs.outcome = final_res.outcome;
  gs.polished = polished;
  gs.bracket = bracket;
  gs.flip_cells = std::move(flips);
  gs.residual = std::numeric_limits<double>::quiet_NaN();
  // Report the residual at the deepest far-field matching point reached.
  const Trajectory base = full_run(a, b).trajectory;
  for (double level : {kDeepLevel, kPolishLevel, kFarFieldLevel}) {
    if (const auto T = matching_point(base, level, scale)) {
      if (const auto F = far_field_residual(a, b, *T, dim, pq, tight)) {
        gs.residual = F->norm();
        break;
      }
    }
  }
  return gs;
}

}  // namespace hgs
