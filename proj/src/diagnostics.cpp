#include "hgs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hgs/exponents.hpp"
#include "hgs/geometry.hpp"
#include "hgs/radial_ode.hpp"

namespace hgs {

double energy(const RadialState& s, const ExponentPair& pq) {
  return s.du * s.dv + std::pow(std::abs(s.v), pq.p() + 1.0) / (pq.p() + 1.0) +
         std::pow(std::abs(s.u), pq.q() + 1.0) / (pq.q() + 1.0);
}

MonotoneReport check_monotone(const Trajectory& traj) {
  if (traj.size() < 2) throw input_error("check_monotone: trajectory has no interior nodes");
  MonotoneReport rep;
  rep.slack = 10.0 * traj.tol().abs;
  rep.passed = true;
  const double t0 = traj.front().t;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const RadialState& s = traj[i];
    if (s.t <= t0) continue;
    if (s.du >= rep.slack || s.dv >= rep.slack) {
      rep.passed = false;
      rep.first_violation = i;
      break;
    }
  }
  return rep;
}

EnergyReport check_energy_dissipation(const Trajectory& traj, SpaceDim dim,
                                      const ExponentPair& pq) {
  if (traj.size() < 2)
    throw input_error("check_energy_dissipation: trajectory has no interior nodes");
  const auto n = static_cast<Eigen::Index>(traj.size());
  const double m = dim.damping();

  EnergyReport rep;
  rep.J.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) rep.J[i] = energy(traj[static_cast<std::size_t>(i)], pq);

  // Dissipation rate along the system: dJ/dt = -2 (N-1) coth(t) u'v'.
  // Its exact time derivative is also available, so each node pair
  // integrates with a derivative-corrected trapezoid whose error tracks the
  // trajectory, not the rule.
  Eigen::ArrayXd g(n), gp(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const RadialState& s = traj[static_cast<std::size_t>(i)];
    const double sh = std::sinh(s.t);
    const double coth = std::cosh(s.t) / sh;
    const double csch2 = 1.0 / (sh * sh);
    const double ddu = -m * coth * s.du - odd_pow(s.v, pq.p());
    const double ddv = -m * coth * s.dv - odd_pow(s.u, pq.q());
    g[i] = -2.0 * m * coth * s.du * s.dv;
    gp[i] = -2.0 * m * (-csch2 * s.du * s.dv + coth * (ddu * s.dv + s.du * ddv));
  }

  rep.node_residuals.resize(n - 1);
  rep.max_increase = 0.0;
  rep.dissipation_residual = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double dJ = rep.J[i + 1] - rep.J[i];
    rep.max_increase = std::max(rep.max_increase, dJ);
    const double h = traj[static_cast<std::size_t>(i + 1)].t - traj[static_cast<std::size_t>(i)].t;
    const double integral =
        0.5 * h * (g[i] + g[i + 1]) + h * h / 12.0 * (gp[i] - gp[i + 1]);
    rep.node_residuals[i] = std::abs(dJ - integral);
    rep.dissipation_residual = std::max(rep.dissipation_residual, rep.node_residuals[i]);
  }
  return rep;
}

namespace {

struct WindowFit {
  double slope = 0.0;
  bool valid = false;
};

WindowFit fit_log_square_slope(const Eigen::ArrayXd& t, const Eigen::ArrayXd& q,
                               double t_lo, std::vector<std::size_t>* excluded) {
  double st = 0.0, sy = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo) continue;
    if (q[i] == 0.0) {
      if (excluded) excluded->push_back(static_cast<std::size_t>(i));
      continue;
    }
    st += t[i];
    sy += 2.0 * std::log(std::abs(q[i]));
    ++count;
  }
  WindowFit fit;
  if (count < 4) return fit;
  const double mt = st / count, my = sy / count;
  double sxx = 0.0, sxy = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || q[i] == 0.0) continue;
    const double dt = t[i] - mt;
    sxx += dt * dt;
    sxy += dt * (2.0 * std::log(std::abs(q[i])) - my);
  }
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.valid = true;
  return fit;
}

}  // namespace

DecayReport fit_decay(const Trajectory& traj, SpaceDim dim) {
  if (traj.size() < 8) throw input_error("fit_decay: trajectory too short");
  const double scale0 = std::max(std::abs(traj.front().u), std::abs(traj.front().v));
  const double tail = std::max(std::abs(traj.back().u), std::abs(traj.back().v));
  if (!(tail <= 1e-6 * scale0))
    throw input_error("fit_decay: profile has not decayed below 1e-6 of its initial scale");

  const double span = traj.span();
  if (span < 5.0)
    throw window_error("fit_decay: trajectory span " + std::to_string(span) +
                       " cannot host a 5-unit fit window");
  const double W = std::clamp(span / 3.0, 5.0, 10.0);

  DecayReport rep;
  rep.target = -2.0 * dim.damping();
  rep.t_hi = traj.back().t;
  rep.t_lo = rep.t_hi - W;

  const Eigen::ArrayXd t = traj.ts();
  const WindowFit fu = fit_log_square_slope(t, traj.us(), rep.t_lo, &rep.excluded_nodes);
  const WindowFit fv = fit_log_square_slope(t, traj.vs(), rep.t_lo, &rep.excluded_nodes);
  const WindowFit fdu = fit_log_square_slope(t, traj.dus(), rep.t_lo, &rep.excluded_nodes);
  const WindowFit fdv = fit_log_square_slope(t, traj.dvs(), rep.t_lo, &rep.excluded_nodes);
  if (!fu.valid || !fv.valid || !fdu.valid || !fdv.valid)
    throw window_error("fit_decay: too few usable nodes in the fit window");

  rep.slope_u2 = fu.slope;
  rep.slope_v2 = fv.slope;
  rep.slope_du2 = fdu.slope;
  rep.slope_dv2 = fdv.slope;
  rep.max_rel_dev = 0.0;
  for (double s : {fu.slope, fv.slope, fdu.slope, fdv.slope})
    rep.max_rel_dev = std::max(rep.max_rel_dev, std::abs(s - rep.target) / std::abs(rep.target));
  return rep;
}

namespace {

// Analytic tail of int_T^inf k(t) g(t) dt for g decaying like e^{sigma t}.
double exponential_tail(double k_end, double g_end, double m, double sigma) {
  double lambda = m + sigma;
  if (!(lambda < -1e-3)) lambda = -1e-3;  // degenerate fit; keep the tail bounded
  return -k_end * g_end / lambda;
}

}  // namespace

IdentityReport check_identities(const Trajectory& traj, const ShootingOutcome& outcome,
                                SpaceDim dim, const ExponentPair& pq) {
  if (!outcome.is_decay()) throw input_error("check_identities: requires a decay trajectory");
  if (traj.size() < 3) throw input_error("check_identities: trajectory too short");

  const double m = dim.damping();
  const double p = pq.p(), q = pq.q();
  const Eigen::ArrayXd t = traj.ts();
  const Eigen::ArrayXd u = traj.us(), du = traj.dus();
  const Eigen::ArrayXd v = traj.vs(), dv = traj.dvs();

  IdentityReport rep;
  if (u.abs().maxCoeff() == 0.0 && v.abs().maxCoeff() == 0.0) return rep;

  Eigen::ArrayXd k(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) k[i] = radial_volume_weight(t[i], dim);

  const double omega = sphere_area(dim);
  double A = omega * trapezoid_refined(t, (k * du * dv).eval());
  double B = omega * trapezoid_refined(t, (k * u.abs().pow(q + 1.0)).eval());
  double C = omega * trapezoid_refined(t, (k * v.abs().pow(p + 1.0)).eval());

  // The grid starts at the series matching point t0 > 0; close [0, t0]
  // analytically with k ~ t^{N-1} and the flat/linear leading behavior of
  // the profile there (relative error O(t0^2)).
  {
    const double t0 = t[0];
    const double tN = std::pow(t0, m + 1.0);
    A += omega * du[0] * dv[0] * tN / (m + 3.0);
    B += omega * std::pow(std::abs(u[0]), q + 1.0) * tN / (m + 1.0);
    C += omega * std::pow(std::abs(v[0]), p + 1.0) * tN / (m + 1.0);
  }

  // Close the truncated tails with the fitted decay rates.
  const DecayReport decay = fit_decay(traj, dim);
  const auto last = static_cast<Eigen::Index>(traj.size()) - 1;
  const double k_end = k[last];
  A += omega * exponential_tail(k_end, du[last] * dv[last], m,
                                0.5 * (decay.slope_du2 + decay.slope_dv2));
  B += omega * exponential_tail(k_end, std::pow(std::abs(u[last]), q + 1.0), m,
                                0.5 * (q + 1.0) * decay.slope_u2);
  C += omega * exponential_tail(k_end, std::pow(std::abs(v[last]), p + 1.0), m,
                                0.5 * (p + 1.0) * decay.slope_v2);

  rep.gradient_pairing = A;
  rep.u_power_mass = B;
  rep.v_power_mass = C;
  const double M = std::max({std::abs(A), std::abs(B), std::abs(C),
                             std::numeric_limits<double>::min()});
  rep.residual_gu = std::abs(A - B) / M;
  rep.residual_gv = std::abs(A - C) / M;
  rep.residual_uv = std::abs(B - C) / M;
  rep.max_residual = std::max({rep.residual_gu, rep.residual_gv, rep.residual_uv});

  rep.action = (0.5 - 1.0 / (p + 1.0)) * C + (0.5 - 1.0 / (q + 1.0)) * B;
  rep.action_direct = A - C / (p + 1.0) - B / (q + 1.0);
  rep.action_mismatch = std::abs(rep.action - rep.action_direct) /
                        std::max(std::abs(rep.action), std::numeric_limits<double>::min());
  return rep;
}

TailBoundReport characteristic_tail_bound(const Trajectory& traj, SpaceDim dim,
                                          const ExponentPair& pq, double eps) {
  const double m = dim.damping();
  if (!(eps > 0.0) || !(eps < 0.25 * m * m))
    throw input_error("characteristic_tail_bound: eps must lie in (0, (N-1)^2/4)");
  if (traj.size() < 2) throw input_error("characteristic_tail_bound: trajectory too short");

  const CharacteristicRoots roots = characteristic_roots(dim, eps);
  TailBoundReport rep;
  rep.lower_rate = roots.mu_minus;
  rep.upper_rate = roots.nu_minus;

  // t_eps: the first node past which the linear comparison operators bracket
  // the system (coth close to 1 and both nonlinearities eps-small).
  std::size_t start = traj.size();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const RadialState& s = traj[i];
    if (!(s.u > 0.0) || !(s.v > 0.0)) continue;
    const bool coth_ok = 1.0 / std::tanh(s.t) <= 1.0 + eps;
    const bool v_small = odd_pow(s.v, pq.p()) <= eps * s.v;
    const bool u_small = odd_pow(s.u, pq.q()) <= eps * s.u;
    if (coth_ok && v_small && u_small) {
      start = i;
      break;
    }
  }
  if (start >= traj.size() - 1) return rep;  // not applicable

  rep.applicable = true;
  rep.t_eps = traj[start].t;
  const double s0 = traj[start].u + traj[start].v;
  const double slack = 100.0 * traj.tol().rel;

  rep.worst_lower_margin = std::numeric_limits<double>::infinity();
  rep.worst_upper_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < traj.size(); ++i) {
    const RadialState& s = traj[i];
    const double sum = s.u + s.v;
    const double lower = s0 * std::exp(roots.mu_minus * (s.t - rep.t_eps));
    const double upper = s0 * std::exp(roots.nu_minus * (s.t - rep.t_eps));
    rep.worst_lower_margin = std::min(rep.worst_lower_margin, sum / lower - 1.0);
    rep.worst_upper_margin = std::min(rep.worst_upper_margin, upper / sum - 1.0);
  }
  rep.passed = rep.worst_lower_margin >= -slack && rep.worst_upper_margin >= -slack;
  return rep;
}

}  // namespace hgs
