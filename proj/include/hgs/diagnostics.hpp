#ifndef HGS_DIAGNOSTICS_HPP
#define HGS_DIAGNOSTICS_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "hgs/types.hpp"

namespace hgs {

// Pointwise energy J = u'v' + |v|^{p+1}/(p+1) + |u|^{q+1}/(q+1), which is
// non-increasing along solutions of the radial system.
double energy(const RadialState& s, const ExponentPair& pq);

struct MonotoneReport {
  bool passed = false;
  double slack = 0.0;  // 10 * abs_tol of the trajectory
  std::optional<std::size_t> first_violation;
};

// Checks u' < slack and v' < slack at every node with t > t0.
MonotoneReport check_monotone(const Trajectory& traj);

struct EnergyReport {
  Eigen::ArrayXd J;               // J at every node
  double max_increase = 0.0;      // largest positive increment between nodes
  double dissipation_residual = 0.0;  // worst |dJ - integrated rate| per node pair
  Eigen::ArrayXd node_residuals;
};

// Compares finite differences of J against the integral of the dissipation
// rate dJ/dt = -2 (N-1) coth(t) u'v' over each node pair. The integral uses
// the derivative-corrected trapezoid rule (exact endpoint slopes are known
// from the system), so the residual tracks trajectory error, not rule error.
EnergyReport check_energy_dissipation(const Trajectory& traj, SpaceDim dim,
                                      const ExponentPair& pq);

struct DecayReport {
  double slope_u2 = 0.0;
  double slope_v2 = 0.0;
  double slope_du2 = 0.0;
  double slope_dv2 = 0.0;
  double target = 0.0;  // -2(N-1)
  double t_lo = 0.0;
  double t_hi = 0.0;
  double max_rel_dev = 0.0;
  std::vector<std::size_t> excluded_nodes;  // exact zeros inside the window
};

// Least-squares slopes of log u^2, log v^2, log u'^2, log v'^2 over the
// trailing window [t_hi - W, t_hi] with W clamped to [5, 10] and at most a
// third of the span. Requires the profile to have decayed below 1e-6 of its
// initial scale; spans shorter than 5 raise window_error.
DecayReport fit_decay(const Trajectory& traj, SpaceDim dim);

struct IdentityReport {
  double gradient_pairing = 0.0;  // omega int k u'v'
  double u_power_mass = 0.0;      // omega int k u^{q+1}
  double v_power_mass = 0.0;      // omega int k v^{p+1}
  double residual_gu = 0.0;       // |A-B| / max(A,B,C) and cyclic
  double residual_gv = 0.0;
  double residual_uv = 0.0;
  double max_residual = 0.0;
  double action = 0.0;         // (1/2 - 1/(p+1)) C + (1/2 - 1/(q+1)) B
  double action_direct = 0.0;  // A - C/(p+1) - B/(q+1)
  double action_mismatch = 0.0;  // relative difference of the two routes
};

// Evaluates the three volume integrals that coincide on exact solutions,
// closing each tail [t_end, infinity) analytically with the fitted decay
// rate, and both computation routes for the action.
IdentityReport check_identities(const Trajectory& traj, const ShootingOutcome& outcome,
                                SpaceDim dim, const ExponentPair& pq);

struct TailBoundReport {
  bool applicable = false;  // t_eps reached inside the trajectory
  bool passed = false;
  double t_eps = 0.0;
  double lower_rate = 0.0;  // mu_minus(eps)
  double upper_rate = 0.0;  // nu_minus(eps)
  double worst_lower_margin = 0.0;  // min over nodes of (u+v)/lower_bound - 1
  double worst_upper_margin = 0.0;  // min over nodes of upper_bound/(u+v) - 1
};

// Verifies that u + v is sandwiched between the comparison exponentials
// anchored at t_eps: the first node where coth(t) <= 1 + eps and the
// nonlinearities satisfy odd_pow(v,p) <= eps v, odd_pow(u,q) <= eps u.
// Requires 0 < eps < (N-1)^2/4.
TailBoundReport characteristic_tail_bound(const Trajectory& traj, SpaceDim dim,
                                          const ExponentPair& pq, double eps);

}  // namespace hgs

#endif
