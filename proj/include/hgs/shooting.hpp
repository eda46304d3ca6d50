#ifndef HGS_SHOOTING_HPP
#define HGS_SHOOTING_HPP

#include <vector>

#include "hgs/radial_ode.hpp"
#include "hgs/types.hpp"

namespace hgs {

// A cell of the seed-region scan across which the outcome classification
// flips along the b axis.
struct FlipCell {
  double a = 0.0;
  double b_lo = 0.0;
  double b_hi = 0.0;
  OutcomeKind lo_kind = OutcomeKind::undetermined;
  OutcomeKind hi_kind = OutcomeKind::undetermined;
};

// The nested-bisection bracket the search converged through: the boundary
// orbit drifts at a_lo and crosses at a_hi, and the witnessed outcomes flip
// across [b_lo, b_hi] on the final line.
struct ShootingBracket {
  double a_lo = 0.0;
  double a_hi = 0.0;
  double b_lo = 0.0;
  double b_hi = 0.0;
  OutcomeKind b_lo_kind = OutcomeKind::undetermined;
  OutcomeKind b_hi_kind = OutcomeKind::undetermined;
};

// Converged initial pair and its trajectory. The outcome is always Decay;
// `residual` is the norm of (u'(T) + (N-1) u(T), v'(T) + (N-1) v(T)) at the
// far-field matching point T. `polished` records whether the Newton phase
// met its residual target; unpolished results are best Phase-1 candidates.
struct GroundState {
  double a = 0.0;
  double b = 0.0;
  Trajectory trajectory;
  ShootingOutcome outcome;
  double residual = 0.0;
  bool polished = false;
  ShootingBracket bracket;
  std::vector<FlipCell> flip_cells;  // every classification flip seen in the scan
};

struct SeedRegion {
  double lo = 1e-2;
  double hi = 1e2;
  int grid = 16;  // log-spaced points per axis
};

// Outcome of integrate(a, b, ...), discarding the trajectory.
ShootingOutcome classify_outcome(double a, double b, SpaceDim dim,
                                 const ExponentPair& pq, const IntegratorControls& ctl);

// Locate the symmetric initial value a* (u(0) = v(0) = a*) whose trajectory
// separates crossing from non-crossing on the diagonal of a p = q system.
// The bracket endpoints must witness the two sides; the returned bracket
// width is at most 1e-12 * a*.
double bisect_on_diagonal(SpaceDim dim, const ExponentPair& pq,
                          const IntegratorControls& ctl, double a_lo, double a_hi);

// Two-phase search for a decaying initial pair:
//   Phase 1: scan the seed region for classification flips, bisect b on the
//     first-event boundary for each trial a, then slide a to balance the two
//     components of the asymptotic residual.
//   Phase 2: damped Newton on R(a,b) = (u'(T)+(N-1)u(T), v'(T)+(N-1)v(T))
//     with T at the far-field matching level and a forward-difference
//     Jacobian with step 1e-6 (a, b).
// Requires the strict hyperbola condition (checked via classify_exponents);
// `enforce_regime = false` attempts the search regardless and lets it fail
// with a bracket or structure error where no decaying pair exists.
GroundState find_ground_state(SpaceDim dim, const ExponentPair& pq,
                              const IntegratorControls& ctl,
                              const SeedRegion& seed = SeedRegion{},
                              bool enforce_regime = true);

}  // namespace hgs

#endif
