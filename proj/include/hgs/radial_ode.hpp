#ifndef HGS_RADIAL_ODE_HPP
#define HGS_RADIAL_ODE_HPP

#include <Eigen/Dense>

#include "hgs/types.hpp"

namespace hgs {

// Odd power |x|^{r-1} x, the locally Lipschitz extension of x^r that keeps
// crossings past zero well defined.
inline double odd_pow(double x, double r) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), r), x);
}

// Right-hand side of the first-order system for y = (u, u', v, v'):
//   u'' = -(N-1) coth(t) u' - odd_pow(v, p)
//   v'' = -(N-1) coth(t) v' - odd_pow(u, q)
// Only valid for t > 0; the origin is handled by taylor_start.
StateVector rhs(double t, const StateVector& y, SpaceDim dim, const ExponentPair& pq);

// Derivative tuple (u', u'', v', v'') at a state with t > 0.
// Throws domain_error at t = 0 (use taylor_start) and input_error on
// non-finite states.
Eigen::Vector4d rhs(const RadialState& s, SpaceDim dim, const ExponentPair& pq);

// Series start at the matching point t0 in (0, 0.1], regularizing the
// coth(t) singularity of the radial system at the origin:
//   u(t0) = a - odd_pow(b,p) t0^2/(2N) + u4 t0^4 + O(t0^6),
//   u'(t0) = -odd_pow(b,p) t0/N + 4 u4 t0^3 + O(t0^5),
// and symmetrically for v with odd_pow(a,q).
RadialState taylor_start(double a, double b, SpaceDim dim, const ExponentPair& pq,
                         double t0);

struct IntegrationResult {
  Trajectory trajectory;
  ShootingOutcome outcome;
};

// Adaptive error-controlled integration of the radial system from
// taylor_start(t0) toward T_max, terminating at the first of:
//   u crosses 0 / v crosses 0 (crossing time refined in-step to rel_tol),
//   max(|u|,|v|,|u'|,|v'|) > blowup_threshold,
//   max(|u|,|v|) < decay_margin * max(a,b) with u' < 0 and v' < 0,
//   t = T_max.
// The method is a Dormand-Prince 5(4) pair with PI step control and quartic
// dense output; it is a module constant, not a knob.
IntegrationResult integrate(double a, double b, SpaceDim dim, const ExponentPair& pq,
                            const IntegratorControls& ctl);

}  // namespace hgs

#endif
