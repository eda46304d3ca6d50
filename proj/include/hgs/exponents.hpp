#ifndef HGS_EXPONENTS_HPP
#define HGS_EXPONENTS_HPP

#include "hgs/types.hpp"

namespace hgs {

// Feasible range of the Sobolev smoothness s for the pair (s, t = 2 - s).
// Empty when lo > hi.
struct SobolevInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
  double length() const { return empty() ? 0.0 : hi - lo; }
};

// Verdicts and margins for an exponent triple (N, p, q).
struct ExponentRegime {
  double critical_exponent = 0.0;  // (N+2)/(N-2)
  double slack_p = 0.0;            // critical_exponent - p
  double slack_q = 0.0;            // critical_exponent - q
  double hyperbola_margin = 0.0;   // 1/(p+1) + 1/(q+1) - (N-2)/N
  SobolevInterval sobolev;

  // Pointwise condition p, q <= (N+2)/(N-2) (non-strict), under which positive
  // finite-energy solutions are radially symmetric and decay exponentially.
  bool pointwise_subcritical = false;
  // Strict hyperbola condition, the existence regime the solver targets.
  bool below_hyperbola_strict = false;
  // Ground-state hypothesis, both readings of the pointwise condition.
  bool ground_state_nonstrict = false;  // p, q <= (N+2)/(N-2)
  bool ground_state_strict = false;     // p, q <  (N+2)/(N-2)
};

ExponentRegime classify_exponents(SpaceDim dim, double p, double q);

// Feasible [s_lo, s_hi] with s_lo = N/2 - N/(q+1), s_hi = 2 - N/2 + N/(p+1),
// intersected with (0, 2). Nonempty interior iff hyperbola_margin > 0.
SobolevInterval sobolev_pair_interval(SpaceDim dim, double p, double q);

// Lebesgue exponents r reached from the radial Sobolev space of smoothness s:
// continuous embedding on [2, 2N/(N-2s)], compact on the open subrange.
struct EmbeddingRange {
  double lo = 2.0;
  double hi = 0.0;
  bool unbounded = false;  // s >= N/2: every r >= 2 is reached
};

EmbeddingRange embedding_range(SpaceDim dim, double s);

// Characteristic roots of the constant-coefficient comparison operators that
// sandwich the far-field decay:
//   mu_minus = -(N-1)(1+eps), mu_plus = 0,
//   nu_{-+}  = (-(N-1) -+ sqrt((N-1)^2 - 4 eps)) / 2.
// Requires 0 <= eps < (N-1)^2/4 so nu_{-+} are real and distinct.
struct CharacteristicRoots {
  double mu_minus = 0.0;
  double mu_plus = 0.0;
  double nu_minus = 0.0;
  double nu_plus = 0.0;
};

CharacteristicRoots characteristic_roots(SpaceDim dim, double eps);

}  // namespace hgs

#endif
