#include "hgs/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hgs {

namespace {

void require_exponents(double p, double q) {
  if (!std::isfinite(p) || !(p > 1.0))
    throw input_error("exponents: p must be finite and > 1");
  if (!std::isfinite(q) || !(q > 1.0))
    throw input_error("exponents: q must be finite and > 1");
}

}  // namespace

ExponentRegime classify_exponents(SpaceDim dim, double p, double q) {
  require_exponents(p, q);
  const double n = dim.value();
  ExponentRegime r;
  r.critical_exponent = (n + 2.0) / (n - 2.0);
  r.slack_p = r.critical_exponent - p;
  r.slack_q = r.critical_exponent - q;
  r.hyperbola_margin = 1.0 / (p + 1.0) + 1.0 / (q + 1.0) - (n - 2.0) / n;
  r.sobolev = sobolev_pair_interval(dim, p, q);
  r.pointwise_subcritical = r.slack_p >= 0.0 && r.slack_q >= 0.0;
  r.below_hyperbola_strict = r.hyperbola_margin > 0.0;
  r.ground_state_nonstrict = r.pointwise_subcritical;
  r.ground_state_strict = r.slack_p > 0.0 && r.slack_q > 0.0;
  return r;
}

SobolevInterval sobolev_pair_interval(SpaceDim dim, double p, double q) {
  require_exponents(p, q);
  const double n = dim.value();
  SobolevInterval iv;
  iv.lo = std::max(0.5 * n - n / (q + 1.0), 0.0);
  iv.hi = std::min(2.0 - 0.5 * n + n / (p + 1.0), 2.0);
  return iv;
}

EmbeddingRange embedding_range(SpaceDim dim, double s) {
  if (!std::isfinite(s) || s <= 0.0) throw input_error("embedding_range: s must be > 0");
  const double n = dim.value();
  EmbeddingRange r;
  if (s >= 0.5 * n) {
    r.unbounded = true;
    r.hi = std::numeric_limits<double>::infinity();
    return r;
  }
  r.hi = 2.0 * n / (n - 2.0 * s);
  return r;
}

CharacteristicRoots characteristic_roots(SpaceDim dim, double eps) {
  const double m = dim.damping();
  if (!std::isfinite(eps) || eps < 0.0 || !(eps < 0.25 * m * m))
    throw input_error("characteristic_roots: eps must lie in [0, (N-1)^2/4)");
  const double disc = std::sqrt(m * m - 4.0 * eps);
  CharacteristicRoots r;
  r.mu_minus = -m * (1.0 + eps);
  r.mu_plus = 0.0;
  r.nu_minus = 0.5 * (-m - disc);
  r.nu_plus = 0.5 * (-m + disc);
  return r;
}

}  // namespace hgs
