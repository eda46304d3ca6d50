#include "hgs/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hgs {

StateVector rhs(double t, const StateVector& y, SpaceDim dim, const ExponentPair& pq) {
  const double coth = 1.0 / std::tanh(t);
  const double m = dim.damping();
  StateVector dy;
  dy[0] = y[1];
  dy[1] = -m * coth * y[1] - odd_pow(y[2], pq.p());
  dy[2] = y[3];
  dy[3] = -m * coth * y[3] - odd_pow(y[0], pq.q());
  return dy;
}

Eigen::Vector4d rhs(const RadialState& s, SpaceDim dim, const ExponentPair& pq) {
  if (!s.finite()) throw input_error("rhs: non-finite state");
  if (s.t == 0.0) throw domain_error("rhs: singular at t = 0, use taylor_start");
  if (s.t < 0.0) throw domain_error("rhs: t must be positive");
  return rhs(s.t, pack(s), dim, pq);
}

RadialState taylor_start(double a, double b, SpaceDim dim, const ExponentPair& pq,
                         double t0) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw input_error("taylor_start: a and b must be finite and positive");
  if (!(t0 > 0.0) || !(t0 <= 0.1))
    throw input_error("taylor_start: t0 must lie in (0, 0.1]");

  const double n = dim.value();
  const double fb = odd_pow(b, pq.p());  // = b^p for b > 0
  const double fa = odd_pow(a, pq.q());
  // Fourth-order coefficients from matching coth(t) = 1/t + t/3 + O(t^3) and
  // the quadratic correction of the opposite component inside the power.
  const double u4 =
      ((n - 1.0) * fb / (3.0 * n) + pq.p() * std::pow(b, pq.p() - 1.0) * fa / (2.0 * n)) /
      (4.0 * n + 8.0);
  const double v4 =
      ((n - 1.0) * fa / (3.0 * n) + pq.q() * std::pow(a, pq.q() - 1.0) * fb / (2.0 * n)) /
      (4.0 * n + 8.0);

  const double t2 = t0 * t0;
  RadialState s;
  s.t = t0;
  s.u = a - fb * t2 / (2.0 * n) + u4 * t2 * t2;
  s.du = -fb * t0 / n + 4.0 * u4 * t2 * t0;
  s.v = b - fa * t2 / (2.0 * n) + v4 * t2 * t2;
  s.dv = -fa * t0 / n + 4.0 * v4 * t2 * t0;
  if (!s.finite()) throw input_error("taylor_start: non-finite series value");
  return s;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th-order weights and the embedded 4th-order ones.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseSegment {
  double t0 = 0.0, h = 0.0;
  StateVector r1, r2, r3, r4, r5;

  StateVector eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }
};

DenseSegment make_dense(double t0, double h, const StateVector& y0, const StateVector& y1,
                        const std::array<StateVector, 7>& k) {
  DenseSegment seg;
  seg.t0 = t0;
  seg.h = h;
  const StateVector ydiff = y1 - y0;
  const StateVector bspl = h * k[0] - ydiff;
  seg.r1 = y0;
  seg.r2 = ydiff;
  seg.r3 = bspl;
  seg.r4 = ydiff - h * k[6] - bspl;
  seg.r5 = h * (d1 * k[0] + d3 * k[2] + d4 * k[3] + d5 * k[4] + d6 * k[5] + d7 * k[6]);
  return seg;
}

double max_magnitude(const StateVector& y) { return y.cwiseAbs().maxCoeff(); }

// Locates the zero of `f` inside [lo, hi] (f(lo), f(hi) of opposite sign)
// to absolute precision `tol` by bisection.
template <typename F>
double bisect_time(F&& f, double lo, double hi, double flo, double tol) {
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct EventHit {
  OutcomeKind kind;
  double t;
};

}  // namespace

IntegrationResult integrate(double a, double b, SpaceDim dim, const ExponentPair& pq,
                            const IntegratorControls& ctl) {
  ctl.validate();
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw input_error("integrate: a and b must be finite and positive");

  const double scale0 = std::max(a, b);
  const double decay_level = ctl.decay_margin * scale0;

  std::vector<RadialState> nodes;
  StepStats stats;
  const Tolerances tol{ctl.rel_tol, ctl.abs_tol};
  auto snapshot = [&] { return Trajectory(nodes, tol, stats); };

  const RadialState start = taylor_start(a, b, dim, pq, ctl.t0);
  nodes.push_back(start);

  // Extreme mass ratios can push a component through zero already inside
  // [0, t0]; the series itself locates the crossing.
  if (start.u <= 0.0 || start.v <= 0.0) {
    const double tau_u = std::sqrt(2.0 * dim.value() * a / odd_pow(b, pq.p()));
    const double tau_v = std::sqrt(2.0 * dim.value() * b / odd_pow(a, pq.q()));
    const OutcomeKind kind =
        tau_u <= tau_v ? OutcomeKind::u_crossed : OutcomeKind::v_crossed;
    return {snapshot(), ShootingOutcome{kind, ctl.t0}};
  }
  // Data already past the magnitude bound never enters the in-step monitor.
  if (max_magnitude(pack(start)) > ctl.blowup_threshold)
    return {snapshot(), ShootingOutcome{OutcomeKind::blowup, ctl.t0}};

  double t = ctl.t0;
  StateVector y = pack(start);
  std::array<StateVector, 7> k;
  k[0] = rhs(t, y, dim, pq);
  ++stats.rhs_evals;

  // PI controller constants (order-5 pair).
  constexpr double kSafety = 0.9;
  constexpr double kBeta = 0.04;
  constexpr double kAlpha = 0.2 - 0.75 * kBeta;
  constexpr double kMaxGrow = 5.0, kMaxShrink = 0.2;
  constexpr long kMaxSteps = 50'000'000;

  double h = std::min(1e-3, 0.5 * (ctl.t_max - ctl.t0));
  double err_prev = 1e-4;
  bool just_rejected = false;

  auto error_norm = [&](const StateVector& y0, const StateVector& y1,
                        const StateVector& err) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      const double r = err[i] / sc;
      sum += r * r;
    }
    return std::sqrt(0.25 * sum);
  };

  while (t < ctl.t_max) {
    if (stats.accepted + stats.rejected > kMaxSteps)
      throw integration_error("integrate: step budget exhausted", snapshot());
    const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t);
    if (h < h_floor)
      throw integration_error("integrate: step size underflow at t = " + std::to_string(t),
                              snapshot());
    h = std::min(h, ctl.t_max - t);

    const StateVector y1s = y + h * a21 * k[0];
    k[1] = rhs(t + c2 * h, y1s, dim, pq);
    const StateVector y2s = y + h * (a31 * k[0] + a32 * k[1]);
    k[2] = rhs(t + c3 * h, y2s, dim, pq);
    const StateVector y3s = y + h * (a41 * k[0] + a42 * k[1] + a43 * k[2]);
    k[3] = rhs(t + c4 * h, y3s, dim, pq);
    const StateVector y4s = y + h * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]);
    k[4] = rhs(t + c5 * h, y4s, dim, pq);
    const StateVector y5s =
        y + h * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]);
    k[5] = rhs(t + h, y5s, dim, pq);
    const StateVector y_new =
        y + h * (b1 * k[0] + b3 * k[2] + b4 * k[3] + b5 * k[4] + b6 * k[5]);
    k[6] = rhs(t + h, y_new, dim, pq);
    stats.rhs_evals += 6;

    const StateVector err_vec =
        h * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);
    const double err = y_new.allFinite() ? error_norm(y, y_new, err_vec)
                                         : std::numeric_limits<double>::infinity();

    if (!(err <= 1.0)) {
      ++stats.rejected;
      const double fac =
          std::isfinite(err) ? std::max(kMaxShrink, kSafety * std::pow(err, -kAlpha)) : kMaxShrink;
      h *= fac;
      just_rejected = true;
      continue;
    }

    ++stats.accepted;
    const DenseSegment dense = make_dense(t, h, y, y_new, k);

    // Scan the step for the earliest event: sample the dense interpolant,
    // then refine any sign change to rel_tol in time.
    const double t_tol = ctl.rel_tol * std::max(1.0, t + h);
    std::vector<EventHit> hits;
    constexpr int kSamples = 8;
    auto component = [&](int idx) {
      return [&dense, idx](double tt) { return dense.eval(tt)[idx]; };
    };
    for (int comp : {0, 2}) {
      double prev_t = t;
      double prev_val = (comp == 0) ? y[0] : y[2];
      for (int s = 1; s <= kSamples; ++s) {
        const double tt = t + h * s / kSamples;
        const double val = dense.eval(tt)[comp];
        if ((prev_val > 0.0 && val <= 0.0) || (prev_val < 0.0 && val >= 0.0)) {
          const double tc = bisect_time(component(comp), prev_t, tt, prev_val, t_tol);
          hits.push_back({comp == 0 ? OutcomeKind::u_crossed : OutcomeKind::v_crossed, tc});
          break;
        }
        prev_t = tt;
        prev_val = val;
      }
    }
    {
      double prev_t = t;
      double prev_mag = max_magnitude(y) - ctl.blowup_threshold;
      for (int s = 1; s <= kSamples && prev_mag < 0.0; ++s) {
        const double tt = t + h * s / kSamples;
        const double mag = max_magnitude(dense.eval(tt)) - ctl.blowup_threshold;
        if (mag >= 0.0) {
          auto f = [&dense, &ctl](double x) {
            return max_magnitude(dense.eval(x)) - ctl.blowup_threshold;
          };
          hits.push_back({OutcomeKind::blowup, bisect_time(f, prev_t, tt, prev_mag, t_tol)});
          break;
        }
        prev_t = tt;
        prev_mag = mag;
      }
    }

    if (!hits.empty()) {
      // Earliest event wins; u-crossing wins exact ties.
      const auto best = std::min_element(hits.begin(), hits.end(), [](auto& l, auto& r) {
        if (l.t != r.t) return l.t < r.t;
        return static_cast<int>(l.kind) < static_cast<int>(r.kind);
      });
      const double tc = best->t;
      if (tc > nodes.back().t) nodes.push_back(unpack(tc, dense.eval(tc)));
      return {snapshot(), ShootingOutcome{best->kind, tc}};
    }

    t += h;
    y = y_new;
    k[0] = k[6];  // FSAL
    nodes.push_back(unpack(t, y));

    if (decay_level > 0.0 && std::max(std::abs(y[0]), std::abs(y[2])) < decay_level &&
        y[1] < 0.0 && y[3] < 0.0)
      return {snapshot(), ShootingOutcome{OutcomeKind::decay, t}};

    const double fac11 = std::pow(err, kAlpha);
    double fac = fac11 / std::pow(err_prev, kBeta);
    fac = std::max(1.0 / kMaxGrow, std::min(1.0 / kMaxShrink, fac / kSafety));
    double h_next = h / fac;
    if (just_rejected) h_next = std::min(h_next, h);
    just_rejected = false;
    err_prev = std::max(err, 1e-4);
    h = h_next;
  }

  return {snapshot(), ShootingOutcome{OutcomeKind::undetermined, ctl.t_max}};
}

}  // namespace hgs
