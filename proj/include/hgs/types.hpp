#ifndef HGS_TYPES_HPP
#define HGS_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "hgs/errors.hpp"

namespace hgs {

// Dimension N >= 3 of the hyperbolic space H^N.
class SpaceDim {
 public:
  explicit SpaceDim(int n) : n_(n) {
    if (n < 3) throw domain_error("SpaceDim: N must be >= 3, got " + std::to_string(n));
  }
  int value() const { return n_; }
  // N-1, the exponent of the radial volume weight and the linear decay rate.
  double damping() const { return static_cast<double>(n_ - 1); }

 private:
  int n_;
};

// Nonlinearity exponents (p, q), both > 1 so the coupled power pq > 1.
class ExponentPair {
 public:
  ExponentPair(double p, double q) : p_(p), q_(q) {
    if (!(p > 1.0) || !std::isfinite(p))
      throw domain_error("ExponentPair: p must be finite and > 1");
    if (!(q > 1.0) || !std::isfinite(q))
      throw domain_error("ExponentPair: q must be finite and > 1");
  }
  double p() const { return p_; }
  double q() const { return q_; }
  bool symmetric() const { return p_ == q_; }

 private:
  double p_, q_;
};

// One point of a radial profile: geodesic distance plus (u, u', v, v').
struct RadialState {
  double t = 0.0;
  double u = 0.0;
  double du = 0.0;
  double v = 0.0;
  double dv = 0.0;

  bool finite() const {
    return std::isfinite(t) && std::isfinite(u) && std::isfinite(du) &&
           std::isfinite(v) && std::isfinite(dv);
  }
};

// Phase-space vector (u, u', v, v') used by the integrator.
using StateVector = Eigen::Vector4d;

inline StateVector pack(const RadialState& s) { return StateVector(s.u, s.du, s.v, s.dv); }

inline RadialState unpack(double t, const StateVector& y) {
  return RadialState{t, y[0], y[1], y[2], y[3]};
}

enum class OutcomeKind { decay, u_crossed, v_crossed, blowup, undetermined };

std::string to_string(OutcomeKind kind);

// Classification of an initial-value run. `time` is the decay trigger
// distance, the refined crossing time, the blow-up time, or T_max,
// depending on the variant.
struct ShootingOutcome {
  OutcomeKind kind = OutcomeKind::undetermined;
  double time = 0.0;

  bool is_decay() const { return kind == OutcomeKind::decay; }
  bool crossed() const {
    return kind == OutcomeKind::u_crossed || kind == OutcomeKind::v_crossed;
  }
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

struct Tolerances {
  double rel = 0.0;
  double abs = 0.0;
};

// Dense, monotone-in-t sequence of radial states produced by one accepted-step
// run of the adaptive integrator. Immutable after construction.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<RadialState> states, Tolerances tol, StepStats stats);

  const std::vector<RadialState>& states() const { return states_; }
  const RadialState& operator[](std::size_t i) const { return states_[i]; }
  const RadialState& front() const { return states_.front(); }
  const RadialState& back() const { return states_.back(); }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  double span() const { return empty() ? 0.0 : back().t - front().t; }

  const Tolerances& tol() const { return tol_; }
  const StepStats& stats() const { return stats_; }

  // Column views for quadrature and fitting.
  Eigen::ArrayXd ts() const { return column(&RadialState::t); }
  Eigen::ArrayXd us() const { return column(&RadialState::u); }
  Eigen::ArrayXd dus() const { return column(&RadialState::du); }
  Eigen::ArrayXd vs() const { return column(&RadialState::v); }
  Eigen::ArrayXd dvs() const { return column(&RadialState::dv); }

 private:
  Eigen::ArrayXd column(double RadialState::*field) const;

  std::vector<RadialState> states_;
  Tolerances tol_;
  StepStats stats_;
};

// Controls for the event-detecting adaptive integration.
struct IntegratorControls {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double t_max = 60.0;
  double blowup_threshold = 1e6;
  double t0 = 1e-3;          // series-start matching point
  double decay_margin = 1e-8;  // 0 disables the decay event

  // Throws input_error naming the offending field.
  void validate() const;
};

// Integration terminated by step-size underflow or step-budget exhaustion;
// carries whatever was integrated up to the failure point.
class integration_error : public std::runtime_error {
 public:
  integration_error(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

}  // namespace hgs

#endif
