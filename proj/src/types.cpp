#include "hgs/types.hpp"

namespace hgs {

std::string to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::decay: return "decay";
    case OutcomeKind::u_crossed: return "u_crossed";
    case OutcomeKind::v_crossed: return "v_crossed";
    case OutcomeKind::blowup: return "blowup";
    case OutcomeKind::undetermined: return "undetermined";
  }
  return "unknown";
}

Trajectory::Trajectory(std::vector<RadialState> states, Tolerances tol, StepStats stats)
    : states_(std::move(states)), tol_(tol), stats_(stats) {
  for (std::size_t i = 0; i + 1 < states_.size(); ++i)
    if (!(states_[i].t < states_[i + 1].t))
      throw input_error("Trajectory: states must be strictly increasing in t");
}

Eigen::ArrayXd Trajectory::column(double RadialState::*field) const {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(states_.size()));
  for (std::size_t i = 0; i < states_.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = states_[i].*field;
  return out;
}

void IntegratorControls::validate() const {
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol))
    throw input_error("IntegratorControls: rel_tol must be > 0");
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
    throw input_error("IntegratorControls: abs_tol must be > 0");
  if (!(t0 > 0.0) || !(t0 <= 0.1))
    throw input_error("IntegratorControls: t0 must lie in (0, 0.1]");
  if (!(t_max > t0) || !std::isfinite(t_max))
    throw input_error("IntegratorControls: T_max must exceed t0");
  if (!(blowup_threshold > 1.0))
    throw input_error("IntegratorControls: blowup_threshold must be > 1");
  if (!(decay_margin >= 0.0) || !std::isfinite(decay_margin))
    throw input_error("IntegratorControls: decay_margin must be >= 0");
}

}  // namespace hgs
