#include "propforge/track/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace propforge::track {

LoopErrors loop_errors(const DroneEstimate& estimate, const Point2& image_center,
                       std::optional<double> area_setpoint) {
  LoopErrors e;
  e.e_x = estimate.centroid.x() - image_center.x();
  e.e_y = estimate.centroid.y() - image_center.y();
  if (area_setpoint && estimate.area) e.e_area = *area_setpoint - *estimate.area;
  return e;
}

ControlCommand follow_policy(const LoopErrors& errors, const PidGains& gains, FollowState& state, double dt) {
  ControlCommand c;
  c.u_roll = pid_step(gains.roll, state.roll, errors.e_x, dt);
  c.u_pitch = pid_step(gains.pitch, state.pitch, errors.e_y, dt);
  if (errors.e_area) c.u_thrust = pid_step(gains.thrust, state.thrust, *errors.e_area, dt);
  return c;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Explore: return "EXPLORE";
    case Phase::Align: return "ALIGN";
    case Phase::Descend: return "DESCEND";
    case Phase::Land: return "LAND";
  }
  return "EXPLORE";
}

void LandThresholds::validate() const {
  if (!(align_px > 0.0)) throw std::invalid_argument("LandThresholds: align_px must be positive");
  if (!(land_altitude > 0.0)) throw std::invalid_argument("LandThresholds: land_altitude must be positive");
  if (!(descent_rate > 0.0)) throw std::invalid_argument("LandThresholds: descent_rate must be positive");
  if (!(explore_climb >= 0.0)) throw std::invalid_argument("LandThresholds: explore_climb must be >= 0");
  if (max_lost < 0) throw std::invalid_argument("LandThresholds: max_lost must be >= 0");
}

Phase land_transition(Phase phase, bool have_estimate, bool aligned, bool below_land_altitude, bool lost) {
  switch (phase) {
    case Phase::Explore:
      return have_estimate ? Phase::Align : Phase::Explore;
    case Phase::Align:
      if (lost) return Phase::Explore;
      return (have_estimate && aligned) ? Phase::Descend : Phase::Align;
    case Phase::Descend:
      if (lost) return Phase::Explore;
      if (!have_estimate) return Phase::Descend;
      if (!aligned) return Phase::Align;
      return below_land_altitude ? Phase::Land : Phase::Descend;
    case Phase::Land:
      return Phase::Land;
  }
  return phase;
}

LandOutput land_policy(LandState& state, const LandInput& input, const PidGains& gains,
                       const LandThresholds& th, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("land_policy: dt must be positive");
  const bool have = input.errors.has_value();
  state.lost_steps = have ? 0 : state.lost_steps + 1;
  const bool aligned = have && std::abs(input.errors->e_x) < th.align_px && std::abs(input.errors->e_y) < th.align_px;
  const Phase before = state.phase;
  state.phase = land_transition(state.phase, have, aligned, input.separation < th.land_altitude,
                                state.lost_steps > th.max_lost);
  if (state.phase == Phase::Explore && before != Phase::Explore) {
    state.roll = {};
    state.pitch = {};
  }

  LandOutput out;
  out.phase = state.phase;
  if (have && state.phase != Phase::Explore) {
    out.command.u_roll = pid_step(gains.roll, state.roll, input.errors->e_x, dt);
    out.command.u_pitch = pid_step(gains.pitch, state.pitch, input.errors->e_y, dt);
  }
  double closing_set = 0.0;
  switch (state.phase) {
    case Phase::Explore: closing_set = -th.explore_climb; break;
    case Phase::Align: closing_set = 0.0; break;
    case Phase::Descend:
    case Phase::Land: closing_set = th.descent_rate; break;
  }
  out.command.u_thrust = pid_step(gains.thrust, state.thrust, closing_set - input.closing_speed, dt);
  return out;
}

}  // namespace propforge::track
