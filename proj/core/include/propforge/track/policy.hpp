#pragma once

#include <optional>
#include <string_view>

#include "propforge/track/pid.hpp"
#include "propforge/track/tracker.hpp"

namespace propforge::track {

/// Image-plane errors. e_x, e_y = centroid - image center (px); e_area =
/// area setpoint - current area (px^2) when an area is available.
struct LoopErrors {
  double e_x{0.0};
  double e_y{0.0};
  std::optional<double> e_area;
};

/// Accelerations along image u, image v and the camera axis towards the
/// target. Positive u_roll moves the camera so the target drifts towards
/// smaller u; a target left of center (e_x < 0) gives u_roll < 0.
struct ControlCommand {
  double u_roll{0.0};
  double u_pitch{0.0};
  double u_thrust{0.0};
};

LoopErrors loop_errors(const DroneEstimate& estimate, const Point2& image_center,
                       std::optional<double> area_setpoint);

struct FollowState {
  PidState roll;
  PidState pitch;
  PidState thrust;
  std::optional<double> area_setpoint;
};

/// One PID per axis. Without an area error the thrust command is 0 and
/// its PID state is left untouched.
ControlCommand follow_policy(const LoopErrors& errors, const PidGains& gains, FollowState& state, double dt);

enum class Phase { Explore, Align, Descend, Land };
std::string_view to_string(Phase phase);

struct LandThresholds {
  double align_px{10.0};       // |e_x| and |e_y| below this count as aligned
  double land_altitude{0.4};   // m, DESCEND -> LAND below this separation
  double descent_rate{0.3};    // m/s in DESCEND and LAND
  double explore_climb{0.2};   // m/s while searching
  int max_lost{5};             // control steps without an estimate before EXPLORE

  void validate() const;
};

/// Transition table. `lost` means the estimate has been missing for more
/// than max_lost steps. LAND is terminal; EXPLORE only leads to ALIGN.
Phase land_transition(Phase phase, bool have_estimate, bool aligned, bool below_land_altitude, bool lost);

struct LandState {
  Phase phase{Phase::Explore};
  int lost_steps{0};
  PidState roll;
  PidState pitch;
  PidState thrust;
};

struct LandInput {
  std::optional<LoopErrors> errors;  // nullopt without a confident estimate
  double separation{0.0};            // m, measured distance to the target
  double closing_speed{0.0};         // m/s, rate of separation decrease
};

struct LandOutput {
  ControlCommand command;
  Phase phase{Phase::Explore};
};

/// Updates the phase, then runs the lateral PIDs on the centroid error and
/// the thrust PID on the closing-speed error for the phase's set speed
/// (0 in ALIGN, descent_rate in DESCEND and LAND, -explore_climb in
/// EXPLORE).
LandOutput land_policy(LandState& state, const LandInput& input, const PidGains& gains,
                       const LandThresholds& thresholds, double dt);

}  // namespace propforge::track
