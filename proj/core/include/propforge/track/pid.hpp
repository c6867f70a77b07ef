#pragma once

namespace propforge::track {

struct PidAxisGains {
  double kp{0.0};
  double ki{0.0};
  double kd{0.0};
  double integral_limit{1e9};  // clamp on the error integral
  double output_limit{1e9};

  /// Throws std::invalid_argument for negative gains or non-finite,
  /// negative clamps.
  void validate() const;
};

struct PidState {
  double integral{0.0};
  double prev_error{0.0};
  bool has_prev{false};
};

/// u = kp e + ki I + kd (e - e_prev) / dt with I clamped to
/// +/- integral_limit and u to +/- output_limit. The derivative term is
/// zero on the first step. Throws std::invalid_argument for dt <= 0.
double pid_step(const PidAxisGains& gains, PidState& state, double error, double dt);

/// Roll and pitch act on the image-plane centroid error, thrust on the
/// area error (follow) or vertical speed error (land).
struct PidGains {
  PidAxisGains roll;
  PidAxisGains pitch;
  PidAxisGains thrust;

  void validate() const;
};

}  // namespace propforge::track
