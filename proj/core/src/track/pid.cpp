#include "propforge/track/pid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace propforge::track {

void PidAxisGains::validate() const {
  if (!(kp >= 0.0 && ki >= 0.0 && kd >= 0.0)) throw std::invalid_argument("PID gains must be non-negative");
  if (!(integral_limit >= 0.0 && std::isfinite(integral_limit)) || !(output_limit >= 0.0 && std::isfinite(output_limit))) {
    throw std::invalid_argument("PID clamps must be finite and non-negative");
  }
}

void PidGains::validate() const {
  roll.validate();
  pitch.validate();
  thrust.validate();
}

double pid_step(const PidAxisGains& g, PidState& s, double error, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pid_step: dt must be positive");
  s.integral = std::clamp(s.integral + error * dt, -g.integral_limit, g.integral_limit);
  const double derivative = s.has_prev ? (error - s.prev_error) / dt : 0.0;
  s.prev_error = error;
  s.has_prev = true;
  const double u = g.kp * error + g.ki * s.integral + g.kd * derivative;
  return std::clamp(u, -g.output_limit, g.output_limit);
}

}  // namespace propforge::track
