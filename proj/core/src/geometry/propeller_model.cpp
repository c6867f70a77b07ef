#include "propforge/geometry/propeller_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace propforge::geometry {

using std::numbers::pi;

double ChordProfile::at(double rho, double hub_rho) const {
  const double q = std::clamp(std::max(rho, hub_rho), 0.0, 1.0);
  const double s = 2.0 * q - 1.0;
  const double elliptic = std::sqrt(std::max(0.0, 1.0 - s * s));
  return max_chord * std::max(elliptic, tip_fraction);
}

void PropellerSpec::validate() const {
  if (!(pitch > 0.0)) throw std::invalid_argument("PropellerSpec: pitch must be positive");
  if (!(radius > 0.0)) throw std::invalid_argument("PropellerSpec: radius must be positive");
  if (!(hub_radius >= 0.0 && hub_radius < radius)) {
    throw std::invalid_argument("PropellerSpec: hub_radius must lie in [0, radius)");
  }
  if (n_blades < 2 || n_blades > 6) throw std::invalid_argument("PropellerSpec: n_blades must be in [2, 6]");
  if (!(chord.max_chord >= 0.0)) throw std::invalid_argument("PropellerSpec: chord must be non-negative");
}

double PropellerSpec::pitch_angle(double r_station) const {
  return std::atan(pitch / (2.0 * pi * r_station));
}

double PropellerSpec::chord_at(double r_station) const {
  return chord.at(r_station / radius, hub_radius / radius);
}

void BladeSection::validate() const {
  if (!(y_t >= 0.0)) throw std::invalid_argument("BladeSection: y_t must be non-negative");
  if (!(std::abs(psi) < pi / 2.0)) throw std::invalid_argument("BladeSection: psi must lie in (-pi/2, pi/2)");
}

SurfaceOffset surface_offset(const BladeSection& section, double chord, Surface surface) {
  const double sign = surface == Surface::Top ? 1.0 : -1.0;
  return {section.x_c * chord - sign * section.y_t * std::sin(section.psi),
          section.y_c + sign * section.y_t * std::cos(section.psi)};
}

Point3 helicoidal_point(double pitch, double radius, double phi) {
  return {pitch * phi / (2.0 * pi), radius * std::sin(phi), radius * std::cos(phi)};
}

namespace {

void check_station(const PropellerSpec& spec, double r_station) {
  if (!(r_station > 0.0) || r_station > spec.radius) {
    throw std::out_of_range("radial station must lie in (0, radius]");
  }
}

double axial_skew_offset(const PropellerSpec& spec) {
  return spec.rake + spec.pitch * spec.skew / (2.0 * pi);
}

}  // namespace

Point3 midchord_point(const PropellerSpec& spec, double r_station, double phi) {
  check_station(spec, r_station);
  const double a = phi - spec.skew;
  return {-axial_skew_offset(spec), -r_station * std::sin(a), r_station * std::cos(a)};
}

EdgePair edge_points(const PropellerSpec& spec, double r_station, double phi) {
  check_station(spec, r_station);
  const double theta = spec.pitch_angle(r_station);
  const double c = spec.chord_at(r_station);
  // 90 c cos(theta) / (pi r) degrees == c cos(theta) / (2 r) radians.
  const double half_arc = c * std::cos(theta) / (2.0 * r_station);
  const double half_axial = 0.5 * c * std::sin(theta);
  const double x0 = -axial_skew_offset(spec);
  const double a = phi - spec.skew;
  return {
      {x0 + half_axial, -r_station * std::sin(a + half_arc), r_station * std::cos(a + half_arc)},
      {x0 - half_axial, -r_station * std::sin(a - half_arc), r_station * std::cos(a - half_arc)},
  };
}

Point3 blade_point_local(const PropellerSpec& spec, const BladeSection& section, Surface surface,
                         double r_station) {
  check_station(spec, r_station);
  section.validate();
  const double theta = spec.pitch_angle(r_station);
  const double c = spec.chord_at(r_station);
  const SurfaceOffset off = surface_offset(section, c, surface);
  const double from_mid = 0.5 * c - off.chordal;
  const double x = -axial_skew_offset(spec) + from_mid * std::sin(theta) + off.ordinate * std::cos(theta);
  // 180 (...) / (pi r) degrees == (...) / r radians.
  const double angle =
      spec.skew - (from_mid * std::cos(theta) - off.ordinate * std::sin(theta)) / r_station;
  return {x, r_station * std::sin(angle), r_station * std::cos(angle)};
}

Point3 to_world(const Point3& x, double phi_blade) {
  const double c = std::cos(phi_blade);
  const double s = std::sin(phi_blade);
  return {x.x(), c * x.y() - s * x.z(), s * x.y() + c * x.z()};
}

}  // namespace propforge::geometry
