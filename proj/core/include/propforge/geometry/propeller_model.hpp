#pragma once

#include <Eigen/Core>

namespace propforge::geometry {

using Point2 = Eigen::Vector2d;
using Point3 = Eigen::Vector3d;

/// Chord length as a function of normalized radial station rho in [0, 1].
/// Elliptic taper max_chord * sqrt(1 - (2 rho - 1)^2), held constant inside
/// the hub and floored at tip_fraction * max_chord (a blunt "bullnose" tip
/// when tip_fraction > 0).
struct ChordProfile {
  double max_chord{16.0};  // mm
  double tip_fraction{0.0};

  double at(double rho, double hub_rho) const;
};

/// Helicoidal propeller. Lengths in mm, angles in radians.
struct PropellerSpec {
  double pitch{114.3};
  double radius{63.5};
  double rake{0.0};
  double skew{0.0};
  ChordProfile chord{};
  int n_blades{2};
  double hub_radius{8.0};

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
  /// atan(pitch / (2 pi r_station)).
  double pitch_angle(double r_station) const;
  double chord_at(double r_station) const;
};

/// One point of an aerofoil section. x_c is the non-dimensional chordal
/// position (0 = leading edge, 1 = trailing edge); y_c, y_t in mm.
struct BladeSection {
  double x_c{0.5};
  double y_c{0.0};
  double y_t{0.0};
  double psi{0.0};  // camber-line slope

  void validate() const;
};

/// Top takes the upper sign of each +/- pair below.
enum class Surface { Top, Bottom };

struct SurfaceOffset {
  double chordal{0.0};  // mm from the leading edge
  double ordinate{0.0};  // y_u, mm
};

/// x_T/B = x_c*c -/+ y_t sin(psi), y_u = y_c +/- y_t cos(psi).
SurfaceOffset surface_offset(const BladeSection& section, double chord, Surface surface);

struct EdgePair {
  Point3 leading;
  Point3 trailing;
};

/// Point on the surface swept by a line rotating about X while advancing
/// one pitch per turn.
Point3 helicoidal_point(double pitch, double radius, double phi);

/// Mid-chord locus of a right-handed blade at station r_station.
Point3 midchord_point(const PropellerSpec& spec, double r_station, double phi);

/// Leading (+ angular branch) and trailing (- branch) edge points. Both
/// edges sit on the pitch helix through the mid-chord point, so the axial
/// offset +/-(c/2) sin(theta) carries the same branch sign as the angle.
EdgePair edge_points(const PropellerSpec& spec, double r_station, double phi);

/// Aerofoil surface point with the chord mid point as local origin (blade
/// at phi = 0).
Point3 blade_point_local(const PropellerSpec& spec, const BladeSection& section, Surface surface,
                         double r_station);

/// Rotation about the X (shaft) axis.
Point3 to_world(const Point3& x, double phi_blade);

}  // namespace propforge::geometry
