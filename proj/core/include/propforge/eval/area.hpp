#pragma once

#include <string>
#include <vector>

namespace propforge::eval {

/// Multirotor geometry for the propeller/fiducial visible-area comparison.
/// Lengths in mm.
struct DroneGeometry {
  std::string name;
  double S{0.0};    // diagonal motor-to-motor length
  int n_prop{4};
  double r{0.0};    // propeller radius
  double r_m{0.0};  // motor radius

  /// Throws std::invalid_argument unless 0 <= r_m < r and 2 r < S.
  void validate() const;
  /// 2 asin(r_m / r).
  double gamma() const;
  /// Radius of the free circle at the frame center, S/2 - r.
  double r_c() const;
};

/// Visible area of one propeller disc partly hidden behind its motor:
/// r^2 (pi - gamma/2) - pi r_m^2 / 2 - r_m r cos(gamma/2).
/// Throws std::invalid_argument unless 0 <= r_m < r.
double prop_area(double r, double r_m);

/// 4 N (r^2 (2 pi - gamma) - pi r_m^2 - 2 r_m r cos(gamma/2)) / (S - 2r)^2.
double area_ratio(const DroneGeometry& g);

struct PublishedDrone {
  DroneGeometry geometry;
  double published_ratio{0.0};
};

/// DJI Phantom 4, QAV 210 X and DJI Inspire 2 with their published ratios.
std::vector<PublishedDrone> reference_drones();

/// Parses "S=350,N=4,r=119.4,rm=12" (any order, optional name=...).
DroneGeometry parse_drone(const std::string& text);

}  // namespace propforge::eval
