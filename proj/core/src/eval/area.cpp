#include "propforge/eval/area.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace propforge::eval {

using std::numbers::pi;

namespace {

void check_radii(double r, double r_m) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("propeller radius must be positive");
  if (!(r_m >= 0.0)) throw std::invalid_argument("motor radius must be non-negative");
  if (!(r_m < r)) throw std::invalid_argument("motor radius must be smaller than the propeller radius");
}

}  // namespace

void DroneGeometry::validate() const {
  check_radii(r, r_m);
  if (n_prop < 1) throw std::invalid_argument("drone needs at least one propeller");
  if (!(S > 2.0 * r)) throw std::invalid_argument("drone size S must exceed 2r");
}

double DroneGeometry::gamma() const { return 2.0 * std::asin(r_m / r); }

double DroneGeometry::r_c() const { return 0.5 * S - r; }

double prop_area(double r, double r_m) {
  check_radii(r, r_m);
  const double gamma = 2.0 * std::asin(r_m / r);
  return r * r * (pi - gamma / 2.0) - pi * r_m * r_m / 2.0 - r_m * r * std::cos(gamma / 2.0);
}

double area_ratio(const DroneGeometry& g) {
  g.validate();
  const double gamma = g.gamma();
  const double visible =
      g.r * g.r * (2.0 * pi - gamma) - pi * g.r_m * g.r_m - 2.0 * g.r_m * g.r * std::cos(gamma / 2.0);
  const double side = g.S - 2.0 * g.r;
  return 4.0 * g.n_prop * visible / (side * side);
}

std::vector<PublishedDrone> reference_drones() {
  return {
      {{"DJI Phantom 4", 350.0, 4, 119.4, 12.0}, 109.8},
      {{"QAV 210 X", 210.0, 4, 63.5, 14.0}, 51.2},
      {{"DJI Inspire 2", 603.0, 4, 190.0, 18.5}, 69.2},
  };
}

DroneGeometry parse_drone(const std::string& text) {
  DroneGeometry g;
  g.name = "custom";
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("drone spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (!seen.insert(key).second) throw std::invalid_argument("drone spec: duplicate key " + key);
    if (key == "name") {
      g.name = value;
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) throw std::invalid_argument("drone spec: bad number for " + key);
    if (key == "S") {
      g.S = v;
    } else if (key == "N") {
      if (v != std::floor(v)) throw std::invalid_argument("drone spec: N must be an integer");
      g.n_prop = static_cast<int>(v);
    } else if (key == "r") {
      g.r = v;
    } else if (key == "rm") {
      g.r_m = v;
    } else {
      throw std::invalid_argument("drone spec: unknown key " + key);
    }
  }
  for (const char* k : {"S", "N", "r", "rm"}) {
    if (!seen.count(k)) throw std::invalid_argument(std::string("drone spec: missing ") + k);
  }
  g.validate();
  return g;
}

}  // namespace propforge::eval
