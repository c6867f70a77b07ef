#pragma once

#include <cstdint>
#include <vector>

#include "propforge/common/rng.hpp"
#include "propforge/geometry/blade_shape.hpp"

namespace propforge::dataset {

/// A randomized generation parameter: uniform over `choices` when any are
/// given, otherwise uniform on [lo, hi]. lo == hi pins the value.
struct ParamAxis {
  double lo{0.0};
  double hi{0.0};
  std::vector<double> choices;

  static ParamAxis range(double lo, double hi) { return {lo, hi, {}}; }
  static ParamAxis fixed(double v) { return {v, v, {}}; }
  static ParamAxis of(std::vector<double> values) { return {0.0, 0.0, std::move(values)}; }

  double draw(Rng& rng) const;
  void validate(const char* name) const;
};

/// Randomization envelope for one propeller. Angles in degrees.
struct SamplingRanges {
  ParamAxis n_blades{ParamAxis::of({2, 3, 4, 5, 6})};
  ParamAxis r_px{ParamAxis::range(20.0, 60.0)};
  ParamAxis rpm{ParamAxis::range(5000.0, 40000.0)};
  ParamAxis roll_deg{ParamAxis::range(-60.0, 60.0)};
  ParamAxis pitch_deg{ParamAxis::range(-60.0, 60.0)};
  ParamAxis p_noise{ParamAxis::range(0.0, 0.02)};
  ParamAxis p_miss{ParamAxis::range(0.0, 0.6)};
  double tau_mean{0.25};
  double tau_std{0.05};
  std::vector<geometry::ShapePreset> presets{geometry::ShapePreset::Fitted, geometry::ShapePreset::Normal,
                                            geometry::ShapePreset::Bullnose};

  void validate() const;
};

inline constexpr double kMinTau = 0.02;

struct PropConfig {
  int n_blades{2};
  double r_px{40.0};
  double rpm{10000.0};
  double theta_hb{0.0};  // rad
  std::uint8_t color{0};
  double roll{0.0};   // rad
  double pitch{0.0};  // rad
  double tau{0.25};
  double p_miss{0.0};
  geometry::ShapePreset shape{geometry::ShapePreset::Fitted};
};

/// Draws one propeller in a fixed order: blades, r_px, rpm, theta_hb,
/// color, roll, pitch, tau ~ N(tau_mean, tau_std^2) floored at kMinTau,
/// p_miss, shape preset.
PropConfig sample_propeller_config(Rng& rng, const SamplingRanges& ranges = {});

}  // namespace propforge::dataset
