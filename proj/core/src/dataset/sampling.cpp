#include "propforge/dataset/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace propforge::dataset {

double ParamAxis::draw(Rng& rng) const {
  if (!choices.empty()) {
    return choices[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(choices.size()) - 1))];
  }
  const double u = rng.uniform();
  return lo == hi ? lo : lo + (hi - lo) * u;
}

void ParamAxis::validate(const char* name) const {
  if (choices.empty() && !(lo <= hi)) throw std::invalid_argument(std::string("sampling axis ") + name + ": lo > hi");
}

void SamplingRanges::validate() const {
  n_blades.validate("n_blades");
  r_px.validate("r_px");
  rpm.validate("rpm");
  roll_deg.validate("roll_deg");
  pitch_deg.validate("pitch_deg");
  p_noise.validate("p_noise");
  p_miss.validate("p_miss");
  const auto check_bounds = [](const ParamAxis& a, double lo, double hi, const char* name) {
    const auto ok = [&](double v) { return v >= lo && v <= hi; };
    bool good = a.choices.empty() ? ok(a.lo) && ok(a.hi) : std::all_of(a.choices.begin(), a.choices.end(), ok);
    if (!good) throw std::invalid_argument(std::string("sampling axis ") + name + " out of bounds");
  };
  check_bounds(n_blades, 2, 6, "n_blades");
  check_bounds(r_px, 1.0, 1e4, "r_px");
  check_bounds(rpm, 0.0, 1e6, "rpm");
  check_bounds(roll_deg, -80.0, 80.0, "roll_deg");
  check_bounds(pitch_deg, -80.0, 80.0, "pitch_deg");
  check_bounds(p_noise, 0.0, 1.0, "p_noise");
  check_bounds(p_miss, 0.0, 1.0, "p_miss");
  if (!(tau_mean > 0.0) || !(tau_std >= 0.0)) throw std::invalid_argument("sampling: invalid tau distribution");
  if (presets.empty()) throw std::invalid_argument("sampling: no shape presets");
}

PropConfig sample_propeller_config(Rng& rng, const SamplingRanges& ranges) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  PropConfig c;
  c.n_blades = static_cast<int>(std::lround(ranges.n_blades.draw(rng)));
  c.r_px = ranges.r_px.draw(rng);
  c.rpm = ranges.rpm.draw(rng);
  c.theta_hb = rng.uniform(0.0, 2.0 * std::numbers::pi);
  c.color = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  c.roll = ranges.roll_deg.draw(rng) * kDeg;
  c.pitch = ranges.pitch_deg.draw(rng) * kDeg;
  c.tau = std::max(kMinTau, rng.normal(ranges.tau_mean, ranges.tau_std));
  c.p_miss = ranges.p_miss.draw(rng);
  c.shape = ranges.presets[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(ranges.presets.size()) - 1))];
  return c;
}

}  // namespace propforge::dataset
