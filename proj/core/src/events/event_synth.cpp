#include "propforge/events/event_synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "propforge/geometry/raster.hpp"

namespace propforge::events {

void EventCloud::sort_by_time() {
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t_us < b.t_us; });
}

void EventSynthConfig::validate() const {
  if (!(tau_mean > 0.0)) throw std::invalid_argument("EventSynthConfig: tau_mean must be positive");
  if (!(tau_std >= 0.0)) throw std::invalid_argument("EventSynthConfig: tau_std must be non-negative");
  if (!(dt_ms > 0.0 && dt_ms <= 20.0)) throw std::invalid_argument("EventSynthConfig: dt_ms must lie in (0, 20]");
  if (!(rpm >= 0.0)) throw std::invalid_argument("EventSynthConfig: rpm must be non-negative");
  if (micro_steps < 1) throw std::invalid_argument("EventSynthConfig: micro_steps must be >= 1");
}

double EventSynthConfig::omega() const { return rpm_to_rad_per_s(rpm); }
double EventSynthConfig::delta_theta() const { return events::delta_theta(rpm, dt_ms); }

double rpm_to_rad_per_s(double rpm) { return rpm * 2.0 * std::numbers::pi / 60.0; }

double delta_theta(double rpm, double dt_ms) { return rpm_to_rad_per_s(rpm) * dt_ms * 1e-3; }

GrayImage render(const Scene& scene, double t_s) {
  if (scene.background.empty()) throw std::invalid_argument("render: empty background");
  GrayImage out = scene.background;
  Mask mask(out.width, out.height, 0);
  for (const PlacedPropeller& p : scene.propellers) {
    const double angle = p.theta_hb + rpm_to_rad_per_s(p.rpm) * t_s;
    const auto contours = geometry::propeller_outline(p.shape, p.n_blades, angle);
    std::fill(mask.data.begin(), mask.data.end(), 0);
    geometry::fill_mask(geometry::warp_contours(contours, p.homography, p.scale), mask);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
      if (mask.data[i]) out.data[i] = p.color;
    }
  }
  return out;
}

std::pair<GrayImage, GrayImage> render_pair(const Scene& scene, double dt_s) {
  return {render(scene, 0.0), render(scene, dt_s)};
}

EventCloud trigger_events(const GrayImage& i_t, const GrayImage& i_dt, double tau, double t_us) {
  if (!i_t.same_shape(i_dt)) throw std::invalid_argument("trigger_events: image sizes differ");
  static const std::array<double, 256> kLog = [] {
    std::array<double, 256> table{};
    for (int v = 0; v < 256; ++v) table[static_cast<std::size_t>(v)] = std::log(static_cast<double>(std::max(v, 1)));
    return table;
  }();
  EventCloud cloud{i_t.width, i_t.height, {}};
  for (int y = 0; y < i_t.height; ++y) {
    for (int x = 0; x < i_t.width; ++x) {
      const double d = kLog[i_t.at(x, y)] - kLog[i_dt.at(x, y)];
      if (std::abs(d) >= tau && d != 0.0) {
        cloud.events.push_back({x, y, t_us, static_cast<std::int8_t>(d > 0.0 ? 1 : -1)});
      }
    }
  }
  return cloud;
}

EventFrame event_frame(const EventCloud& cloud) {
  Image<int> sum(cloud.width, cloud.height, 0);
  for (const Event& e : cloud.events) {
    if (!sum.contains(e.x, e.y)) throw std::out_of_range("event_frame: event outside the frame");
    sum.at(e.x, e.y) += e.polarity;
  }
  EventFrame frame(cloud.width, cloud.height, 0);
  for (std::size_t i = 0; i < sum.data.size(); ++i) {
    frame.data[i] = static_cast<std::int8_t>((sum.data[i] > 0) - (sum.data[i] < 0));
  }
  return frame;
}

EventCloud event_cloud_sweep(const Scene& scene, const EventSynthConfig& config) {
  if (config.micro_steps < 1) throw std::invalid_argument("event_cloud_sweep: micro_steps must be >= 1");
  if (!(config.tau_mean > 0.0)) throw std::invalid_argument("event_cloud_sweep: tau_mean must be positive");
  const int m = config.micro_steps;
  const double dt_s = config.dt_ms * 1e-3;
  EventCloud cloud{scene.background.width, scene.background.height, {}};
  GrayImage prev = render(scene, 0.0);
  for (int j = 0; j < m; ++j) {
    GrayImage next = render(scene, dt_s * (j + 1) / m);
    const double mid_us = config.dt_ms * 1e3 * (j + 0.5) / m;
    EventCloud step = trigger_events(prev, next, config.tau_mean, mid_us);
    cloud.events.insert(cloud.events.end(), step.events.begin(), step.events.end());
    prev = std::move(next);
  }
  cloud.sort_by_time();
  return cloud;
}

void check_ternary(const EventFrame& frame) {
  for (std::int8_t v : frame.data) {
    if (v < -1 || v > 1) throw std::invalid_argument("event frame is not ternary");
  }
}

}  // namespace propforge::events
