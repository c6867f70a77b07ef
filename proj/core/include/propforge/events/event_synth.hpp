#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "propforge/common/image.hpp"
#include "propforge/geometry/blade_shape.hpp"
#include "propforge/geometry/camera.hpp"

namespace propforge::events {

/// Per-pixel ternary polarity image, values in {-1, 0, +1}.
using EventFrame = Image<std::int8_t>;

struct Event {
  int x{0};
  int y{0};
  double t_us{0.0};
  std::int8_t polarity{0};

  bool operator==(const Event&) const = default;
};

struct EventCloud {
  int width{0};
  int height{0};
  std::vector<Event> events;

  /// Stable sort by timestamp.
  void sort_by_time();
  bool empty() const { return events.empty(); }
};

struct EventSynthConfig {
  double tau_mean{0.25};
  double tau_std{0.05};
  double dt_ms{5.0};
  double rpm{10000.0};
  int micro_steps{1};
  std::uint64_t seed{0};

  void validate() const;
  double omega() const;        // rad/s
  double delta_theta() const;  // rad turned during dt
};

double rpm_to_rad_per_s(double rpm);
/// Blade rotation during an integration window: omega * dt.
double delta_theta(double rpm, double dt_ms);

/// One propeller placed in a scene. Contours are in shape units and are
/// mapped to pixels by H(scale * p).
struct PlacedPropeller {
  geometry::SplineBladeShape shape;
  int n_blades{2};
  double theta_hb{0.0};
  double rpm{10000.0};
  geometry::Homography homography{geometry::Homography::Identity()};
  double scale{40.0};
  std::uint8_t color{30};
};

struct Scene {
  GrayImage background;
  std::vector<PlacedPropeller> propellers;
};

/// Scene at time t: every propeller turned by theta_hb + omega t over the
/// static background.
GrayImage render(const Scene& scene, double t_s);

/// (I_t, I_{t+dt}) sharing background and colors.
std::pair<GrayImage, GrayImage> render_pair(const Scene& scene, double dt_s);

/// Pixel x fires when |log I_t(x) - log I_dt(x)| >= tau, with polarity
/// sgn(log I_t(x) - log I_dt(x)). Intensities are clamped to [1, 255] before
/// the log. Every event gets timestamp t_us. Throws std::invalid_argument on
/// a size mismatch.
EventCloud trigger_events(const GrayImage& i_t, const GrayImage& i_dt, double tau, double t_us = 0.0);

/// Sign of the per-pixel mean polarity; pixels without events are 0.
EventFrame event_frame(const EventCloud& cloud);

/// Spatio-temporal cloud: dt is split into micro_steps sub-intervals, each
/// rendered as a pair and triggered at threshold tau_mean; events carry the
/// sub-interval's mid time. Throws std::invalid_argument when micro_steps < 1.
EventCloud event_cloud_sweep(const Scene& scene, const EventSynthConfig& config);

/// Throws std::invalid_argument if any value is outside {-1, 0, +1}.
void check_ternary(const EventFrame& frame);

}  // namespace propforge::events
