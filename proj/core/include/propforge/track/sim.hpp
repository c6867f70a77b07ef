#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "propforge/track/policy.hpp"
#include "propforge/track/tracker.hpp"

namespace propforge::track {

using Vec3 = Eigen::Vector3d;

/// Camera on the observer looking along the vertical axis (up in follow
/// mode, down in land mode). Image u follows world x and v follows world y.
struct SimCamera {
  double focal{320.0};  // px
  int width{640};
  int height{480};
};

enum class TargetMotion { Hover, Wander, Jerk };

struct SimTarget {
  int n_prop{4};
  double arm{0.175};  // m, hub to motor
  double yaw{0.7853981633974483};
  TargetMotion motion{TargetMotion::Wander};
  double wander_speed{0.3};  // m/s, stationary speed scale of the wander
  double land_wander_speed{0.05};  // m/s, same while waiting to be landed on
  double wander_time{2.0};   // s, correlation time
  double jerk_time{5.0};     // s
  double jerk_speed{6.0};    // m/s, lateral speed after the jerk
};

/// Oracle detections with Gaussian pixel noise and independent dropout.
struct SimDetector {
  double pixel_sigma{1.0};
  double dropout{0.1};
  double range_sigma{0.01};  // m, separation sensor noise
};

/// Point mass: commanded acceleration reached through a first-order lag,
/// linear velocity damping.
struct SimVehicle {
  double lag{0.15};      // s
  double damping{0.5};   // 1/s
  double max_accel{6.0};  // m/s^2 per axis
};

/// Lateral random-walk acceleration on the landing observer, scaled by
/// scale / (separation + scale) so it grows as the vehicles close in.
struct SimDisturbance {
  double sigma{1.0};  // m/s^2 per sqrt(s)
  double decay{2.0};  // 1/s
  double scale{0.3};  // m
};

enum class SimMode { Follow, Land };
std::string_view to_string(SimMode mode);
SimMode sim_mode_from_string(std::string_view name);

struct SimScenario {
  SimCamera camera;
  SimTarget target;
  SimDetector detector;
  SimVehicle vehicle;
  SimDisturbance disturbance;
  TrackerParams tracker;
  PidGains follow_gains;
  PidGains land_gains;
  LandThresholds land;
  double control_dt{1.0 / 30.0};
  int substeps{4};
  double follow_duration{30.0};  // s
  double land_timeout{60.0};     // s
  double follow_separation{1.5};  // m
  double land_separation{2.0};    // m
  double initial_offset{0.25};    // m, lateral start offset radius
  double contact_height{0.15};    // m, separation at touchdown
  double pad_radius{0.135};       // m
  double tolerance{0.030};        // m, allowed lateral touchdown error
  int lost_frames{10};            // follow fails after more frames with the target out of view
  /// Multiplies detector noise, dropout, target wander and disturbance.
  double noise{1.0};

  void validate() const;
};

/// Reference scenario; matches config/sim_reference.json.
SimScenario reference_scenario();

nlohmann::json to_json(const SimScenario& s);
/// Strict: every key required, unknown keys rejected.
SimScenario sim_scenario_from_json(const nlohmann::json& j);

struct EpisodeResult {
  bool success{false};
  std::string outcome;        // short reason
  double touchdown_error{-1.0};  // m, land mode; -1 without touchdown
  double final_centroid_error{-1.0};  // px; -1 when no estimate at the end
  double duration{0.0};
  int max_lost_run{0};
  nlohmann::json trajectory;  // array of per-step records
  std::string digest;         // sha256 of the result record
};

EpisodeResult simulate(const SimScenario& scenario, SimMode mode, std::uint64_t seed, bool keep_trajectory = true);

struct BatchResult {
  std::vector<EpisodeResult> episodes;
  std::size_t successes{0};
  double success_rate{0.0};
  std::string digest;  // over the episode digests in order
};

/// Episode i uses seed derive_seed(seed, i); results are in episode order
/// regardless of thread count.
BatchResult simulate_batch(const SimScenario& scenario, SimMode mode, std::size_t episodes, std::uint64_t seed,
                           unsigned threads = 0, bool keep_trajectories = false);

/// time,centroid_error_px,phase rows for one episode.
std::string centroid_error_csv(const EpisodeResult& episode);

}  // namespace propforge::track
