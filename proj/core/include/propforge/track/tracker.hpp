#pragma once

#include <optional>
#include <span>
#include <vector>

#include "propforge/track/kalman.hpp"

namespace propforge::track {

/// Greedy nearest-neighbour association. Candidate pairs within `gate` px
/// are taken in order of distance; equal distances are broken by track
/// index, then by detection position (x, then y), so the result does not
/// depend on detection order. Returns, per detection, the matched track
/// index or -1.
std::vector<int> associate(std::span<const TrackState> tracks, std::span<const Point2> detections, double gate);

struct TrackerParams {
  KalmanParams kf;
  double gate_px{30.0};
  int max_misses{5};  // a track missing more consecutive updates is dropped
  int confirm_age{2};  // updates before a track counts as confident

  void validate() const;
};

class Tracker {
 public:
  explicit Tracker(TrackerParams params = {});

  /// Predicts every track by dt (skipped when dt <= 0, e.g. on the first
  /// frame), associates, updates matched tracks, spawns tracks for
  /// unmatched detections and prunes stale tracks.
  void step(std::span<const Point2> detections, double dt);

  const std::vector<TrackState>& tracks() const { return tracks_; }
  std::vector<TrackState> confident_tracks() const;
  const TrackerParams& params() const { return params_; }
  void reset();

 private:
  TrackerParams params_;
  std::vector<TrackState> tracks_;
  int next_id_{0};
};

/// Shoelace area of the polygon through `points` ordered by angle about
/// their mean.
double polygon_area(std::span<const Point2> points);
/// Area centroid of the same polygon; falls back to the vertex mean for
/// fewer than 3 points or a degenerate polygon.
Point2 polygon_centroid(std::span<const Point2> points);
/// Points sorted by angle about their mean (ties by distance, then x, y).
std::vector<Point2> order_by_angle(std::span<const Point2> points);

struct DroneEstimate {
  Point2 centroid{0.0, 0.0};
  std::optional<double> area;  // px^2, needs >= 3 tracks
  int n_tracks{0};
};

/// Estimate from tracks with age >= min_age. nullopt when none qualifies.
std::optional<DroneEstimate> drone_estimate(std::span<const TrackState> tracks, int min_age = 1);

}  // namespace propforge::track
