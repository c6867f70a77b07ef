#include "propforge/track/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace propforge::track {

std::vector<int> associate(std::span<const TrackState> tracks, std::span<const Point2> detections, double gate) {
  struct Pair {
    double dist;
    std::size_t t;
    std::size_t d;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double dist = (tracks[t].position() - detections[d]).norm();
      if (dist <= gate) pairs.push_back({dist, t, d});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    const Point2& da = detections[a.d];
    const Point2& db = detections[b.d];
    return std::tie(a.dist, a.t, da.x(), da.y(), a.d) < std::tie(b.dist, b.t, db.x(), db.y(), b.d);
  });
  std::vector<int> result(detections.size(), -1);
  std::vector<bool> used(tracks.size(), false);
  for (const Pair& p : pairs) {
    if (used[p.t] || result[p.d] != -1) continue;
    used[p.t] = true;
    result[p.d] = static_cast<int>(p.t);
  }
  return result;
}

void TrackerParams::validate() const {
  kf.validate();
  if (!(gate_px > 0.0)) throw std::invalid_argument("TrackerParams: gate must be positive");
  if (max_misses < 0) throw std::invalid_argument("TrackerParams: max_misses must be >= 0");
  if (confirm_age < 1) throw std::invalid_argument("TrackerParams: confirm_age must be >= 1");
}

Tracker::Tracker(TrackerParams params) : params_(params) { params_.validate(); }

void Tracker::reset() {
  tracks_.clear();
  next_id_ = 0;
}

void Tracker::step(std::span<const Point2> detections, double dt) {
  if (dt > 0.0) {
    for (auto& t : tracks_) t = kf_predict(t, dt, params_.kf);
  }
  const auto match = associate(tracks_, detections, params_.gate_px);
  std::vector<bool> updated(tracks_.size(), false);
  for (std::size_t d = 0; d < detections.size(); ++d) {
    const int t = match[d];
    if (t < 0) continue;
    auto& tr = tracks_[static_cast<std::size_t>(t)];
    tr = kf_update(tr, detections[d], params_.kf);
    ++tr.age;
    tr.misses = 0;
    updated[static_cast<std::size_t>(t)] = true;
  }
  for (std::size_t t = 0; t < updated.size(); ++t) {
    if (!updated[t]) ++tracks_[t].misses;
  }
  std::erase_if(tracks_, [&](const TrackState& t) { return t.misses > params_.max_misses; });
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (match[d] < 0) tracks_.push_back(kf_init(detections[d], params_.kf, next_id_++));
  }
}

std::vector<TrackState> Tracker::confident_tracks() const {
  std::vector<TrackState> out;
  for (const auto& t : tracks_) {
    if (t.age >= params_.confirm_age) out.push_back(t);
  }
  return out;
}

std::vector<Point2> order_by_angle(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  if (pts.empty()) return pts;
  Point2 mean = Point2::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Point2& a, const Point2& b) {
    const Point2 da = a - mean;
    const Point2 db = b - mean;
    return std::make_tuple(std::atan2(da.y(), da.x()), da.squaredNorm(), a.x(), a.y()) <
           std::make_tuple(std::atan2(db.y(), db.x()), db.squaredNorm(), b.x(), b.y());
  });
  return pts;
}

double polygon_area(std::span<const Point2> points) {
  if (points.size() < 3) return 0.0;
  const auto pts = order_by_angle(points);
  double twice = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % pts.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * std::abs(twice);
}

Point2 polygon_centroid(std::span<const Point2> points) {
  if (points.empty()) throw std::invalid_argument("polygon_centroid: no points");
  Point2 mean = Point2::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  if (points.size() < 3) return mean;
  const auto pts = order_by_angle(points);
  // relative to the mean for numerical stability
  double twice = 0.0;
  Point2 acc = Point2::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 a = pts[i] - mean;
    const Point2 b = pts[(i + 1) % pts.size()] - mean;
    const double cross = a.x() * b.y() - b.x() * a.y();
    twice += cross;
    acc += (a + b) * cross;
  }
  if (std::abs(twice) < 1e-12) return mean;
  return mean + acc / (3.0 * twice);
}

std::optional<DroneEstimate> drone_estimate(std::span<const TrackState> tracks, int min_age) {
  std::vector<Point2> pts;
  for (const auto& t : tracks) {
    if (t.age >= min_age) pts.push_back(t.position());
  }
  if (pts.empty()) return std::nullopt;
  DroneEstimate e;
  e.n_tracks = static_cast<int>(pts.size());
  e.centroid = polygon_centroid(pts);
  if (pts.size() >= 3) e.area = polygon_area(pts);
  return e;
}

}  // namespace propforge::track
