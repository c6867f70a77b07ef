#pragma once

#include <Eigen/Core>

#include "propforge/geometry/propeller_model.hpp"

namespace propforge::track {

using geometry::Point2;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Constant-velocity image-plane filter settings.
struct KalmanParams {
  double sigma_a{50.0};          // px/s^2, white acceleration
  double meas_sigma{2.0};        // px
  double init_pos_sigma{2.0};    // px
  double init_vel_sigma{200.0};  // px/s

  void validate() const;
};

/// x = [x, y, vx, vy] in px and px/s.
struct TrackState {
  Vec4 x{Vec4::Zero()};
  Mat4 P{Mat4::Identity()};
  int id{0};
  int age{0};     // updates received
  int misses{0};  // consecutive predictions without an update

  Point2 position() const { return x.head<2>(); }
  Point2 velocity() const { return x.tail<2>(); }
};

/// Discretized white-acceleration noise for one step of length dt.
Mat4 process_noise(double dt, double sigma_a);

TrackState kf_init(const Point2& z, const KalmanParams& params, int id = 0);

/// Constant-velocity propagation. Throws std::invalid_argument for dt <= 0.
TrackState kf_predict(const TrackState& t, double dt, const KalmanParams& params);
TrackState kf_predict(const TrackState& t, double dt, const Mat4& q);

/// Position measurement update in Joseph form; the covariance is
/// symmetrized before and after. Throws std::invalid_argument for a
/// non-finite measurement.
TrackState kf_update(const TrackState& t, const Point2& z, const KalmanParams& params);
TrackState kf_update(const TrackState& t, const Point2& z, double meas_var);

}  // namespace propforge::track
