#include "propforge/track/kalman.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace propforge::track {

void KalmanParams::validate() const {
  if (!(sigma_a >= 0.0) || !(meas_sigma >= 0.0) || !(init_pos_sigma >= 0.0) || !(init_vel_sigma >= 0.0)) {
    throw std::invalid_argument("KalmanParams: noise levels must be non-negative");
  }
}

Mat4 process_noise(double dt, double sigma_a) {
  const double q = sigma_a * sigma_a;
  const double a = dt * dt * dt / 3.0 * q;
  const double b = dt * dt / 2.0 * q;
  const double c = dt * q;
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = a;
  m(0, 2) = m(2, 0) = m(1, 3) = m(3, 1) = b;
  m(2, 2) = m(3, 3) = c;
  return m;
}

TrackState kf_init(const Point2& z, const KalmanParams& params, int id) {
  params.validate();
  TrackState t;
  t.x << z.x(), z.y(), 0.0, 0.0;
  t.P = Mat4::Zero();
  t.P(0, 0) = t.P(1, 1) = params.init_pos_sigma * params.init_pos_sigma;
  t.P(2, 2) = t.P(3, 3) = params.init_vel_sigma * params.init_vel_sigma;
  t.id = id;
  t.age = 1;
  return t;
}

TrackState kf_predict(const TrackState& t, double dt, const Mat4& q) {
  if (!(dt > 0.0)) throw std::invalid_argument("kf_predict: dt must be positive");
  Mat4 f = Mat4::Identity();
  f(0, 2) = f(1, 3) = dt;
  TrackState out = t;
  out.x = f * t.x;
  out.P = f * t.P * f.transpose() + q;
  out.P = (0.5 * (out.P + out.P.transpose())).eval();  // eval: transpose aliases the destination
  return out;
}

TrackState kf_predict(const TrackState& t, double dt, const KalmanParams& params) {
  return kf_predict(t, dt, process_noise(dt, params.sigma_a));
}

TrackState kf_update(const TrackState& t, const Point2& z, double meas_var) {
  if (!z.allFinite()) throw std::invalid_argument("kf_update: measurement must be finite");
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = h(1, 1) = 1.0;
  const Eigen::Matrix2d r = meas_var * Eigen::Matrix2d::Identity();
  const Mat4 p = 0.5 * (t.P + t.P.transpose());
  const Eigen::Matrix2d s = h * p * h.transpose() + r;
  const Eigen::Matrix<double, 4, 2> k = p * h.transpose() * s.inverse();
  TrackState out = t;
  out.x = t.x + k * (z - h * t.x);
  const Mat4 a = Mat4::Identity() - k * h;
  out.P = a * p * a.transpose() + k * r * k.transpose();
  out.P = (0.5 * (out.P + out.P.transpose())).eval();  // eval: transpose aliases the destination
  return out;
}

TrackState kf_update(const TrackState& t, const Point2& z, const KalmanParams& params) {
  params.validate();
  return kf_update(t, z, params.meas_sigma * params.meas_sigma);
}

}  // namespace propforge::track
