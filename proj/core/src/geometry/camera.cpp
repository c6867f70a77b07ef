#include "propforge/geometry/camera.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>

namespace propforge::geometry {

void CameraRig::validate() const {
  if (!(focal > 0.0)) throw std::invalid_argument("CameraRig: focal length must be positive");
  const Eigen::Matrix3d should_be_identity = rotation * rotation.transpose();
  if (!should_be_identity.isApprox(Eigen::Matrix3d::Identity(), 1e-9) ||
      std::abs(rotation.determinant() - 1.0) > 1e-9) {
    throw std::invalid_argument("CameraRig: rotation must be orthonormal with det +1");
  }
}

Eigen::Matrix3d CameraRig::intrinsics() const {
  Eigen::Matrix3d k;
  k << focal, 0.0, cx, 0.0, focal, cy, 0.0, 0.0, 1.0;
  return k;
}

Point2 project(const CameraRig& rig, const Point3& world) {
  const Eigen::Vector3d cam = rig.rotation * world + rig.translation;
  if (!(cam.z() > 0.0)) throw std::domain_error("project: point is behind the camera");
  const Eigen::Vector3d h = rig.intrinsics() * cam;
  return {h.x() / h.z(), h.y() / h.z()};
}

CameraRig shaft_aligned_rig(double distance, double focal, int width, int height) {
  CameraRig rig;
  rig.focal = focal;
  rig.width = width;
  rig.height = height;
  rig.cx = 0.5 * width;
  rig.cy = 0.5 * height;
  // camera x = world Y, camera y = -world Z, camera z = -world X
  rig.rotation << 0.0, 1.0, 0.0,
                  0.0, 0.0, -1.0,
                  -1.0, 0.0, 0.0;
  rig.translation = Eigen::Vector3d(0.0, 0.0, distance);
  return rig;
}

Homography view_homography(const Point2& center, double roll, double pitch, double focal) {
  const Eigen::Matrix3d r =
      (Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) * Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
          .toRotationMatrix();
  Eigen::Matrix3d k;
  k << focal, 0.0, center.x(), 0.0, focal, center.y(), 0.0, 0.0, 1.0;
  Eigen::Matrix3d plane;
  plane.col(0) = r.col(0);
  plane.col(1) = r.col(1);
  plane.col(2) = Eigen::Vector3d(0.0, 0.0, focal);
  Homography h = k * plane;
  return h / h(2, 2);
}

Homography translation_homography(double dx, double dy) {
  Homography h = Homography::Identity();
  h(0, 2) = dx;
  h(1, 2) = dy;
  return h;
}

Point2 apply_homography(const Homography& h, const Point2& p) {
  const Eigen::Vector3d q = h * Eigen::Vector3d(p.x(), p.y(), 1.0);
  if (!(q.z() > 1e-12)) throw std::domain_error("apply_homography: point maps beyond the horizon");
  return {q.x() / q.z(), q.y() / q.z()};
}

}  // namespace propforge::geometry
