#pragma once

#include <Eigen/Core>

#include "propforge/geometry/propeller_model.hpp"

namespace propforge::geometry {

using Homography = Eigen::Matrix3d;

/// Pinhole camera: x = K [R, T] X.
struct CameraRig {
  double focal{500.0};  // px
  double cx{320.0};
  double cy{240.0};
  Eigen::Matrix3d rotation{Eigen::Matrix3d::Identity()};
  Eigen::Vector3d translation{Eigen::Vector3d::Zero()};
  int width{640};
  int height{480};

  void validate() const;
  Eigen::Matrix3d intrinsics() const;
};

/// Throws std::domain_error when the point is not in front of the camera.
Point2 project(const CameraRig& rig, const Point3& world);

/// Rig on the +X (shaft) axis at `distance`, looking back at the origin, with
/// world +Z mapped to image up.
CameraRig shaft_aligned_rig(double distance, double focal, int width, int height);

/// Homography that maps plane coordinates (px, origin at the propeller hub)
/// to image pixels, for a plane rolled about the camera x axis and pitched
/// about the camera y axis, then viewed by a camera with focal length
/// `focal` at depth `focal` (unit magnification at the hub). The hub lands
/// on `center`.
Homography view_homography(const Point2& center, double roll, double pitch, double focal);

Homography translation_homography(double dx, double dy);

/// Applies H to a 2D point. Throws std::domain_error if the point maps to
/// (or behind) the line at infinity.
Point2 apply_homography(const Homography& h, const Point2& p);

}  // namespace propforge::geometry
