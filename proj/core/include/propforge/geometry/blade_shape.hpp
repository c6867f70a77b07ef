#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "propforge/geometry/propeller_model.hpp"

namespace propforge::geometry {

using ClosedContour = std::vector<Point2>;

/// Image-plane approximation of one blade by four chained cubic B-splines
/// over uniform knots. Coordinates are blade-local and normalized so the
/// propeller radius is 1: hub center at the origin, blade along +y.
/// Order around the contour: hub arc (trailing root to leading root), top
/// (leading edge, root to tip), tip, bottom (trailing edge, tip to root).
struct SplineBladeShape {
  static constexpr int kDegree = 3;
  static constexpr int kDefaultSamples = 64;

  std::array<std::vector<Point2>, 4> splines;
  double hub_radius{0.12};

  /// Throws std::invalid_argument unless every spline has >= 4 control
  /// points and consecutive spline endpoints meet within 1e-6.
  void validate() const;
  /// Largest gap between the end of one spline and the start of the next.
  double max_endpoint_gap() const;
};

/// Fits a shape to the projected leading/trailing edges of `spec`, viewed
/// along the shaft. Each spline is clamped at its end points (tripled
/// control points) and has `free_points` interior control points chosen by
/// least squares against densely sampled model points.
SplineBladeShape fit_blade_shape(const PropellerSpec& spec, int free_points = 4);

/// Reference propeller used for the fitted default shape.
PropellerSpec default_propeller_spec();

enum class ShapePreset { Fitted, Normal, Bullnose };

std::string_view to_string(ShapePreset preset);
ShapePreset shape_preset_from_string(std::string_view name);

/// Presets are hand-tuned model parameter sets sent through fit_blade_shape
/// and cached; calls are cheap after the first one per preset.
const SplineBladeShape& preset_shape(ShapePreset preset);

/// Closed contour of one blade rotated by theta_hb about the hub center.
ClosedContour blade_outline(const SplineBladeShape& shape, double theta_hb,
                            int samples_per_spline = SplineBladeShape::kDefaultSamples);

/// Number of vertices used for the hub disc; divisible by every blade count
/// in [2, 6] so the disc shares the outline's rotational symmetry.
inline constexpr int kHubVertices = 360;

/// n_blades blade contours at 2 pi / n_blades spacing, followed by the hub
/// disc.
std::vector<ClosedContour> propeller_outline(const SplineBladeShape& shape, int n_blades, double theta_hb,
                                             int samples_per_spline = SplineBladeShape::kDefaultSamples);

/// Rotates every point of the outline set about the origin.
std::vector<ClosedContour> rotate_contours(const std::vector<ClosedContour>& contours, double angle);

/// Signed shoelace area (positive for counter-clockwise in a y-up frame).
double signed_area(const ClosedContour& contour);

}  // namespace propforge::geometry
