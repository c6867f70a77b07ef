#pragma once

#include <optional>
#include <span>
#include <vector>

#include "propforge/common/image.hpp"
#include "propforge/geometry/propeller_model.hpp"

namespace propforge::eval {

using geometry::Point2;

/// Axis-aligned box in pixel coordinates, x0 <= x1, y0 <= y1.
struct BBox {
  double x0{0.0};
  double y0{0.0};
  double x1{0.0};
  double y1{0.0};

  static BBox centered(const Point2& center, double side);
  double area() const;
  BBox clipped(int width, int height) const;
  bool operator==(const BBox&) const = default;
};

struct Detection {
  Point2 center{0.0, 0.0};
  BBox box;
  double confidence{0.0};
};

/// Ground-truth box of side 2 r_px around the propeller center.
struct GroundTruth {
  Point2 center{0.0, 0.0};
  double r_px{0.0};

  BBox box() const { return BBox::centered(center, 2.0 * r_px); }
};

/// Intersection over union; 0 when either box has zero area.
double iou(const BBox& a, const BBox& b);

/// IoU(G, D) >= 0.5.
inline constexpr double kSuccessIou = 0.5;
bool success(const GroundTruth& g, const Detection& d);

/// Statistics of one 8-connected component of pixels >= threshold.
struct Component {
  std::size_t pixels{0};
  Point2 weighted_centroid{0.0, 0.0};
  double peak{0.0};
  double gyration2{0.0};  // unweighted squared radius of gyration, px^2
};

/// Components in order of their first pixel in row-major order.
std::vector<Component> find_components(const Heatmap& heatmap, double threshold);

struct DetectorParams {
  double threshold{0.5};
  /// When set, every box gets side 2 * hint.
  std::optional<double> r_px_hint;
  /// sigma / r_px used by the labels the heatmap imitates; converts blob
  /// size into propeller radius.
  double sigma_ratio{0.25};
  double min_r_px{20.0};
  double max_r_px{120.0};
};

/// Thresholds at params.threshold, splits 8-connected components, and
/// reports one detection per component: value-weighted centroid,
/// confidence = component max, radius from the component's radius of
/// gyration under the Gaussian label model (or the hint), clipped to
/// [min_r_px, max_r_px], box clipped to the image. Output is ordered by
/// the component's first pixel in row-major order.
std::vector<Detection> heatmap_to_detections(const Heatmap& heatmap, const DetectorParams& params = {});

/// Greedy one-to-one matching by descending IoU (ties: lower ground-truth
/// index, then lower detection index). Returns per ground truth whether
/// it was matched with IoU >= 0.5.
std::vector<bool> match_detections(std::span<const GroundTruth> truths, std::span<const Detection> detections);

/// Mean success. Throws std::invalid_argument for an empty list.
double detection_rate(std::span<const bool> results);
double detection_rate(const std::vector<bool>& results);

/// Probability of detecting at least one of eta propellers: 1 - (1 - DR)^eta.
/// Throws std::invalid_argument for DR outside [0, 1] or eta < 1.
double drone_dr(double dr, int eta);

}  // namespace propforge::eval
