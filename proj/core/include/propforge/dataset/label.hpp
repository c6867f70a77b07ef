#pragma once

#include <span>
#include <vector>

#include "propforge/common/image.hpp"
#include "propforge/geometry/propeller_model.hpp"

namespace propforge::dataset {

using geometry::Point2;

/// Gaussian heatmap labels. sigma = sigma_ratio * r_px per propeller.
struct LabelConfig {
  double sigma_ratio{0.25};
  double support_sigmas{3.0};

  void validate() const;
};

struct LabelPeak {
  Point2 center;
  double r_px{0.0};
  double sigma{0.0};
};

/// Heatmap in [0, 1]: at each pixel the largest exp(-d^2 / (2 sigma^2)) over
/// peaks, where d is the distance to the peak center; a peak contributes
/// nothing beyond support_sigmas * sigma + r_px. Throws std::out_of_range
/// for a center outside the image and std::invalid_argument for sigma <= 0.
Heatmap make_label(int width, int height, std::span<const LabelPeak> peaks, double support_sigmas = 3.0);

/// Convenience overload with sigma taken from the config.
Heatmap make_label(int width, int height, std::span<const Point2> centers, std::span<const double> radii,
                   const LabelConfig& config);

/// floor(p * 255 - 0.5), clamped to [0, 255]. Throws std::invalid_argument
/// for values outside [0, 1].
GrayImage quantize_label(const Heatmap& heatmap);

/// Maps each quantized level back to the middle of the heatmap interval
/// that produces it: 0 -> 0, q -> (q + 1) / 255 otherwise (254 -> 1).
Heatmap dequantize_label(const GrayImage& img);

}  // namespace propforge::dataset
