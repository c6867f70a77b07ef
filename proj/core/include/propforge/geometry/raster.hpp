#pragma once

#include <cstdint>
#include <vector>

#include "propforge/common/image.hpp"
#include "propforge/geometry/blade_shape.hpp"
#include "propforge/geometry/camera.hpp"

namespace propforge::geometry {

struct PixelBounds {
  int x0{0};
  int y0{0};
  int x1{-1};  // inclusive
  int y1{-1};

  bool empty() const { return x1 < x0 || y1 < y0; }
  int width() const { return empty() ? 0 : x1 - x0 + 1; }
  int height() const { return empty() ? 0 : y1 - y0 + 1; }
};

/// Maps contour vertices to pixels: p -> H (scale * p).
std::vector<ClosedContour> warp_contours(const std::vector<ClosedContour>& contours, const Homography& h,
                                         double scale);

/// Integer bounding box of warped contours, grown by `margin` pixels.
PixelBounds warped_bounds(const std::vector<ClosedContour>& pixel_contours, int margin = 1);

/// Scanline fill of pixel-space contours into a mask (value 1 inside). Each
/// contour is filled with the even-odd rule and the results are unioned.
/// A pixel is inside when its center (x, y) satisfies x_a <= x < x_b for a
/// crossing pair on row y.
void fill_mask(const std::vector<ClosedContour>& pixel_contours, Mask& mask);

/// Filled silhouette of `contours` (shape units) warped by H at `scale`
/// pixels per shape unit, composited over a copy of `canvas` in flat gray
/// `color`. No anti-aliasing. Throws std::invalid_argument for a singular H
/// or an empty canvas.
GrayImage rasterize(const std::vector<ClosedContour>& contours, std::uint8_t color, const GrayImage& canvas,
                    const Homography& h, double scale);

/// Mask variant of rasterize over a width x height grid.
Mask rasterize_mask(const std::vector<ClosedContour>& contours, const Homography& h, double scale, int width,
                    int height);

}  // namespace propforge::geometry
