#include "propforge/geometry/raster.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace propforge::geometry {

namespace {

void check_homography(const Homography& h) {
  if (!h.allFinite() || std::abs(h.determinant()) < 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("rasterize: singular homography");
  }
}

}  // namespace

std::vector<ClosedContour> warp_contours(const std::vector<ClosedContour>& contours, const Homography& h,
                                         double scale) {
  check_homography(h);
  std::vector<ClosedContour> out;
  out.reserve(contours.size());
  for (const auto& c : contours) {
    ClosedContour w;
    w.reserve(c.size());
    for (const Point2& p : c) w.push_back(apply_homography(h, scale * p));
    out.push_back(std::move(w));
  }
  return out;
}

PixelBounds warped_bounds(const std::vector<ClosedContour>& pixel_contours, int margin) {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;
  for (const auto& c : pixel_contours) {
    for (const Point2& p : c) {
      x0 = std::min(x0, p.x());
      y0 = std::min(y0, p.y());
      x1 = std::max(x1, p.x());
      y1 = std::max(y1, p.y());
    }
  }
  if (!(x0 <= x1)) return {};
  return {static_cast<int>(std::floor(x0)) - margin, static_cast<int>(std::floor(y0)) - margin,
          static_cast<int>(std::ceil(x1)) + margin, static_cast<int>(std::ceil(y1)) + margin};
}

void fill_mask(const std::vector<ClosedContour>& pixel_contours, Mask& mask) {
  std::vector<double> crossings;
  for (const auto& contour : pixel_contours) {
    const std::size_t n = contour.size();
    if (n < 3) continue;
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -ymin;
    for (const Point2& p : contour) {
      ymin = std::min(ymin, p.y());
      ymax = std::max(ymax, p.y());
    }
    const int row0 = std::max(0, static_cast<int>(std::ceil(ymin)));
    const int row1 = std::min(mask.height - 1, static_cast<int>(std::floor(ymax)));
    for (int y = row0; y <= row1; ++y) {
      const double yc = static_cast<double>(y);
      crossings.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = contour[i];
        const Point2& b = contour[(i + 1) % n];
        // half-open in y so shared vertices are counted once
        if ((a.y() <= yc && b.y() > yc) || (b.y() <= yc && a.y() > yc)) {
          const double t = (yc - a.y()) / (b.y() - a.y());
          crossings.push_back(a.x() + t * (b.x() - a.x()));
        }
      }
      std::sort(crossings.begin(), crossings.end());
      for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
        const int xa = std::max(0, static_cast<int>(std::ceil(crossings[k])));
        const int xb = std::min(mask.width, static_cast<int>(std::ceil(crossings[k + 1])));
        for (int x = xa; x < xb; ++x) mask.at(x, y) = 1;
      }
    }
  }
}

Mask rasterize_mask(const std::vector<ClosedContour>& contours, const Homography& h, double scale, int width,
                    int height) {
  Mask mask(width, height, 0);
  fill_mask(warp_contours(contours, h, scale), mask);
  return mask;
}

GrayImage rasterize(const std::vector<ClosedContour>& contours, std::uint8_t color, const GrayImage& canvas,
                    const Homography& h, double scale) {
  if (canvas.empty()) throw std::invalid_argument("rasterize: empty canvas");
  const Mask mask = rasterize_mask(contours, h, scale, canvas.width, canvas.height);
  GrayImage out = canvas;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    if (mask.data[i]) out.data[i] = color;
  }
  return out;
}

}  // namespace propforge::geometry
