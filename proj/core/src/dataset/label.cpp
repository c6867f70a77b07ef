#include "propforge/dataset/label.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace propforge::dataset {

void LabelConfig::validate() const {
  if (!(sigma_ratio > 0.0)) throw std::invalid_argument("LabelConfig: sigma_ratio must be positive");
  if (!(support_sigmas > 0.0)) throw std::invalid_argument("LabelConfig: support_sigmas must be positive");
}

Heatmap make_label(int width, int height, std::span<const LabelPeak> peaks, double support_sigmas) {
  Heatmap out(width, height, 0.0f);
  for (const LabelPeak& pk : peaks) {
    if (!(pk.sigma > 0.0)) throw std::invalid_argument("make_label: sigma must be positive");
    const double cx = pk.center.x();
    const double cy = pk.center.y();
    if (!(cx >= 0.0 && cy >= 0.0 && cx <= width - 1 && cy <= height - 1)) {
      throw std::out_of_range("make_label: center outside the image");
    }
    const double support = support_sigmas * pk.sigma + pk.r_px;
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - support)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(cx + support)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - support)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(cy + support)));
    const double inv = 1.0 / (2.0 * pk.sigma * pk.sigma);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        if (d2 > support * support) continue;
        const float v = static_cast<float>(std::exp(-d2 * inv));
        out.at(x, y) = std::max(out.at(x, y), v);
      }
    }
  }
  return out;
}

Heatmap make_label(int width, int height, std::span<const Point2> centers, std::span<const double> radii,
                   const LabelConfig& config) {
  config.validate();
  if (centers.size() != radii.size()) throw std::invalid_argument("make_label: centers and radii differ in length");
  std::vector<LabelPeak> peaks;
  peaks.reserve(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    peaks.push_back({centers[i], radii[i], config.sigma_ratio * radii[i]});
  }
  return make_label(width, height, peaks, config.support_sigmas);
}

GrayImage quantize_label(const Heatmap& heatmap) {
  GrayImage out(heatmap.width, heatmap.height);
  for (std::size_t i = 0; i < heatmap.data.size(); ++i) {
    const double p = heatmap.data[i];
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantize_label: value outside [0, 1]");
    const double q = std::floor(p * 255.0 - 0.5);
    out.data[i] = static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
  }
  return out;
}

Heatmap dequantize_label(const GrayImage& img) {
  Heatmap out(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    const int q = img.data[i];
    out.data[i] = q == 0 ? 0.0f : std::min(1.0f, static_cast<float>(q + 1) / 255.0f);
  }
  return out;
}

}  // namespace propforge::dataset
