#include "propforge/eval/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace propforge::eval {

BBox BBox::centered(const Point2& center, double side) {
  const double h = 0.5 * side;
  return {center.x() - h, center.y() - h, center.x() + h, center.y() + h};
}

double BBox::area() const { return std::max(0.0, x1 - x0) * std::max(0.0, y1 - y0); }

BBox BBox::clipped(int width, int height) const {
  const double w = width - 1.0;
  const double h = height - 1.0;
  return {std::clamp(x0, 0.0, w), std::clamp(y0, 0.0, h), std::clamp(x1, 0.0, w), std::clamp(y1, 0.0, h)};
}

double iou(const BBox& a, const BBox& b) {
  const double aa = a.area();
  const double ab = b.area();
  if (aa <= 0.0 || ab <= 0.0) return 0.0;
  const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (aa + ab - inter);
}

bool success(const GroundTruth& g, const Detection& d) { return iou(g.box(), d.box) >= kSuccessIou; }

std::vector<Component> find_components(const Heatmap& heatmap, double threshold) {
  const int w = heatmap.width;
  const int h = heatmap.height;
  std::vector<char> seen(heatmap.data.size(), 0);
  std::vector<int> stack;
  std::vector<Component> out;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const std::size_t seed = static_cast<std::size_t>(y0) * w + x0;
      if (seen[seed] || heatmap.data[seed] < threshold) continue;
      seen[seed] = 1;
      stack.assign(1, static_cast<int>(seed));
      double wsum = 0.0, wx = 0.0, wy = 0.0, peak = 0.0;
      double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int x = idx % w;
        const int y = idx / w;
        const double v = heatmap.data[static_cast<std::size_t>(idx)];
        wsum += v;
        wx += v * x;
        wy += v * y;
        peak = std::max(peak, v);
        n += 1.0;
        sx += x;
        sy += y;
        sxx += static_cast<double>(x) * x;
        syy += static_cast<double>(y) * y;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
            if (!seen[nidx] && heatmap.data[nidx] >= threshold) {
              seen[nidx] = 1;
              stack.push_back(static_cast<int>(nidx));
            }
          }
        }
      }
      Component c;
      c.pixels = static_cast<std::size_t>(n);
      c.weighted_centroid = wsum > 0.0 ? Point2(wx / wsum, wy / wsum) : Point2(sx / n, sy / n);
      c.peak = peak;
      c.gyration2 = (sxx / n - (sx / n) * (sx / n)) + (syy / n - (sy / n) * (sy / n));
      out.push_back(c);
    }
  }
  return out;
}

std::vector<Detection> heatmap_to_detections(const Heatmap& heatmap, const DetectorParams& params) {
  if (!(params.threshold > 0.0 && params.threshold < 1.0)) {
    throw std::invalid_argument("heatmap_to_detections: threshold must lie in (0, 1)");
  }
  // Pixel-set radius of gyration of a disc of radius a is a^2/2 + 1/6; the
  // Gaussian level set at threshold c has a = sigma sqrt(2 ln(1/c)).
  const double level = std::sqrt(2.0 * std::log(1.0 / params.threshold));
  std::vector<Detection> out;
  for (const Component& c : find_components(heatmap, params.threshold)) {
    Detection d;
    d.center = c.weighted_centroid;
    d.confidence = std::clamp(c.peak, 0.0, 1.0);
    double r;
    if (params.r_px_hint) {
      r = *params.r_px_hint;
    } else {
      const double disc_radius = std::sqrt(std::max(0.0, 2.0 * (c.gyration2 - 1.0 / 6.0)));
      r = std::clamp(disc_radius / level / params.sigma_ratio, params.min_r_px, params.max_r_px);
    }
    d.box = BBox::centered(d.center, 2.0 * r).clipped(heatmap.width, heatmap.height);
    out.push_back(d);
  }
  return out;
}

std::vector<bool> match_detections(std::span<const GroundTruth> truths, std::span<const Detection> detections) {
  struct Pair {
    double iou;
    std::size_t g;
    std::size_t d;
  };
  std::vector<Pair> pairs;
  for (std::size_t g = 0; g < truths.size(); ++g) {
    const BBox gb = truths[g].box();
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double v = iou(gb, detections[d].box);
      if (v > 0.0) pairs.push_back({v, g, d});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(b.iou, a.g, a.d) < std::tie(a.iou, b.g, b.d);
  });
  std::vector<bool> result(truths.size(), false);
  std::vector<bool> g_used(truths.size(), false);
  std::vector<bool> d_used(detections.size(), false);
  for (const Pair& p : pairs) {
    if (g_used[p.g] || d_used[p.d]) continue;
    g_used[p.g] = true;
    d_used[p.d] = true;
    result[p.g] = p.iou >= kSuccessIou;
  }
  return result;
}

double detection_rate(std::span<const bool> results) {
  if (results.empty()) throw std::invalid_argument("detection_rate: no results");
  const auto hits = std::count(results.begin(), results.end(), true);
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double detection_rate(const std::vector<bool>& results) {
  if (results.empty()) throw std::invalid_argument("detection_rate: no results");
  const auto hits = std::count(results.begin(), results.end(), true);
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double drone_dr(double dr, int eta) {
  if (!(dr >= 0.0 && dr <= 1.0)) throw std::invalid_argument("drone_dr: DR must lie in [0, 1]");
  if (eta < 1) throw std::invalid_argument("drone_dr: eta must be >= 1");
  return 1.0 - std::pow(1.0 - dr, eta);
}

}  // namespace propforge::eval
