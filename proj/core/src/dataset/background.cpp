#include "propforge/dataset/background.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "propforge/common/png_io.hpp"
#include "propforge/geometry/raster.hpp"

namespace propforge::dataset {

namespace {

std::uint8_t clamp_intensity(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 1L, 255L));
}

}  // namespace

GrayImage ProceduralBackground::patch(Rng& rng, int width, int height) const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("background patch: empty size");
  constexpr int kCell = 16;
  const double base = rng.uniform(40.0, 220.0);
  const double amplitude = rng.uniform(5.0, 40.0);
  const int gw = width / kCell + 2;
  const int gh = height / kCell + 2;
  std::vector<double> grid(static_cast<std::size_t>(gw * gh));
  for (double& g : grid) g = rng.uniform(-1.0, 1.0);

  Image<double> field(width, height);
  for (int y = 0; y < height; ++y) {
    const double fy = static_cast<double>(y) / kCell;
    const int iy = static_cast<int>(fy);
    const double ty = fy - iy;
    const double sy = ty * ty * (3.0 - 2.0 * ty);
    for (int x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x) / kCell;
      const int ix = static_cast<int>(fx);
      const double tx = fx - ix;
      const double sx = tx * tx * (3.0 - 2.0 * tx);
      const auto g = [&](int a, int b) { return grid[static_cast<std::size_t>(b * gw + a)]; };
      const double top = g(ix, iy) * (1 - sx) + g(ix + 1, iy) * sx;
      const double bottom = g(ix, iy + 1) * (1 - sx) + g(ix + 1, iy + 1) * sx;
      field.at(x, y) = base + amplitude * (top * (1 - sy) + bottom * sy);
    }
  }

  const int n_polys = static_cast<int>(rng.uniform_int(1, 5));
  Mask mask(width, height, 0);
  for (int k = 0; k < n_polys; ++k) {
    const int n_vertices = static_cast<int>(rng.uniform_int(3, 6));
    const double cx = rng.uniform(0.0, width);
    const double cy = rng.uniform(0.0, height);
    const double rad = rng.uniform(0.1, 0.5) * std::max(width, height);
    const double shade = rng.uniform(20.0, 235.0);
    geometry::ClosedContour poly;
    for (int v = 0; v < n_vertices; ++v) {
      const double a = 2.0 * std::numbers::pi * (v + rng.uniform(0.0, 0.8)) / n_vertices;
      const double rr = rad * rng.uniform(0.4, 1.0);
      poly.emplace_back(cx + rr * std::cos(a), cy + rr * std::sin(a));
    }
    std::fill(mask.data.begin(), mask.data.end(), 0);
    geometry::fill_mask({poly}, mask);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
      if (mask.data[i]) field.data[i] = shade + (field.data[i] - base);
    }
  }

  GrayImage out(width, height);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = clamp_intensity(field.data[i]);
  return out;
}

ImageDirectoryBackground::ImageDirectoryBackground(const std::filesystem::path& dir, std::size_t max_images)
    : dir_(dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("background directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() > max_images) files.resize(max_images);
  for (const auto& f : files) {
    GrayImage img = read_png(f);
    if (!img.empty()) images_.push_back(std::move(img));
  }
  if (images_.empty()) throw std::runtime_error("no readable PNG backgrounds in " + dir.string());
}

GrayImage ImageDirectoryBackground::patch(Rng& rng, int width, int height) const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("background patch: empty size");
  const GrayImage& src = images_[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(images_.size()) - 1))];
  const int ox = static_cast<int>(rng.uniform_int(0, std::max(0, src.width - width)));
  const int oy = static_cast<int>(rng.uniform_int(0, std::max(0, src.height - height)));
  GrayImage out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      out.at(x, y) = std::max<std::uint8_t>(1, src.at((ox + x) % src.width, (oy + y) % src.height));
    }
  }
  return out;
}

std::string ImageDirectoryBackground::describe() const { return dir_.string(); }

std::unique_ptr<BackgroundSource> make_background_source(const std::string& spec) {
  if (spec.empty() || spec == "procedural") return std::make_unique<ProceduralBackground>();
  return std::make_unique<ImageDirectoryBackground>(spec);
}

}  // namespace propforge::dataset
