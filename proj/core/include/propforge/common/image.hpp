#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace propforge {

/// Row-major single-channel image. Pixel (x, y) has its center at integer
/// coordinates (x, y).
template <typename T>
struct Image {
  int width{0};
  int height{0};
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, T fill = T{}) : width(w), height(h) {
    if (w < 0 || h < 0) throw std::invalid_argument("Image: negative dimensions");
    data.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
  }

  bool empty() const { return width == 0 || height == 0; }
  std::size_t size() const { return data.size(); }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

  T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  template <typename U>
  bool same_shape(const Image<U>& o) const {
    return width == o.width && height == o.height;
  }
  bool operator==(const Image&) const = default;
};

using GrayImage = Image<std::uint8_t>;
using Heatmap = Image<float>;
using Mask = Image<std::uint8_t>;

}  // namespace propforge
