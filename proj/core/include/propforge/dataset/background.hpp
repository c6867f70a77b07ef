#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "propforge/common/image.hpp"
#include "propforge/common/rng.hpp"

namespace propforge::dataset {

/// Source of static background texture for propeller renders. Implementations
/// are immutable after construction and safe to share across threads; all
/// randomness comes from the caller's stream.
class BackgroundSource {
 public:
  virtual ~BackgroundSource() = default;
  /// A width x height patch with intensities in [1, 255].
  virtual GrayImage patch(Rng& rng, int width, int height) const = 0;
  virtual std::string describe() const = 0;
};

/// Smooth value noise plus a few flat random polygons.
class ProceduralBackground final : public BackgroundSource {
 public:
  GrayImage patch(Rng& rng, int width, int height) const override;
  std::string describe() const override { return "procedural"; }
};

/// Random crops from the PNG images of a directory (sorted by file name,
/// decoded to grayscale at construction). Images smaller than the request
/// are tiled.
class ImageDirectoryBackground final : public BackgroundSource {
 public:
  /// Throws std::runtime_error when the directory holds no readable PNG.
  explicit ImageDirectoryBackground(const std::filesystem::path& dir, std::size_t max_images = 512);
  GrayImage patch(Rng& rng, int width, int height) const override;
  std::string describe() const override;
  std::size_t image_count() const { return images_.size(); }

 private:
  std::filesystem::path dir_;
  std::vector<GrayImage> images_;
};

/// "procedural" or a directory path.
std::unique_ptr<BackgroundSource> make_background_source(const std::string& spec);

}  // namespace propforge::dataset
