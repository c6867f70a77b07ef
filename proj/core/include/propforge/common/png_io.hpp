#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "propforge/common/image.hpp"

namespace propforge {

/// Encodes an 8-bit grayscale PNG. Output bytes depend only on the pixels:
/// fixed compression settings, no timestamp or text chunks.
std::vector<std::uint8_t> encode_png(const GrayImage& img);

/// Decodes any PNG into 8-bit grayscale (color inputs are converted with
/// libpng's default luminance weights, alpha is stripped).
GrayImage decode_png(const std::vector<std::uint8_t>& bytes);

void write_png(const std::filesystem::path& path, const GrayImage& img);
GrayImage read_png(const std::filesystem::path& path);

}  // namespace propforge
