#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace propforge {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so readers never observe a
/// half-written file. Missing parent directories are created.
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace propforge
