#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "propforge/dataset/compose.hpp"

namespace propforge::dataset {

inline constexpr int kManifestVersion = 1;

struct FileDigest {
  std::string file;  // relative to the dataset root
  std::string sha256;

  bool operator==(const FileDigest&) const = default;
};

struct ManifestEntry {
  std::uint64_t index{0};
  std::uint64_t seed{0};
  FileDigest frame;
  FileDigest label;
  FileDigest meta;
  bool valid{true};
  std::string error;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  int version{kManifestVersion};
  std::uint64_t seed{0};
  std::uint64_t count{0};
  GeneratorConfig config;
  std::vector<ManifestEntry> samples;
};

/// samples/{index:06}.{kind}.{ext}
std::string sample_file_name(std::uint64_t index, const std::string& kind, const std::string& ext);

/// Per-sample seed: derive_seed(dataset seed, index).
std::uint64_t sample_seed(std::uint64_t dataset_seed, std::uint64_t index);

struct SampleFiles {
  std::vector<std::uint8_t> frame_png;
  std::vector<std::uint8_t> label_png;
  std::string meta_json;
};

/// Encodes a sample exactly as it is stored on disk.
SampleFiles encode_sample(const LabeledSample& sample, std::uint64_t index);

/// Writes `count` samples and manifest.json under `outdir`. Samples are built
/// in parallel (threads = 0 uses worker_count()); bytes depend only on
/// (count, seed, config). A sample that fails is removed from disk and
/// marked invalid in the manifest, after which std::runtime_error is thrown.
DatasetManifest generate_dataset(std::uint64_t count, std::uint64_t seed, const std::filesystem::path& outdir,
                                 const GeneratorConfig& config = {}, unsigned threads = 0);

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);
std::string manifest_text(const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& dataset_dir);

struct VerifyReport {
  bool ok{true};
  std::size_t files_checked{0};
  std::vector<std::string> problems;
};

/// Recomputes every digest listed in the manifest.
VerifyReport verify_dataset(const std::filesystem::path& dataset_dir);

/// Sample as read back from disk: dequantized frame and label, parsed
/// metadata. clean_events is not stored and reads back as 0.
struct LoadedSample {
  events::EventFrame frame;
  Heatmap label;
  std::vector<PropellerRecord> propellers;
};

LoadedSample load_sample(const std::filesystem::path& dataset_dir, std::uint64_t index);

}  // namespace propforge::dataset
