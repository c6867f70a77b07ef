#include "propforge/dataset/dataset.hpp"

#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <system_error>

#include "propforge/common/io.hpp"
#include "propforge/common/json_fields.hpp"
#include "propforge/common/parallel.hpp"
#include "propforge/common/png_io.hpp"
#include "propforge/common/sha256.hpp"
#include "propforge/events/corruption.hpp"

namespace propforge::dataset {

using nlohmann::json;
namespace fs = std::filesystem;

std::string sample_file_name(std::uint64_t index, const std::string& kind, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(index));
  return "samples/" + std::string(buf) + "." + kind + "." + ext;
}

std::uint64_t sample_seed(std::uint64_t dataset_seed, std::uint64_t index) { return derive_seed(dataset_seed, index); }

SampleFiles encode_sample(const LabeledSample& sample, std::uint64_t index) {
  return {encode_png(events::quantize_frame(sample.frame)), encode_png(quantize_label(sample.label)),
          sample_metadata(sample, index).dump(2) + "\n"};
}

namespace {

void remove_quietly(const fs::path& p) {
  std::error_code ec;
  fs::remove(p, ec);
}

json digest_json(const FileDigest& d) { return {{"file", d.file}, {"sha256", d.sha256}}; }

FileDigest digest_from_json(const json& j, const std::string& ctx) {
  StrictReader r(j, ctx);
  FileDigest d{r.get<std::string>("file"), r.get<std::string>("sha256")};
  r.finish();
  return d;
}

}  // namespace

DatasetManifest generate_dataset(std::uint64_t count, std::uint64_t seed, const fs::path& outdir,
                                 const GeneratorConfig& config, unsigned threads) {
  config.validate();
  std::error_code ec;
  fs::create_directories(outdir / "samples", ec);
  if (ec) throw std::runtime_error("cannot create " + (outdir / "samples").string() + ": " + ec.message());

  const auto backgrounds = make_background_source(config.backgrounds);

  DatasetManifest manifest;
  manifest.seed = seed;
  manifest.count = count;
  manifest.config = config;
  manifest.samples.resize(count);

  parallel_for(
      count,
      [&](std::size_t i) {
        ManifestEntry& entry = manifest.samples[i];
        entry.index = i;
        entry.seed = sample_seed(seed, i);
        entry.frame.file = sample_file_name(i, "frame", "png");
        entry.label.file = sample_file_name(i, "label", "png");
        entry.meta.file = sample_file_name(i, "meta", "json");
        try {
          const LabeledSample sample = compose_frame(entry.seed, *backgrounds, config);
          const SampleFiles files = encode_sample(sample, i);
          entry.frame.sha256 = sha256_hex(files.frame_png);
          entry.label.sha256 = sha256_hex(files.label_png);
          entry.meta.sha256 = sha256_hex(files.meta_json);
          write_file_atomic(outdir / entry.frame.file, files.frame_png);
          write_file_atomic(outdir / entry.label.file, files.label_png);
          write_file_atomic(outdir / entry.meta.file, files.meta_json);
        } catch (const std::exception& e) {
          for (const auto* d : {&entry.frame, &entry.label, &entry.meta}) remove_quietly(outdir / d->file);
          entry.valid = false;
          entry.error = e.what();
          entry.frame.sha256.clear();
          entry.label.sha256.clear();
          entry.meta.sha256.clear();
        }
      },
      threads);

  write_file_atomic(outdir / "manifest.json", manifest_text(manifest));

  for (const auto& e : manifest.samples) {
    if (!e.valid) throw std::runtime_error("sample " + std::to_string(e.index) + " failed: " + e.error);
  }
  return manifest;
}

json to_json(const DatasetManifest& m) {
  json samples = json::array();
  for (const auto& e : m.samples) {
    json s = {{"index", e.index},
              {"seed", e.seed},
              {"valid", e.valid},
              {"frame", digest_json(e.frame)},
              {"label", digest_json(e.label)},
              {"meta", digest_json(e.meta)}};
    if (!e.valid) s["error"] = e.error;
    samples.push_back(std::move(s));
  }
  return {{"format", "propforge-dataset"},
          {"version", m.version},
          {"seed", m.seed},
          {"count", m.count},
          {"generator", to_json(m.config)},
          {"samples", samples}};
}

DatasetManifest manifest_from_json(const json& j) {
  StrictReader r(j, "manifest");
  if (r.get<std::string>("format") != "propforge-dataset") throw std::invalid_argument("manifest: unknown format");
  DatasetManifest m;
  m.version = r.get<int>("version");
  if (m.version != kManifestVersion) throw std::invalid_argument("manifest: unsupported version");
  m.seed = r.get<std::uint64_t>("seed");
  m.count = r.get<std::uint64_t>("count");
  m.config = generator_config_from_json(r.at("generator"));
  for (const auto& s : r.at("samples")) {
    StrictReader sr(s, "manifest.samples[]");
    ManifestEntry e;
    e.index = sr.get<std::uint64_t>("index");
    e.seed = sr.get<std::uint64_t>("seed");
    e.valid = sr.get<bool>("valid");
    e.frame = digest_from_json(sr.at("frame"), "frame");
    e.label = digest_from_json(sr.at("label"), "label");
    e.meta = digest_from_json(sr.at("meta"), "meta");
    if (!e.valid) e.error = sr.get<std::string>("error");
    sr.finish();
    m.samples.push_back(std::move(e));
  }
  r.finish();
  if (m.samples.size() != m.count) throw std::invalid_argument("manifest: sample count mismatch");
  return m;
}

std::string manifest_text(const DatasetManifest& manifest) { return to_json(manifest).dump(2) + "\n"; }

DatasetManifest read_manifest(const fs::path& dataset_dir) {
  const auto bytes = read_file(dataset_dir / "manifest.json");
  return manifest_from_json(json::parse(bytes.begin(), bytes.end()));
}

VerifyReport verify_dataset(const fs::path& dataset_dir) {
  VerifyReport report;
  DatasetManifest m;
  try {
    m = read_manifest(dataset_dir);
  } catch (const std::exception& e) {
    report.ok = false;
    report.problems.push_back(std::string("manifest: ") + e.what());
    return report;
  }
  for (const auto& e : m.samples) {
    if (!e.valid) {
      report.ok = false;
      report.problems.push_back("sample " + std::to_string(e.index) + " marked invalid: " + e.error);
      continue;
    }
    for (const FileDigest* d : {&e.frame, &e.label, &e.meta}) {
      ++report.files_checked;
      try {
        const std::string actual = sha256_file(dataset_dir / d->file);
        if (actual != d->sha256) {
          report.ok = false;
          report.problems.push_back(d->file + ": digest mismatch");
        }
      } catch (const std::exception& ex) {
        report.ok = false;
        report.problems.push_back(d->file + ": " + ex.what());
      }
    }
  }
  return report;
}

LoadedSample load_sample(const fs::path& dataset_dir, std::uint64_t index) {
  LoadedSample s;
  s.frame = events::dequantize_frame(read_png(dataset_dir / sample_file_name(index, "frame", "png")));
  s.label = dequantize_label(read_png(dataset_dir / sample_file_name(index, "label", "png")));
  const auto bytes = read_file(dataset_dir / sample_file_name(index, "meta", "json"));
  const json meta = json::parse(bytes.begin(), bytes.end());
  for (const auto& p : meta.at("propellers")) s.propellers.push_back(propeller_record_from_json(p));
  return s;
}

}  // namespace propforge::dataset
