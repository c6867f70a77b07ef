#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "propforge/dataset/compose.hpp"
#include "propforge/eval/detection.hpp"

namespace propforge::eval {

/// Parameter grids. One axis varies per row; the rest are drawn from their
/// grids. Size, blade, speed and corruption rows keep the view head-on;
/// the two angle rows run without corruption.
struct SweepSpec {
  std::vector<double> r_px{20, 30, 40, 50, 60};
  std::vector<double> n_blades{2, 3, 4, 5, 6};
  std::vector<double> rpm{5000, 10000, 20000, 30000, 40000};
  std::vector<double> p_noise{0.0, 0.01, 0.02};
  std::vector<double> p_miss{0.0, 0.15, 0.3, 0.45, 0.6};
  std::vector<double> roll_deg{0, 10, 20, 30, 60};
  std::vector<double> pitch_deg{0, 10, 20, 30, 60};
  std::uint64_t samples_per_cell{20};
  std::uint64_t seed{1};
  dataset::GeneratorConfig base;
  DetectorParams detector;

  void validate() const;
};

struct SweepCellId {
  std::string param;
  double value{0.0};

  /// Directory name used for emitted cell datasets, e.g. "r_px_20".
  std::string name() const;
};

/// Cells in table order.
std::vector<SweepCellId> sweep_cells(const SweepSpec& spec);
dataset::GeneratorConfig cell_generator_config(const SweepSpec& spec, const SweepCellId& cell);
std::uint64_t cell_seed(const SweepSpec& spec, std::size_t cell_index);

struct DetectorInput {
  const SweepCellId& cell;
  std::uint64_t index;  // sample index within the cell
  const dataset::LabeledSample& sample;
};

/// Returns a heatmap in [0, 1] with the frame's dimensions, or nullopt when
/// none is available (the cell is then reported as NA).
using HeatmapDetector = std::function<std::optional<Heatmap>(const DetectorInput&)>;

/// Metadata oracle. With require_events, a propeller whose disc holds no
/// event in the final frame is left out of the heatmap.
HeatmapDetector oracle_detector(bool require_events = false);
/// Event-density blob detector used for smoke numbers: components of the
/// local event density become label-shaped Gaussian peaks whose radius is
/// that of a disc with the component's area.
struct BaselineParams {
  int radius{6};                   // box filter half width, px
  double density_threshold{0.05};  // fraction of pixels with events
  double min_radius_px{8.0};

  void validate() const;
};
Heatmap baseline_heatmap(const events::EventFrame& frame, const BaselineParams& params = {});
HeatmapDetector baseline_detector(BaselineParams params = {});
/// Reads `{dir}/{cell}/{index:06}.pred.png` and dequantizes it.
HeatmapDetector heatmap_dir_detector(std::filesystem::path dir);

/// Fraction of pixels holding an event, box-filtered twice with half width
/// `radius` (zero padding).
Heatmap event_density(const events::EventFrame& frame, int radius = 4);

struct SweepCell {
  SweepCellId id;
  std::optional<double> dr;
  std::uint64_t n_samples{0};  // ground-truth propellers evaluated
  std::uint64_t n_frames{0};
  std::string error;
};

struct SweepTable {
  std::vector<SweepCell> cells;

  /// param,value,dr,n_samples with dr as a fraction or NA.
  std::string csv() const;
  nlohmann::json to_json() const;
};

/// Evaluates every cell; frames are built and scored concurrently and
/// reduced in cell order. A failing cell is recorded, not thrown.
SweepTable run_sweep(const SweepSpec& spec, const HeatmapDetector& detector, unsigned threads = 0);

/// Writes every cell's frames as a dataset under outdir/<cell name>/.
void emit_sweep_datasets(const SweepSpec& spec, const std::filesystem::path& outdir, unsigned threads = 0);

nlohmann::json to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

}  // namespace propforge::eval
