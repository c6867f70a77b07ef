#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "propforge/common/image.hpp"
#include "propforge/common/rng.hpp"
#include "propforge/dataset/background.hpp"
#include "propforge/dataset/label.hpp"
#include "propforge/dataset/sampling.hpp"
#include "propforge/events/event_synth.hpp"
#include "propforge/geometry/camera.hpp"

namespace propforge::dataset {

struct GeneratorConfig {
  int width{640};
  int height{480};
  int min_propellers{1};
  int max_propellers{12};
  double dt_ms{5.0};
  double view_focal{500.0};  // px, focal length used for the roll/pitch warp
  SamplingRanges ranges;
  LabelConfig label;
  std::string backgrounds{"procedural"};

  void validate() const;
};

/// Metadata for one composited propeller.
struct PropellerRecord {
  Point2 center{0.0, 0.0};
  double r_px{0.0};
  int n_blades{2};
  double rpm{0.0};
  double theta_hb{0.0};
  geometry::Homography homography{geometry::Homography::Identity()};
  int color{0};
  double tau{0.0};
  double p_noise{0.0};
  double p_miss{0.0};
  bool aliased{false};
  double roll{0.0};
  double pitch{0.0};
  geometry::ShapePreset shape{geometry::ShapePreset::Fitted};
  /// Propeller pixels that fired before corruption. Not serialized.
  std::uint64_t clean_events{0};

  bool operator==(const PropellerRecord&) const = default;
};

struct LabeledSample {
  std::uint64_t seed{0};
  events::EventFrame frame;
  Heatmap label;
  std::vector<PropellerRecord> propellers;
};

/// Builds one frame: draws the propeller count, the frame noise level and
/// every propeller, places them on non-overlapping discs with integer
/// centers, renders each over its own background patch, fires events with
/// its own threshold, drops its pixels with its p_miss, then adds frame
/// noise and the Gaussian label. A propeller that cannot be placed after a
/// bounded number of attempts is skipped.
LabeledSample compose_frame(Rng& rng, const BackgroundSource& backgrounds, const GeneratorConfig& config);
LabeledSample compose_frame(std::uint64_t seed, const BackgroundSource& backgrounds, const GeneratorConfig& config);

/// true when a blade turns at least one blade spacing during the window.
bool is_aliased(double rpm, double dt_ms, int n_blades);

nlohmann::json to_json(const GeneratorConfig& config);
/// Every key must be present; extra keys are rejected.
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PropellerRecord& record);
PropellerRecord propeller_record_from_json(const nlohmann::json& j);

/// meta.json document for a sample.
nlohmann::json sample_metadata(const LabeledSample& sample, std::uint64_t index);

}  // namespace propforge::dataset
