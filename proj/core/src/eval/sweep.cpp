#include "propforge/eval/sweep.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "propforge/common/json_fields.hpp"
#include "propforge/common/parallel.hpp"
#include "propforge/common/png_io.hpp"
#include "propforge/common/rng.hpp"
#include "propforge/dataset/dataset.hpp"
#include "propforge/dataset/label.hpp"

namespace propforge::eval {

using nlohmann::json;

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const std::vector<double>& grid(const SweepSpec& spec, const std::string& param) {
  if (param == "r_px") return spec.r_px;
  if (param == "n_blades") return spec.n_blades;
  if (param == "rpm") return spec.rpm;
  if (param == "p_noise") return spec.p_noise;
  if (param == "p_miss") return spec.p_miss;
  if (param == "roll_deg") return spec.roll_deg;
  if (param == "pitch_deg") return spec.pitch_deg;
  throw std::invalid_argument("unknown sweep parameter " + param);
}

const char* const kParams[] = {"r_px", "n_blades", "rpm", "p_noise", "p_miss", "roll_deg", "pitch_deg"};

std::vector<GroundTruth> truths_of(const dataset::LabeledSample& s) {
  std::vector<GroundTruth> out;
  out.reserve(s.propellers.size());
  for (const auto& p : s.propellers) out.push_back({p.center, p.r_px});
  return out;
}

bool has_events_in_disc(const events::EventFrame& frame, const dataset::PropellerRecord& p) {
  const int x0 = std::max(0, static_cast<int>(std::floor(p.center.x() - p.r_px)));
  const int x1 = std::min(frame.width - 1, static_cast<int>(std::ceil(p.center.x() + p.r_px)));
  const int y0 = std::max(0, static_cast<int>(std::floor(p.center.y() - p.r_px)));
  const int y1 = std::min(frame.height - 1, static_cast<int>(std::ceil(p.center.y() + p.r_px)));
  const double r2 = p.r_px * p.r_px;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - p.center.x();
      const double dy = y - p.center.y();
      if (dx * dx + dy * dy <= r2 && frame.at(x, y) != 0) return true;
    }
  }
  return false;
}

}  // namespace

void SweepSpec::validate() const {
  for (const char* p : kParams) {
    if (grid(*this, p).empty()) throw std::invalid_argument(std::string("sweep: grid ") + p + " is empty");
  }
  if (samples_per_cell == 0) throw std::invalid_argument("sweep: samples_per_cell must be positive");
  base.validate();
}

std::string SweepCellId::name() const { return param + "_" + format_value(value); }

std::vector<SweepCellId> sweep_cells(const SweepSpec& spec) {
  std::vector<SweepCellId> cells;
  for (const char* p : kParams) {
    for (double v : grid(spec, p)) cells.push_back({p, v});
  }
  return cells;
}

dataset::GeneratorConfig cell_generator_config(const SweepSpec& spec, const SweepCellId& cell) {
  using dataset::ParamAxis;
  dataset::GeneratorConfig cfg = spec.base;
  auto& r = cfg.ranges;
  r.r_px = ParamAxis::of(spec.r_px);
  r.n_blades = ParamAxis::of(spec.n_blades);
  r.rpm = ParamAxis::of(spec.rpm);
  r.p_noise = ParamAxis::of(spec.p_noise);
  r.p_miss = ParamAxis::of(spec.p_miss);
  r.roll_deg = ParamAxis::fixed(0.0);
  r.pitch_deg = ParamAxis::fixed(0.0);
  const ParamAxis pinned = ParamAxis::fixed(cell.value);
  if (cell.param == "roll_deg" || cell.param == "pitch_deg") {
    r.p_noise = ParamAxis::fixed(0.0);
    r.p_miss = ParamAxis::fixed(0.0);
  }
  if (cell.param == "r_px") r.r_px = pinned;
  else if (cell.param == "n_blades") r.n_blades = pinned;
  else if (cell.param == "rpm") r.rpm = pinned;
  else if (cell.param == "p_noise") r.p_noise = pinned;
  else if (cell.param == "p_miss") r.p_miss = pinned;
  else if (cell.param == "roll_deg") r.roll_deg = pinned;
  else if (cell.param == "pitch_deg") r.pitch_deg = pinned;
  else throw std::invalid_argument("unknown sweep parameter " + cell.param);
  cfg.validate();
  return cfg;
}

std::uint64_t cell_seed(const SweepSpec& spec, std::size_t cell_index) { return derive_seed(spec.seed, cell_index); }

HeatmapDetector oracle_detector(bool require_events) {
  return [require_events](const DetectorInput& in) -> std::optional<Heatmap> {
    const auto& s = in.sample;
    if (!require_events) return s.label;
    std::vector<Point2> centers;
    std::vector<double> radii;
    for (const auto& p : s.propellers) {
      if (!has_events_in_disc(s.frame, p)) continue;
      centers.push_back(p.center);
      radii.push_back(p.r_px);
    }
    return dataset::make_label(s.frame.width, s.frame.height, centers, radii, dataset::LabelConfig{});
  };
}

Heatmap event_density(const events::EventFrame& frame, int radius) {
  if (radius < 1) throw std::invalid_argument("event_density: radius must be >= 1");
  const int w = frame.width;
  const int h = frame.height;
  Heatmap cur(w, h, 0.0f);
  for (std::size_t i = 0; i < frame.data.size(); ++i) cur.data[i] = frame.data[i] != 0 ? 1.0f : 0.0f;
  Heatmap tmp(w, h, 0.0f);
  for (int pass = 0; pass < 2; ++pass) {
    // separable running-sum box filter, zero padded
    for (int y = 0; y < h; ++y) {
      double acc = 0.0;
      for (int x = -radius; x < w + radius; ++x) {
        const int in = x + radius;
        const int out = x - radius - 1;
        if (in < w && in >= 0) acc += cur.at(in, y);
        if (out >= 0 && out < w) acc -= cur.at(out, y);
        if (x >= 0 && x < w) tmp.at(x, y) = static_cast<float>(acc);
      }
    }
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int y = -radius; y < h + radius; ++y) {
        const int in = y + radius;
        const int out = y - radius - 1;
        if (in < h && in >= 0) acc += tmp.at(x, in);
        if (out >= 0 && out < h) acc -= tmp.at(x, out);
        if (y >= 0 && y < h) cur.at(x, y) = static_cast<float>(acc);
      }
    }
  }
  const double window = 2.0 * radius + 1.0;
  const auto norm = static_cast<float>(1.0 / (window * window * window * window));
  for (float& v : cur.data) v = std::clamp(v * norm, 0.0f, 1.0f);
  return cur;
}

void BaselineParams::validate() const {
  if (radius < 1) throw std::invalid_argument("baseline: radius must be >= 1");
  if (!(density_threshold > 0.0 && density_threshold < 1.0)) {
    throw std::invalid_argument("baseline: density threshold must lie in (0, 1)");
  }
  if (!(min_radius_px >= 0.0)) throw std::invalid_argument("baseline: min radius must be >= 0");
}

Heatmap baseline_heatmap(const events::EventFrame& frame, const BaselineParams& params) {
  params.validate();
  const Heatmap density = event_density(frame, params.radius);
  std::vector<dataset::LabelPeak> peaks;
  const dataset::LabelConfig label;
  for (const Component& c : find_components(density, params.density_threshold)) {
    const double r = std::sqrt(static_cast<double>(c.pixels) / std::numbers::pi);
    if (r < params.min_radius_px) continue;
    peaks.push_back({c.weighted_centroid, r, label.sigma_ratio * r});
  }
  return dataset::make_label(frame.width, frame.height, peaks, label.support_sigmas);
}

HeatmapDetector baseline_detector(BaselineParams params) {
  params.validate();
  return [params](const DetectorInput& in) -> std::optional<Heatmap> { return baseline_heatmap(in.sample.frame, params); };
}

HeatmapDetector heatmap_dir_detector(std::filesystem::path dir) {
  return [dir = std::move(dir)](const DetectorInput& in) -> std::optional<Heatmap> {
    char name[32];
    std::snprintf(name, sizeof name, "%06" PRIu64 ".pred.png", in.index);
    const auto path = dir / in.cell.name() / name;
    if (!std::filesystem::exists(path)) return std::nullopt;
    const GrayImage img = read_png(path);
    if (img.width != in.sample.frame.width || img.height != in.sample.frame.height) {
      throw std::runtime_error(path.string() + ": heatmap size does not match the frame");
    }
    return dataset::dequantize_label(img);
  };
}

std::string SweepTable::csv() const {
  std::ostringstream out;
  out << "param,value,dr,n_samples\n";
  for (const auto& c : cells) {
    out << c.id.param << ',' << format_value(c.id.value) << ',';
    if (c.dr) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", *c.dr);
      out << buf;
    } else {
      out << "NA";
    }
    out << ',' << c.n_samples << '\n';
  }
  return out.str();
}

json SweepTable::to_json() const {
  json rows = json::array();
  for (const auto& c : cells) {
    rows.push_back({{"param", c.id.param},
                    {"value", c.id.value},
                    {"dr", c.dr ? json(*c.dr) : json(nullptr)},
                    {"n_samples", c.n_samples},
                    {"n_frames", c.n_frames},
                    {"error", c.error}});
  }
  return json{{"cells", rows}};
}

SweepTable run_sweep(const SweepSpec& spec, const HeatmapDetector& detector, unsigned threads) {
  spec.validate();
  const auto cells = sweep_cells(spec);
  const auto backgrounds = dataset::make_background_source(spec.base.backgrounds);
  std::vector<dataset::GeneratorConfig> configs;
  configs.reserve(cells.size());
  for (const auto& c : cells) configs.push_back(cell_generator_config(spec, c));

  struct Outcome {
    std::vector<bool> results;
    bool missing{false};
    std::string error;
  };
  const std::uint64_t per = spec.samples_per_cell;
  std::vector<Outcome> outcomes(cells.size() * per);
  parallel_for(
      outcomes.size(),
      [&](std::size_t k) {
        const std::size_t ci = k / per;
        const std::uint64_t j = k % per;
        Outcome& o = outcomes[k];
        try {
          const auto sample =
              dataset::compose_frame(dataset::sample_seed(cell_seed(spec, ci), j), *backgrounds, configs[ci]);
          const auto heat = detector(DetectorInput{cells[ci], j, sample});
          if (!heat) {
            o.missing = true;
            return;
          }
          if (!heat->same_shape(sample.frame)) throw std::runtime_error("detector heatmap has the wrong size");
          const auto dets = heatmap_to_detections(*heat, spec.detector);
          const auto truths = truths_of(sample);
          o.results = match_detections(truths, dets);
        } catch (const std::exception& e) {
          o.error = e.what();
        }
      },
      threads);

  SweepTable table;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    SweepCell cell{cells[ci], std::nullopt, 0, per, {}};
    std::vector<bool> all;
    std::uint64_t missing = 0;
    for (std::uint64_t j = 0; j < per; ++j) {
      const Outcome& o = outcomes[ci * per + j];
      if (!o.error.empty() && cell.error.empty()) cell.error = "sample " + std::to_string(j) + ": " + o.error;
      if (o.missing) ++missing;
      all.insert(all.end(), o.results.begin(), o.results.end());
    }
    if (missing > 0 && cell.error.empty()) cell.error = std::to_string(missing) + " heatmaps missing";
    if (cell.error.empty()) {
      cell.n_samples = all.size();
      if (!all.empty()) cell.dr = detection_rate(all);
      else cell.error = "no propellers in cell";
    }
    table.cells.push_back(std::move(cell));
  }
  return table;
}

void emit_sweep_datasets(const SweepSpec& spec, const std::filesystem::path& outdir, unsigned threads) {
  spec.validate();
  const auto cells = sweep_cells(spec);
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    dataset::generate_dataset(spec.samples_per_cell, cell_seed(spec, ci), outdir / cells[ci].name(),
                              cell_generator_config(spec, cells[ci]), threads);
  }
}

json to_json(const SweepSpec& spec) {
  json det{{"threshold", spec.detector.threshold},
           {"r_px_hint", spec.detector.r_px_hint ? json(*spec.detector.r_px_hint) : json(nullptr)},
           {"sigma_ratio", spec.detector.sigma_ratio},
           {"min_r_px", spec.detector.min_r_px},
           {"max_r_px", spec.detector.max_r_px}};
  return json{{"r_px", spec.r_px},
              {"n_blades", spec.n_blades},
              {"rpm", spec.rpm},
              {"p_noise", spec.p_noise},
              {"p_miss", spec.p_miss},
              {"roll_deg", spec.roll_deg},
              {"pitch_deg", spec.pitch_deg},
              {"samples_per_cell", spec.samples_per_cell},
              {"seed", spec.seed},
              {"generator", dataset::to_json(spec.base)},
              {"detector", det}};
}

SweepSpec sweep_spec_from_json(const json& j) {
  StrictReader r(j, "sweep");
  SweepSpec s;
  s.r_px = r.get<std::vector<double>>("r_px");
  s.n_blades = r.get<std::vector<double>>("n_blades");
  s.rpm = r.get<std::vector<double>>("rpm");
  s.p_noise = r.get<std::vector<double>>("p_noise");
  s.p_miss = r.get<std::vector<double>>("p_miss");
  s.roll_deg = r.get<std::vector<double>>("roll_deg");
  s.pitch_deg = r.get<std::vector<double>>("pitch_deg");
  s.samples_per_cell = r.get<std::uint64_t>("samples_per_cell");
  s.seed = r.get<std::uint64_t>("seed");
  s.base = dataset::generator_config_from_json(r.at("generator"));
  {
    StrictReader d(r.at("detector"), r.child("detector"));
    s.detector.threshold = d.get<double>("threshold");
    const json& hint = d.at("r_px_hint");
    if (!hint.is_null()) s.detector.r_px_hint = hint.get<double>();
    s.detector.sigma_ratio = d.get<double>("sigma_ratio");
    s.detector.min_r_px = d.get<double>("min_r_px");
    s.detector.max_r_px = d.get<double>("max_r_px");
    d.finish();
  }
  r.finish();
  s.validate();
  return s;
}

}  // namespace propforge::eval
