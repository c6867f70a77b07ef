#include "propforge/dataset/compose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "propforge/common/json_fields.hpp"
#include "propforge/events/corruption.hpp"
#include "propforge/geometry/raster.hpp"

namespace propforge::dataset {

using nlohmann::json;

void GeneratorConfig::validate() const {
  if (width < 16 || height < 16) throw std::invalid_argument("generator: image must be at least 16x16");
  if (min_propellers < 0 || max_propellers < min_propellers) {
    throw std::invalid_argument("generator: need 0 <= min_propellers <= max_propellers");
  }
  if (!(dt_ms > 0.0 && dt_ms <= 20.0)) throw std::invalid_argument("generator: dt_ms must lie in (0, 20]");
  if (!(view_focal > 0.0)) throw std::invalid_argument("generator: view_focal must be positive");
  ranges.validate();
  label.validate();
}

bool is_aliased(double rpm, double dt_ms, int n_blades) {
  return events::delta_theta(rpm, dt_ms) >= 2.0 * std::numbers::pi / n_blades;
}

namespace {

constexpr int kPlacementAttempts = 64;
constexpr int kRoiMargin = 2;

/// Largest distance from the hub of the warped unit circle, in pixels.
double footprint_radius(const geometry::Homography& h_at_origin, double scale) {
  double r = 0.0;
  for (int k = 0; k < 72; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 72;
    const geometry::Point2 p = geometry::apply_homography(h_at_origin, scale * geometry::Point2(std::cos(a), std::sin(a)));
    r = std::max(r, p.norm());
  }
  return r;
}

struct Placed {
  PropConfig cfg;
  Point2 center;
  double footprint;
};

}  // namespace

LabeledSample compose_frame(Rng& rng, const BackgroundSource& backgrounds, const GeneratorConfig& config) {
  config.validate();
  const int w = config.width;
  const int h = config.height;

  const int n = static_cast<int>(rng.uniform_int(config.min_propellers, config.max_propellers));
  const double p_noise = config.ranges.p_noise.draw(rng);

  std::vector<Placed> placed;
  for (int k = 0; k < n; ++k) {
    const PropConfig pc = sample_propeller_config(rng, config.ranges);
    const auto h0 = geometry::view_homography({0.0, 0.0}, pc.roll, pc.pitch, config.view_focal);
    const double fp = footprint_radius(h0, pc.r_px) + 1.0;
    const int lo_x = static_cast<int>(std::ceil(fp));
    const int lo_y = lo_x;
    const int hi_x = w - 1 - lo_x;
    const int hi_y = h - 1 - lo_y;
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
      if (hi_x < lo_x || hi_y < lo_y) break;
      const Point2 c(static_cast<double>(rng.uniform_int(lo_x, hi_x)), static_cast<double>(rng.uniform_int(lo_y, hi_y)));
      const bool clear = std::all_of(placed.begin(), placed.end(), [&](const Placed& o) {
        return (o.center - c).norm() >= o.footprint + fp;
      });
      if (clear) {
        placed.push_back({pc, c, fp});
        break;
      }
    }
  }

  LabeledSample sample;
  sample.frame = events::EventFrame(w, h, 0);
  std::vector<LabelPeak> peaks;

  for (const Placed& p : placed) {
    const PropConfig& pc = p.cfg;
    const geometry::Homography hom = geometry::view_homography(p.center, pc.roll, pc.pitch, config.view_focal);
    const geometry::SplineBladeShape& shape = geometry::preset_shape(pc.shape);
    const double dtheta = events::delta_theta(pc.rpm, config.dt_ms);
    const auto outline0 = geometry::warp_contours(geometry::propeller_outline(shape, pc.n_blades, pc.theta_hb), hom, pc.r_px);
    const auto outline1 =
        geometry::warp_contours(geometry::propeller_outline(shape, pc.n_blades, pc.theta_hb + dtheta), hom, pc.r_px);

    geometry::PixelBounds roi = geometry::warped_bounds(outline0, kRoiMargin);
    const geometry::PixelBounds roi1 = geometry::warped_bounds(outline1, kRoiMargin);
    roi.x0 = std::max(0, std::min(roi.x0, roi1.x0));
    roi.y0 = std::max(0, std::min(roi.y0, roi1.y0));
    roi.x1 = std::min(w - 1, std::max(roi.x1, roi1.x1));
    roi.y1 = std::min(h - 1, std::max(roi.y1, roi1.y1));

    const auto shift = [&](const std::vector<geometry::ClosedContour>& cs) {
      std::vector<geometry::ClosedContour> out = cs;
      for (auto& c : out) {
        for (auto& q : c) q -= Point2(roi.x0, roi.y0);
      }
      return out;
    };
    Mask m0(roi.width(), roi.height(), 0);
    Mask m1(roi.width(), roi.height(), 0);
    geometry::fill_mask(shift(outline0), m0);
    geometry::fill_mask(shift(outline1), m1);

    const GrayImage bg = backgrounds.patch(rng, roi.width(), roi.height());
    GrayImage i0 = bg;
    GrayImage i1 = bg;
    Mask prop_mask(roi.width(), roi.height(), 0);
    for (std::size_t i = 0; i < bg.data.size(); ++i) {
      if (m0.data[i]) i0.data[i] = pc.color;
      if (m1.data[i]) i1.data[i] = pc.color;
      prop_mask.data[i] = static_cast<std::uint8_t>(m0.data[i] | m1.data[i]);
    }
    events::EventFrame local = events::event_frame(events::trigger_events(i0, i1, pc.tau));
    std::uint64_t fired = 0;
    for (std::int8_t v : local.data) fired += (v != 0);
    events::drop_events(local, prop_mask, pc.p_miss, rng);

    for (int y = 0; y < local.height; ++y) {
      for (int x = 0; x < local.width; ++x) {
        const std::int8_t v = local.at(x, y);
        if (v != 0) sample.frame.at(roi.x0 + x, roi.y0 + y) = v;
      }
    }

    PropellerRecord rec;
    rec.center = p.center;
    rec.r_px = pc.r_px;
    rec.n_blades = pc.n_blades;
    rec.rpm = pc.rpm;
    rec.theta_hb = pc.theta_hb;
    rec.homography = hom;
    rec.color = pc.color;
    rec.tau = pc.tau;
    rec.p_noise = p_noise;
    rec.p_miss = pc.p_miss;
    rec.aliased = is_aliased(pc.rpm, config.dt_ms, pc.n_blades);
    rec.roll = pc.roll;
    rec.pitch = pc.pitch;
    rec.shape = pc.shape;
    rec.clean_events = fired;
    sample.propellers.push_back(rec);
    peaks.push_back({p.center, pc.r_px, config.label.sigma_ratio * pc.r_px});
  }

  events::inject_noise(sample.frame, p_noise, rng);
  sample.label = make_label(w, h, peaks, config.label.support_sigmas);
  return sample;
}

LabeledSample compose_frame(std::uint64_t seed, const BackgroundSource& backgrounds, const GeneratorConfig& config) {
  Rng rng(seed);
  LabeledSample s = compose_frame(rng, backgrounds, config);
  s.seed = seed;
  return s;
}

namespace {

json axis_json(const ParamAxis& a) { return {{"lo", a.lo}, {"hi", a.hi}, {"choices", a.choices}}; }

ParamAxis axis_from_json(const json& j, const std::string& ctx) {
  StrictReader r(j, ctx);
  ParamAxis a{r.get<double>("lo"), r.get<double>("hi"), r.get<std::vector<double>>("choices")};
  r.finish();
  return a;
}

}  // namespace

json to_json(const GeneratorConfig& c) {
  json presets = json::array();
  for (auto p : c.ranges.presets) presets.push_back(std::string(geometry::to_string(p)));
  return {
      {"width", c.width},
      {"height", c.height},
      {"min_propellers", c.min_propellers},
      {"max_propellers", c.max_propellers},
      {"dt_ms", c.dt_ms},
      {"view_focal", c.view_focal},
      {"backgrounds", c.backgrounds},
      {"label", {{"sigma_ratio", c.label.sigma_ratio}, {"support_sigmas", c.label.support_sigmas}}},
      {"ranges",
       {{"n_blades", axis_json(c.ranges.n_blades)},
        {"r_px", axis_json(c.ranges.r_px)},
        {"rpm", axis_json(c.ranges.rpm)},
        {"roll_deg", axis_json(c.ranges.roll_deg)},
        {"pitch_deg", axis_json(c.ranges.pitch_deg)},
        {"p_noise", axis_json(c.ranges.p_noise)},
        {"p_miss", axis_json(c.ranges.p_miss)},
        {"tau_mean", c.ranges.tau_mean},
        {"tau_std", c.ranges.tau_std},
        {"presets", presets}}},
  };
}

GeneratorConfig generator_config_from_json(const json& j) {
  StrictReader r(j, "generator");
  GeneratorConfig c;
  c.width = r.get<int>("width");
  c.height = r.get<int>("height");
  c.min_propellers = r.get<int>("min_propellers");
  c.max_propellers = r.get<int>("max_propellers");
  c.dt_ms = r.get<double>("dt_ms");
  c.view_focal = r.get<double>("view_focal");
  c.backgrounds = r.get<std::string>("backgrounds");
  {
    StrictReader l(r.at("label"), r.child("label"));
    c.label.sigma_ratio = l.get<double>("sigma_ratio");
    c.label.support_sigmas = l.get<double>("support_sigmas");
    l.finish();
  }
  {
    const std::string ctx = r.child("ranges");
    StrictReader g(r.at("ranges"), ctx);
    c.ranges.n_blades = axis_from_json(g.at("n_blades"), ctx + ".n_blades");
    c.ranges.r_px = axis_from_json(g.at("r_px"), ctx + ".r_px");
    c.ranges.rpm = axis_from_json(g.at("rpm"), ctx + ".rpm");
    c.ranges.roll_deg = axis_from_json(g.at("roll_deg"), ctx + ".roll_deg");
    c.ranges.pitch_deg = axis_from_json(g.at("pitch_deg"), ctx + ".pitch_deg");
    c.ranges.p_noise = axis_from_json(g.at("p_noise"), ctx + ".p_noise");
    c.ranges.p_miss = axis_from_json(g.at("p_miss"), ctx + ".p_miss");
    c.ranges.tau_mean = g.get<double>("tau_mean");
    c.ranges.tau_std = g.get<double>("tau_std");
    c.ranges.presets.clear();
    for (const auto& name : g.get<std::vector<std::string>>("presets")) {
      c.ranges.presets.push_back(geometry::shape_preset_from_string(name));
    }
    g.finish();
  }
  r.finish();
  c.validate();
  return c;
}

json to_json(const PropellerRecord& rec) {
  json hom = json::array();
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) hom.push_back(rec.homography(i, k));
  }
  return {
      {"center", {rec.center.x(), rec.center.y()}},
      {"r_px", rec.r_px},
      {"n_blades", rec.n_blades},
      {"rpm", rec.rpm},
      {"theta_hb_rad", rec.theta_hb},
      {"homography", hom},
      {"color", rec.color},
      {"tau", rec.tau},
      {"aliased", rec.aliased},
      {"p_noise", rec.p_noise},
      {"p_miss", rec.p_miss},
      {"roll_rad", rec.roll},
      {"pitch_rad", rec.pitch},
      {"shape", std::string(geometry::to_string(rec.shape))},
  };
}

PropellerRecord propeller_record_from_json(const json& j) {
  StrictReader r(j, "propeller");
  PropellerRecord rec;
  const auto center = r.get<std::vector<double>>("center");
  if (center.size() != 2) throw std::invalid_argument("propeller.center must have 2 entries");
  rec.center = {center[0], center[1]};
  rec.r_px = r.get<double>("r_px");
  rec.n_blades = r.get<int>("n_blades");
  rec.rpm = r.get<double>("rpm");
  rec.theta_hb = r.get<double>("theta_hb_rad");
  const auto hom = r.get<std::vector<double>>("homography");
  if (hom.size() != 9) throw std::invalid_argument("propeller.homography must have 9 entries");
  for (int i = 0; i < 9; ++i) rec.homography(i / 3, i % 3) = hom[static_cast<std::size_t>(i)];
  rec.color = r.get<int>("color");
  rec.tau = r.get<double>("tau");
  rec.aliased = r.get<bool>("aliased");
  rec.p_noise = r.get<double>("p_noise");
  rec.p_miss = r.get<double>("p_miss");
  rec.roll = r.get<double>("roll_rad");
  rec.pitch = r.get<double>("pitch_rad");
  rec.shape = geometry::shape_preset_from_string(r.get<std::string>("shape"));
  r.finish();
  return rec;
}

json sample_metadata(const LabeledSample& sample, std::uint64_t index) {
  json props = json::array();
  for (const auto& p : sample.propellers) props.push_back(to_json(p));
  return {
      {"index", index},
      {"seed", sample.seed},
      {"width", sample.frame.width},
      {"height", sample.frame.height},
      {"propellers", props},
  };
}

}  // namespace propforge::dataset
