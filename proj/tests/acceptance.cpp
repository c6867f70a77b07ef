// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
//
//   propforge_acceptance [--workdir DIR] [--only NAME]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "propforge/common/io.hpp"
#include "propforge/common/rng.hpp"
#include "propforge/dataset/background.hpp"
#include "propforge/dataset/compose.hpp"
#include "propforge/dataset/dataset.hpp"
#include "propforge/eval/area.hpp"
#include "propforge/eval/detection.hpp"
#include "propforge/events/corruption.hpp"
#include "propforge/events/event_synth.hpp"
#include "propforge/geometry/blade_shape.hpp"
#include "propforge/geometry/bspline.hpp"
#include "propforge/geometry/camera.hpp"
#include "propforge/geometry/propeller_model.hpp"
#include "propforge/track/kalman.hpp"
#include "propforge/track/sim.hpp"
#include "propforge/track/tracker.hpp"

using namespace propforge;
using geometry::Point2;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass{true};
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- geometry -------------------------------------------------------------

void geometry_check(Outcome& o) {
  Rng rng(2024);
  double helix_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.uniform(10.0, 300.0);
    const double r = rng.uniform(1.0, 150.0);
    const double phi = rng.uniform(-4.0 * pi, 4.0 * pi);
    const auto a = geometry::helicoidal_point(p, r, phi);
    const auto b = geometry::helicoidal_point(p, r, phi + 2.0 * pi);
    helix_err = std::max({helix_err, std::abs(b.x() - a.x() - p), std::abs(b.y() - a.y()), std::abs(b.z() - a.z()),
                          std::abs(a.x() - p * phi / (2.0 * pi))});
  }

  double pou_err = 0.0;
  for (auto preset : {geometry::ShapePreset::Fitted, geometry::ShapePreset::Normal, geometry::ShapePreset::Bullnose}) {
    for (const auto& spline : geometry::preset_shape(preset).splines) {
      const int n = static_cast<int>(spline.size());
      const auto knots = geometry::uniform_knots(n, 3);
      const auto [lo, hi] = geometry::valid_span(knots, 3);
      for (int s = 0; s <= 2000; ++s) {
        const double t = std::min(hi, lo + (hi - lo) * s / 2000.0);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += geometry::bspline_basis(i, 3, t, knots);
        pou_err = std::max(pou_err, std::abs(sum - 1.0));
      }
    }
  }

  // 3 blades at 60 px radius
  const auto outline = geometry::propeller_outline(geometry::preset_shape(geometry::ShapePreset::Fitted), 3, 0.3);
  const auto rotated = geometry::rotate_contours(outline, 2.0 * pi / 3.0);
  std::vector<Point2> a, b;
  for (const auto& c : outline)
    for (const auto& p : c) a.push_back(60.0 * p);
  for (const auto& c : rotated)
    for (const auto& p : c) b.push_back(60.0 * p);
  auto directed = [](const std::vector<Point2>& x, const std::vector<Point2>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = INFINITY;
      for (const auto& q : y) best = std::min(best, (p - q).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  const double hausdorff = std::max(directed(a, b), directed(b, a));

  o.detail << "helix max err " << helix_err << ", partition of unity max err " << pou_err
           << ", 3-blade Hausdorff " << hausdorff << " px";
  o.require(helix_err < 1e-9, "helix");
  o.require(pou_err < 1e-9, "partition of unity");
  o.require(hausdorff < 1e-6, "rotational symmetry");
}

// ---- events ---------------------------------------------------------------

events::Scene random_scene(std::uint64_t seed) {
  Rng rng(seed);
  dataset::ProceduralBackground bg;
  events::Scene s;
  s.background = bg.patch(rng, 160, 120);
  events::PlacedPropeller p;
  p.shape = geometry::preset_shape(geometry::ShapePreset::Fitted);
  p.n_blades = static_cast<int>(rng.uniform_int(2, 6));
  p.theta_hb = rng.uniform(0.0, 2.0 * pi);
  p.rpm = rng.uniform(5000.0, 40000.0);
  p.homography = geometry::view_homography({80, 60}, rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 500.0);
  p.scale = rng.uniform(20.0, 50.0);
  p.color = static_cast<std::uint8_t>(rng.uniform_int(0, 80));
  s.propellers.push_back(p);
  return s;
}

void events_check(Outcome& o) {
  std::size_t identical_events = 0;
  int violations = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto scene = random_scene(k);
    const auto [i0, i1] = events::render_pair(scene, 0.005);
    identical_events += events::trigger_events(i0, i0, 0.05).events.size();
    std::size_t prev = SIZE_MAX;
    for (double tau : {0.05, 0.1, 0.2, 0.3, 0.5}) {
      const auto n = events::trigger_events(i0, i1, tau).events.size();
      if (n > prev) ++violations;
      prev = n;
    }
  }
  events::EventFrame f(3, 1);
  f.data = {-1, 0, 1};
  const auto q = events::quantize_frame(f);
  const bool quant_ok = q.data == std::vector<std::uint8_t>{0, 127, 255};
  o.detail << "identical-pair events " << identical_events << ", monotonicity violations " << violations
           << " over 20x5, quantize {-1,0,1} -> {" << int(q.data[0]) << "," << int(q.data[1]) << ","
           << int(q.data[2]) << "}";
  o.require(identical_events == 0, "identical pair");
  o.require(violations == 0, "monotone in tau");
  o.require(quant_ok, "quantize");
}

// ---- analysis -------------------------------------------------------------

void drone_dr_check(Outcome& o) {
  const double published[] = {97.7, 99.6, 99.9};
  for (int eta = 2; eta <= 4; ++eta) {
    const double pct = 100.0 * eval::drone_dr(0.851, eta);
    char buf[64];
    std::snprintf(buf, sizeof buf, "eta=%d %.2f%% ", eta, pct);
    o.detail << buf;
    o.require(std::abs(pct - published[eta - 2]) <= 0.1, "eta=" + std::to_string(eta) + " within 0.1 pp");
  }
  o.require(std::abs(100.0 * eval::drone_dr(0.851, 2) - 97.78) < 0.005, "97.78");
  o.require(std::abs(100.0 * eval::drone_dr(0.851, 3) - 99.67) < 0.005, "99.67");
  o.require(std::abs(100.0 * eval::drone_dr(0.851, 4) - 99.95) < 0.005, "99.95");
}

void area_check(Outcome& o) {
  const double direct[] = {107.91551324481686321, 49.220830836454887663, 68.116399664594409433};
  const auto drones = eval::reference_drones();
  double worst_scale = 0.0;
  for (std::size_t i = 0; i < drones.size(); ++i) {
    const auto& d = drones[i];
    const double ratio = eval::area_ratio(d.geometry);
    const double rel = ratio / d.published_ratio - 1.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s %.4f vs %.1f (%+.2f%%); ", d.geometry.name.c_str(), ratio, d.published_ratio,
                  100.0 * rel);
    o.detail << buf;
    o.require(std::abs(rel) < 0.05, d.geometry.name + " within 5%");
    o.require(std::abs(ratio / direct[i] - 1.0) < 1e-12, d.geometry.name + " direct value");
    for (double k : {1e-3, 0.5, 3.0, 1e3}) {
      auto g = d.geometry;
      g.S *= k;
      g.r *= k;
      g.r_m *= k;
      worst_scale = std::max(worst_scale, std::abs(eval::area_ratio(g) / ratio - 1.0));
    }
  }
  o.detail << "scale invariance max rel err " << worst_scale;
  o.require(worst_scale < 1e-9, "scale invariance");
}

// ---- dataset --------------------------------------------------------------

void dataset_check(Outcome& o, const fs::path& work) {
  const fs::path a = work / "dataset_a";
  const fs::path b = work / "dataset_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const auto t0 = std::chrono::steady_clock::now();
  dataset::generate_dataset(1000, 7, a);
  const double t_first = seconds_since(t0);
  dataset::generate_dataset(1000, 7, b);
  const bool identical = read_file(a / "manifest.json") == read_file(b / "manifest.json");
  const auto report = dataset::verify_dataset(a);

  std::size_t props = 0, far = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto s = dataset::load_sample(a, i);
    for (const auto& p : s.propellers) {
      ++props;
      const int r = static_cast<int>(std::ceil(p.r_px));
      const int cx = static_cast<int>(std::lround(p.center.x())), cy = static_cast<int>(std::lround(p.center.y()));
      float best = -1.0f;
      Point2 at = p.center;
      for (int y = cy - r; y <= cy + r; ++y)
        for (int x = cx - r; x <= cx + r; ++x)
          if (s.label.contains(x, y) && s.label.at(x, y) > best) {
            best = s.label.at(x, y);
            at = {double(x), double(y)};
          }
      const double d = (at - p.center).norm();
      worst = std::max(worst, d);
      if (d > 1.0) ++far;
    }
  }
  o.detail << "manifests " << (identical ? "identical" : "DIFFER") << ", first run " << t_first << " s, verify "
           << report.files_checked << " files " << (report.ok ? "ok" : "BAD") << ", " << props
           << " label peaks, max argmax offset " << worst << " px";
  o.require(identical, "byte-identical manifests");
  o.require(report.ok, "verify");
  o.require(t_first < 600.0, "< 10 min");
  o.require(far == 0, "argmax within 1 px");
  fs::remove_all(b);
}

void metric_loop_check(Outcome& o) {
  dataset::ProceduralBackground bg;
  const dataset::GeneratorConfig cfg;
  std::vector<bool> all;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto s = dataset::compose_frame(derive_seed(99, i), bg, cfg);
    std::vector<eval::GroundTruth> truths;
    for (const auto& p : s.propellers) truths.push_back({p.center, p.r_px});
    const auto dets = eval::heatmap_to_detections(s.label);
    const auto m = eval::match_detections(truths, dets);
    all.insert(all.end(), m.begin(), m.end());
  }
  const double dr = eval::detection_rate(all);
  o.detail << "oracle DR " << 100.0 * dr << "% over " << all.size() << " propellers in 500 samples";
  o.require(dr == 1.0, "DR = 100%");
}

// ---- tracking -------------------------------------------------------------

void tracking_check(Outcome& o) {
  track::KalmanParams kp;
  const double dt = 1.0 / 30.0;
  double kf_err = 0.0;
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Point2 truth{rng.uniform(0, 640), rng.uniform(0, 480)};
    const Point2 v{rng.uniform(-200, 200), rng.uniform(-200, 200)};
    auto t = track::kf_init(truth, kp);
    for (int k = 0; k < 50; ++k) {
      truth += v * dt;
      t = track::kf_update(track::kf_predict(t, dt, kp), truth, kp);
    }
    kf_err = std::max(kf_err, (t.position() - truth).norm());
  }

  double area_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> ang(4);
    for (auto& x : ang) x = rng.uniform(0.0, 2.0 * pi);
    std::sort(ang.begin(), ang.end());
    const Point2 c{rng.uniform(-300, 300), rng.uniform(-300, 300)};
    const double rx = rng.uniform(5, 200), ry = rng.uniform(5, 200);
    std::vector<Point2> q;
    for (double x : ang) q.push_back(c + Point2(rx * std::cos(x), ry * std::sin(x)));
    double fan = 0.0;
    for (int k = 1; k < 3; ++k) {
      const Point2 u = q[k] - q[0], w = q[k + 1] - q[0];
      fan += 0.5 * (u.x() * w.y() - u.y() * w.x());
    }
    std::swap(q[1], q[3]);
    area_err = std::max(area_err, std::abs(track::polygon_area(q) - std::abs(fan)) / std::max(1.0, std::abs(fan)));
  }
  o.detail << "KF max error after 50 steps " << kf_err << " px, polygon area max rel err " << area_err;
  o.require(kf_err < 1e-6, "KF");
  o.require(area_err < 1e-9, "polygon area");
}

void closed_loop_check(Outcome& o) {
  auto quiet = track::reference_scenario();
  quiet.noise = 0.0;
  const auto follow = track::simulate(quiet, track::SimMode::Follow, 1);
  double at10 = -1.0, after = 0.0;
  for (const auto& rec : follow.trajectory) {
    const double t = rec["t"].get<double>();
    const double e = rec["centroid_error"].get<double>();
    if (t <= 10.0 + 1e-9) at10 = e;
    else after = std::max(after, e < 0.0 ? INFINITY : e);
  }
  const auto land = track::simulate(quiet, track::SimMode::Land, 1);

  const auto ref = track::reference_scenario();
  const auto fb = track::simulate_batch(ref, track::SimMode::Follow, 50, 1);
  const auto lb = track::simulate_batch(ref, track::SimMode::Land, 50, 1);
  const bool det = track::simulate_batch(ref, track::SimMode::Follow, 50, 1, 1).digest == fb.digest &&
                   track::simulate_batch(ref, track::SimMode::Land, 50, 1, 1).digest == lb.digest;

  char buf[320];
  std::snprintf(buf, sizeof buf,
                "noise-free follow error %.3f px at 10 s (max after %.3f), noise-free land touchdown %.2f mm, "
                "noisy follow %zu/50, noisy land %zu/50, deterministic %s",
                at10, after, 1000.0 * land.touchdown_error, fb.successes, lb.successes, det ? "yes" : "no");
  o.detail << buf;
  o.require(at10 >= 0.0 && at10 < 2.0 && after < 2.0, "follow < 2 px within 10 s");
  o.require(land.success && land.touchdown_error >= 0.0 && land.touchdown_error < 0.030, "land < 30 mm");
  o.require(fb.success_rate >= 0.9, "follow >= 90%");
  o.require(lb.success_rate >= 0.9, "land >= 90%");
  o.require(det, "deterministic");
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "propforge_acceptance";
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--workdir") && i + 1 < argc) {
      work = argv[++i];
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--workdir DIR] [--only NAME]\n", argv[0]);
      return 2;
    }
  }
  fs::create_directories(work);

  const std::vector<Criterion> criteria{
      {"geometry", 5.0, geometry_check},
      {"event-model", 10.0, events_check},
      {"drone-dr", 1.0, drone_dr_check},
      {"area-analysis", 1.0, area_check},
      {"dataset", 600.0, [&](Outcome& o) { dataset_check(o, work); }},
      {"metric-closed-loop", 600.0, metric_loop_check},
      {"tracking", 5.0, tracking_check},
      {"closed-loop", 120.0, closed_loop_check},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only != c.name) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double t = seconds_since(t0);
    if (t > c.budget_s) {
      o.pass = false;
      o.detail << " [over time budget " << c.budget_s << " s]";
    }
    failed += !o.pass;
    std::printf("%s %-19s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.name, t, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
