#include <benchmark/benchmark.h>

#include "propforge/common/rng.hpp"
#include "propforge/dataset/background.hpp"
#include "propforge/dataset/compose.hpp"
#include "propforge/eval/detection.hpp"
#include "propforge/eval/sweep.hpp"
#include "propforge/geometry/blade_shape.hpp"
#include "propforge/geometry/camera.hpp"
#include "propforge/geometry/raster.hpp"
#include "propforge/track/kalman.hpp"
#include "propforge/track/sim.hpp"

using namespace propforge;

static void BM_ComposeFrame(benchmark::State& state) {
  dataset::ProceduralBackground bg;
  const dataset::GeneratorConfig cfg;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dataset::compose_frame(seed++, bg, cfg));
}
BENCHMARK(BM_ComposeFrame)->Unit(benchmark::kMillisecond);

static void BM_Rasterize(benchmark::State& state) {
  const auto outline =
      geometry::propeller_outline(geometry::preset_shape(geometry::ShapePreset::Fitted), 3, 0.2);
  const auto h = geometry::view_homography({320, 240}, 0.3, -0.2, 500.0);
  const double scale = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(geometry::rasterize_mask(outline, h, scale, 640, 480));
}
BENCHMARK(BM_Rasterize)->Arg(20)->Arg(60)->Arg(120);

static void BM_HeatmapToDetections(benchmark::State& state) {
  dataset::ProceduralBackground bg;
  const auto s = dataset::compose_frame(1, bg, dataset::GeneratorConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(eval::heatmap_to_detections(s.label));
}
BENCHMARK(BM_HeatmapToDetections);

static void BM_BaselineHeatmap(benchmark::State& state) {
  dataset::ProceduralBackground bg;
  const auto s = dataset::compose_frame(1, bg, dataset::GeneratorConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(eval::baseline_heatmap(s.frame));
}
BENCHMARK(BM_BaselineHeatmap);

static void BM_KalmanCycle(benchmark::State& state) {
  const track::KalmanParams p;
  auto t = track::kf_init({100, 100}, p);
  Rng rng(1);
  for (auto _ : state) {
    t = track::kf_update(track::kf_predict(t, 1.0 / 30.0, p), {100 + rng.normal(), 100 + rng.normal()}, p);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_KalmanCycle);

static void BM_LandEpisode(benchmark::State& state) {
  const auto sc = track::reference_scenario();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(track::simulate(sc, track::SimMode::Land, seed++, false));
}
BENCHMARK(BM_LandEpisode)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
