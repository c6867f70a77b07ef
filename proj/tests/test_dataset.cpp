#include <doctest.h>

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "propforge/common/io.hpp"
#include "propforge/common/png_io.hpp"
#include "propforge/dataset/background.hpp"
#include "propforge/dataset/compose.hpp"
#include "propforge/dataset/dataset.hpp"
#include "propforge/dataset/label.hpp"
#include "propforge/events/corruption.hpp"
#include "temp_dir.hpp"

using namespace propforge;
using namespace propforge::dataset;

namespace {

GeneratorConfig small_config() {
  GeneratorConfig c;
  c.width = 160;
  c.height = 120;
  c.max_propellers = 4;
  c.ranges.r_px = ParamAxis::range(12.0, 24.0);
  return c;
}

// pixel of the largest label value within r_px of the center
Point2 local_argmax(const Heatmap& h, const PropellerRecord& p) {
  Point2 best = p.center;
  float v = -1.0f;
  const int r = static_cast<int>(std::ceil(p.r_px));
  for (int y = static_cast<int>(p.center.y()) - r; y <= static_cast<int>(p.center.y()) + r; ++y)
    for (int x = static_cast<int>(p.center.x()) - r; x <= static_cast<int>(p.center.x()) + r; ++x)
      if (h.contains(x, y) && h.at(x, y) > v) {
        v = h.at(x, y);
        best = {double(x), double(y)};
      }
  return best;
}

}  // namespace

TEST_CASE("label peaks at the center with sigma from the radius") {
  const std::vector<Point2> c{{10, 12}};
  const std::vector<double> r{8.0};
  const Heatmap h = make_label(32, 32, c, r, LabelConfig{});
  CHECK(h.at(10, 12) == 1.0f);
  CHECK(h.at(12, 12) == doctest::Approx(std::exp(-4.0 / (2.0 * 4.0))));
  CHECK(h.at(31, 31) == 0.0f);
  const std::vector<Point2> out{{40, 0}};
  CHECK_THROWS_AS(make_label(32, 32, out, r, LabelConfig{}), std::out_of_range);
  const std::vector<LabelPeak> bad{{{1, 1}, 4.0, 0.0}};
  CHECK_THROWS_AS(make_label(8, 8, bad), std::invalid_argument);
}

TEST_CASE("label quantization contract") {
  Heatmap h(6, 1);
  h.data = {0.0f, 0.5f / 255.0f, 1.49f / 255.0f, 1.51f / 255.0f, 0.5f, 1.0f};
  const GrayImage q = quantize_label(h);
  CHECK(q.data == std::vector<std::uint8_t>{0, 0, 0, 1, 127, 254});
  const Heatmap back = dequantize_label(q);
  CHECK(back.data[0] == 0.0f);
  CHECK(back.data[3] == doctest::Approx(2.0 / 255.0));
  CHECK(back.data[5] == 1.0f);
  // every level decodes into the interval that produces it
  GrayImage all(256, 1);
  for (int i = 0; i < 256; ++i) all.data[i] = static_cast<std::uint8_t>(i);
  const GrayImage again = quantize_label(dequantize_label(all));
  for (int i = 0; i < 255; ++i) CHECK(again.data[i] == i);
  CHECK(again.data[255] == 254);
  h.data[0] = 1.5f;
  CHECK_THROWS_AS(quantize_label(h), std::invalid_argument);
}

TEST_CASE("sampling draws within the envelope") {
  Rng rng(4);
  SamplingRanges ranges;
  for (int i = 0; i < 500; ++i) {
    const auto p = sample_propeller_config(rng, ranges);
    CHECK(p.n_blades >= 2);
    CHECK(p.n_blades <= 6);
    CHECK(p.r_px >= 20.0);
    CHECK(p.r_px <= 60.0);
    CHECK(p.tau >= kMinTau);
    CHECK(std::abs(p.roll) <= 60.0 * 3.15 / 180.0);
  }
  ParamAxis bad = ParamAxis::range(2.0, 1.0);
  CHECK_THROWS_AS(bad.validate("x"), std::invalid_argument);
  CHECK(ParamAxis::fixed(3.0).draw(rng) == 3.0);
}

TEST_CASE("compose is deterministic and labels every placed propeller") {
  ProceduralBackground bg;
  const auto cfg = small_config();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = compose_frame(seed, bg, cfg);
    const auto b = compose_frame(seed, bg, cfg);
    CHECK(a.frame == b.frame);
    CHECK(a.label == b.label);
    CHECK(a.propellers == b.propellers);
    CHECK_NOTHROW(events::check_ternary(a.frame));
    for (const auto& p : a.propellers) {
      CHECK(a.label.at(int(p.center.x()), int(p.center.y())) == 1.0f);
      CHECK((local_argmax(a.label, p) - p.center).norm() <= 1.0);
      CHECK(p.aliased == is_aliased(p.rpm, cfg.dt_ms, p.n_blades));
    }
  }
}

TEST_CASE("aliasing threshold") {
  // 2 blades: half a turn in 5 ms is 6000 rpm
  CHECK_FALSE(is_aliased(5999.0, 5.0, 2));
  CHECK(is_aliased(6000.0, 5.0, 2));
}

TEST_CASE("generator config and record json round trip") {
  const auto cfg = small_config();
  const auto back = generator_config_from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
  auto j = to_json(cfg);
  j["surprise"] = 1;
  CHECK_THROWS(generator_config_from_json(j));
  j.erase("surprise");
  j.erase("width");
  CHECK_THROWS(generator_config_from_json(j));
}

TEST_CASE("sample file naming") {
  CHECK(sample_file_name(7, "frame", "png") == "samples/000007.frame.png");
  CHECK(sample_file_name(123456, "meta", "json") == "samples/123456.meta.json");
  CHECK(sample_seed(7, 0) == derive_seed(7, 0));
}

TEST_CASE("generated dataset is reproducible, verifiable and loads back") {
  TempDir a("ds_a"), b("ds_b");
  const auto cfg = small_config();
  const auto ma = generate_dataset(6, 7, a.path(), cfg, 1);
  const auto mb = generate_dataset(6, 7, b.path(), cfg, 3);
  CHECK(manifest_text(ma) == manifest_text(mb));
  CHECK(read_file(a / "manifest.json") == read_file(b / "manifest.json"));
  CHECK(manifest_text(read_manifest(a.path())) == manifest_text(ma));

  const auto report = verify_dataset(a.path());
  CHECK(report.ok);
  CHECK(report.files_checked == 18);

  ProceduralBackground bg;
  for (std::uint64_t i = 0; i < 6; ++i) {
    const auto s = compose_frame(sample_seed(7, i), bg, cfg);
    const auto loaded = load_sample(a.path(), i);
    CHECK(loaded.frame == s.frame);
    CHECK(quantize_label(loaded.label) == quantize_label(s.label));
    REQUIRE(loaded.propellers.size() == s.propellers.size());
    for (std::size_t k = 0; k < s.propellers.size(); ++k) {
      auto expect = s.propellers[k];
      expect.clean_events = 0;
      CHECK(loaded.propellers[k] == expect);
    }
  }

  // tampering is caught
  {
    std::ofstream f(a / sample_file_name(2, "label", "png"), std::ios::app | std::ios::binary);
    f << 'x';
  }
  const auto bad = verify_dataset(a.path());
  CHECK_FALSE(bad.ok);
  CHECK(bad.problems.size() == 1);
}

TEST_CASE("empty dataset") {
  TempDir d("ds_empty");
  const auto m = generate_dataset(0, 1, d.path(), small_config());
  CHECK(m.samples.empty());
  CHECK(verify_dataset(d.path()).ok);
}

TEST_CASE("image directory backgrounds") {
  TempDir d("bg");
  CHECK_THROWS_AS(ImageDirectoryBackground(d.path()), std::runtime_error);
  GrayImage img(20, 10);
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<std::uint8_t>(i % 250);
  write_png(d / "a.png", img);
  ImageDirectoryBackground src(d.path());
  CHECK(src.image_count() == 1);
  Rng rng(1);
  const auto p = src.patch(rng, 50, 30);
  CHECK(p.width == 50);
  CHECK(p.height == 30);
  for (auto v : p.data) CHECK(v >= 1);
  CHECK(make_background_source("procedural")->describe() == "procedural");
}
