#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "propforge/common/rng.hpp"
#include "propforge/events/corruption.hpp"
#include "propforge/events/event_synth.hpp"
#include "propforge/geometry/camera.hpp"

using namespace propforge;
using namespace propforge::events;

namespace {

Scene random_scene(std::uint64_t seed) {
  Rng rng(seed);
  Scene s;
  s.background = GrayImage(96, 72);
  for (auto& v : s.background.data) v = static_cast<std::uint8_t>(rng.uniform_int(40, 240));
  PlacedPropeller p;
  p.shape = geometry::preset_shape(geometry::ShapePreset::Fitted);
  p.n_blades = static_cast<int>(rng.uniform_int(2, 6));
  p.theta_hb = rng.uniform(0.0, 2.0 * std::numbers::pi);
  p.rpm = rng.uniform(5000.0, 30000.0);
  p.homography = geometry::translation_homography(48, 36);
  p.scale = rng.uniform(15.0, 30.0);
  p.color = static_cast<std::uint8_t>(rng.uniform_int(0, 60));
  s.propellers.push_back(p);
  return s;
}

}  // namespace

TEST_CASE("identical images fire no events") {
  const Scene s = random_scene(3);
  const GrayImage img = render(s, 0.0);
  for (double tau : {0.0001, 0.1, 0.5}) CHECK(trigger_events(img, img, tau).empty());
}

TEST_CASE("event count is non-increasing in the threshold") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [a, b] = render_pair(random_scene(seed), 0.005);
    std::size_t prev = SIZE_MAX;
    for (double tau : {0.05, 0.1, 0.2, 0.4, 0.8}) {
      const auto n = trigger_events(a, b, tau).events.size();
      CHECK(n <= prev);
      prev = n;
    }
  }
}

TEST_CASE("polarity follows the log intensity drop") {
  GrayImage a(2, 1), b(2, 1);
  a.data = {100, 100};
  b.data = {50, 200};
  const auto cloud = trigger_events(a, b, 0.5, 7.0);
  REQUIRE(cloud.events.size() == 2);
  CHECK(cloud.events[0].polarity == 1);   // log(100) - log(50) > 0
  CHECK(cloud.events[1].polarity == -1);
  CHECK(cloud.events[0].t_us == 7.0);
  // |log 2| = 0.693 sits below a threshold of 0.7
  CHECK(trigger_events(a, b, 0.7).empty());
  // zero intensities are clamped to 1 before the log
  a.data = {0, 1};
  b.data = {1, 0};
  CHECK(trigger_events(a, b, 0.01).empty());
  CHECK_THROWS_AS(trigger_events(GrayImage(2, 2), GrayImage(3, 2), 0.1), std::invalid_argument);
}

TEST_CASE("event frame takes the sign of the mean polarity") {
  EventCloud c{3, 1, {{0, 0, 0, 1}, {0, 0, 1, 1}, {0, 0, 2, -1}, {1, 0, 0, 1}, {1, 0, 1, -1}}};
  const auto f = event_frame(c);
  CHECK(f.at(0, 0) == 1);
  CHECK(f.at(1, 0) == 0);
  CHECK(f.at(2, 0) == 0);
}

TEST_CASE("quantize_frame maps polarities to 0, 127, 255") {
  EventFrame f(3, 1);
  f.data = {-1, 0, 1};
  const auto q = quantize_frame(f);
  CHECK(q.data == std::vector<std::uint8_t>{0, 127, 255});
  CHECK(dequantize_frame(q) == f);
  GrayImage bad(1, 1, 128);
  CHECK_THROWS_AS(dequantize_frame(bad), std::invalid_argument);
  f.data[0] = 2;
  CHECK_THROWS_AS(check_ternary(f), std::invalid_argument);
}

TEST_CASE("rotation per window") {
  CHECK(rpm_to_rad_per_s(60.0) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(delta_theta(10000.0, 5.0) == doctest::Approx(10000.0 / 60.0 * 2.0 * std::numbers::pi * 0.005));
  EventSynthConfig cfg;
  cfg.micro_steps = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("micro-step sweep is time ordered") {
  EventSynthConfig cfg;
  cfg.micro_steps = 4;
  auto cloud = event_cloud_sweep(random_scene(5), cfg);
  REQUIRE_FALSE(cloud.empty());
  for (std::size_t i = 1; i < cloud.events.size(); ++i) CHECK(cloud.events[i - 1].t_us <= cloud.events[i].t_us);
  CHECK(cloud.events.back().t_us < cfg.dt_ms * 1000.0);
}

TEST_CASE("corruption extremes") {
  EventFrame f(20, 20, 1);
  Mask all(20, 20, 1);
  CorruptionConfig miss{0.0, 1.0, 9};
  for (auto v : corrupt(f, all, miss).data) CHECK(v == 0);
  CorruptionConfig none{0.0, 0.0, 9};
  CHECK(corrupt(f, all, none) == f);
  CorruptionConfig noise{1.0, 0.0, 9};
  EventFrame zero(20, 20, 0);
  const auto noisy = corrupt(zero, Mask(20, 20, 0), noise);
  int plus = 0;
  for (auto v : noisy.data) {
    CHECK(v != 0);
    plus += v > 0;
  }
  CHECK(plus > 100);
  CHECK(plus < 300);
  CHECK(corrupt(zero, all, noise) == noisy);  // draws never depend on content
  CorruptionConfig bad{1.5, 0.0, 0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
