#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "propforge/common/rng.hpp"
#include "propforge/track/kalman.hpp"
#include "propforge/track/pid.hpp"
#include "propforge/track/policy.hpp"
#include "propforge/track/sim.hpp"
#include "propforge/track/tracker.hpp"

using namespace propforge;
using namespace propforge::track;

namespace {

double fan_area(const std::vector<Point2>& ccw) {
  double a = 0.0;
  for (std::size_t i = 1; i + 1 < ccw.size(); ++i) {
    const Point2 u = ccw[i] - ccw[0], v = ccw[i + 1] - ccw[0];
    a += 0.5 * (u.x() * v.y() - u.y() * v.x());
  }
  return std::abs(a);
}

double centroid_error_at(const EpisodeResult& r, double t) {
  double e = -1.0;
  for (const auto& rec : r.trajectory)
    if (rec["t"].get<double>() <= t + 1e-9) e = rec["centroid_error"].get<double>();
  return e;
}

}  // namespace

TEST_CASE("process noise blocks") {
  const Mat4 q = process_noise(0.1, 2.0);
  CHECK(q(0, 0) == doctest::Approx(4.0 * 0.001 / 3.0));
  CHECK(q(0, 2) == doctest::Approx(4.0 * 0.01 / 2.0));
  CHECK(q(2, 2) == doctest::Approx(4.0 * 0.1));
  CHECK(q(0, 1) == 0.0);
  CHECK((q - q.transpose()).norm() == 0.0);
}

TEST_CASE("kalman predict and update by hand") {
  KalmanParams p;
  auto t = kf_init({10, 20}, p, 3);
  CHECK(t.id == 3);
  CHECK(t.P(0, 0) == doctest::Approx(4.0));
  CHECK(t.P(2, 2) == doctest::Approx(40000.0));
  t.x << 10, 20, 30, -60;
  const auto pr = kf_predict(t, 0.5, Mat4::Zero());
  CHECK(pr.position().isApprox(Point2(25, -10)));
  CHECK(pr.P(0, 0) == doctest::Approx(4.0 + 0.25 * 40000.0));
  // scalar check of the position gain on x
  const double s = pr.P(0, 0) + 4.0;
  const auto up = kf_update(pr, {27, -10}, 4.0);
  CHECK(up.x[0] == doctest::Approx(25.0 + pr.P(0, 0) / s * 2.0));
  CHECK(up.P(0, 0) == doctest::Approx(pr.P(0, 0) * 4.0 / s));
  CHECK_THROWS_AS(kf_predict(t, 0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(kf_update(t, {NAN, 0}, p), std::invalid_argument);
}

TEST_CASE("noise-free constant velocity is tracked to machine precision") {
  KalmanParams p;
  const Point2 v{37.0, -21.5};
  const double dt = 1.0 / 30.0;
  Point2 truth{100.0, 200.0};
  auto t = kf_init(truth, p);
  for (int k = 0; k < 50; ++k) {
    truth += v * dt;
    t = kf_update(kf_predict(t, dt, p), truth, p);
  }
  CHECK((t.position() - truth).norm() < 1e-6);
}

TEST_CASE("covariance stays symmetric positive definite") {
  KalmanParams p;
  Rng rng(2);
  auto t = kf_init({0, 0}, p);
  for (int k = 0; k < 10000; ++k) {
    t = kf_predict(t, rng.uniform(0.001, 0.2), p);
    if (rng.bernoulli(0.7)) t = kf_update(t, {rng.normal(0, 50), rng.normal(0, 50)}, p);
    CHECK((t.P - t.P.transpose()).norm() == 0.0);
  }
  Eigen::SelfAdjointEigenSolver<Mat4> es(t.P);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("association ignores detection order") {
  KalmanParams p;
  std::vector<TrackState> tracks{kf_init({0, 0}, p), kf_init({10, 0}, p), kf_init({100, 100}, p)};
  std::vector<Point2> dets{{1, 0}, {9, 0}, {300, 300}, {5, 0}};
  const auto base = associate(tracks, dets, 20.0);
  CHECK(base == std::vector<int>{0, 1, -1, -1});
  std::vector<int> order{0, 1, 2, 3};
  do {
    std::vector<Point2> perm;
    for (int i : order) perm.push_back(dets[i]);
    const auto a = associate(tracks, perm, 20.0);
    for (int k = 0; k < 4; ++k) CHECK(a[k] == base[order[k]]);
  } while (std::next_permutation(order.begin(), order.end()));
  // equidistant detections go to the lower track index first
  CHECK(associate(tracks, std::vector<Point2>{{5, 0}}, 20.0) == std::vector<int>{0});
}

TEST_CASE("tracker spawns, confirms and prunes") {
  TrackerParams tp;
  tp.max_misses = 2;
  Tracker tr(tp);
  const std::vector<Point2> dets{{10, 10}, {50, 50}};
  tr.step(dets, 0.0);
  CHECK(tr.tracks().size() == 2);
  CHECK(tr.confident_tracks().empty());
  tr.step(dets, 0.1);
  CHECK(tr.tracks().size() == 2);
  CHECK(tr.confident_tracks().size() == 2);
  for (int k = 0; k < 3; ++k) tr.step(std::vector<Point2>{{10, 10}}, 0.1);
  CHECK(tr.tracks().size() == 1);
  tr.reset();
  CHECK(tr.tracks().empty());
}

TEST_CASE("square area and centroid") {
  const std::vector<Point2> sq{{0, 0}, {2, 2}, {2, 0}, {0, 2}};
  CHECK(polygon_area(sq) == doctest::Approx(4.0));
  CHECK(polygon_centroid(sq).isApprox(Point2(1, 1)));
  const std::vector<Point2> two{{0, 0}, {4, 2}};
  CHECK(polygon_area(two) == 0.0);
  CHECK(polygon_centroid(two).isApprox(Point2(2, 1)));
}

TEST_CASE("polygon area matches a fan triangulation on random convex quads") {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> ang(4);
    for (auto& a : ang) a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::sort(ang.begin(), ang.end());
    const Point2 c{rng.uniform(-300, 300), rng.uniform(-300, 300)};
    const double rx = rng.uniform(5, 200), ry = rng.uniform(5, 200);
    std::vector<Point2> ccw;
    for (double a : ang) ccw.push_back(c + Point2(rx * std::cos(a), ry * std::sin(a)));
    const double oracle = fan_area(ccw);
    std::vector<Point2> shuffled = ccw;
    std::swap(shuffled[0], shuffled[2]);
    CHECK(std::abs(polygon_area(shuffled) - oracle) <= 1e-9 * std::max(1.0, oracle));
  }
}

TEST_CASE("drone estimate needs qualified tracks") {
  KalmanParams p;
  std::vector<TrackState> ts{kf_init({0, 0}, p), kf_init({10, 0}, p), kf_init({10, 10}, p), kf_init({0, 10}, p)};
  for (auto& t : ts) t.age = 3;
  const auto e = drone_estimate(ts, 2);
  REQUIRE(e);
  CHECK(e->n_tracks == 4);
  CHECK(*e->area == doctest::Approx(100.0));
  CHECK(e->centroid.isApprox(Point2(5, 5)));
  CHECK_FALSE(drone_estimate(ts, 4).has_value());
  const auto pair = drone_estimate(std::span(ts).first(2), 1);
  REQUIRE(pair);
  CHECK_FALSE(pair->area.has_value());
}

TEST_CASE("pid step") {
  PidAxisGains g{2.0, 1.0, 0.5, 0.3, 10.0};
  PidState s;
  CHECK(pid_step(g, s, 1.0, 0.1) == doctest::Approx(2.0 + 0.1));
  CHECK(pid_step(g, s, 0.5, 0.1) == doctest::Approx(1.0 + 0.15 + 0.5 * (-5.0)));
  for (int i = 0; i < 100; ++i) pid_step(g, s, 1.0, 0.1);
  CHECK(s.integral == doctest::Approx(0.3));
  g.output_limit = 1.0;
  CHECK(pid_step(g, s, 100.0, 0.1) == 1.0);
  CHECK_THROWS_AS(pid_step(g, s, 1.0, 0.0), std::invalid_argument);
  g.kp = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("follow policy is at rest on target") {
  const auto gains = reference_scenario().follow_gains;
  FollowState st;
  DroneEstimate est{{320, 240}, 5000.0, 4};
  for (int i = 0; i < 5; ++i) {
    const auto cmd = follow_policy(loop_errors(est, {320, 240}, 5000.0), gains, st, 1.0 / 30.0);
    CHECK(cmd.u_roll == 0.0);
    CHECK(cmd.u_pitch == 0.0);
    CHECK(cmd.u_thrust == 0.0);
  }
  est.centroid = {300, 240};
  const auto left = follow_policy(loop_errors(est, {320, 240}, std::nullopt), gains, st, 1.0 / 30.0);
  CHECK(left.u_roll < 0.0);
  CHECK(left.u_thrust == 0.0);
}

TEST_CASE("landing transitions") {
  const Phase all[] = {Phase::Explore, Phase::Align, Phase::Descend, Phase::Land};
  for (Phase ph : all)
    for (int bits = 0; bits < 16; ++bits) {
      const bool have = bits & 1, aligned = bits & 2, below = bits & 4, lost = bits & 8;
      if (lost && have) continue;  // lost means no estimate for a while
      const Phase next = land_transition(ph, have, aligned, below, lost);
      if (ph == Phase::Explore) CHECK((next == Phase::Explore || next == Phase::Align));
      if (ph == Phase::Land) CHECK(next == Phase::Land);
      if (lost && ph != Phase::Land) CHECK(next == Phase::Explore);
      if (next == Phase::Land) CHECK((ph == Phase::Land || (ph == Phase::Descend && have && aligned && below)));
      if (next == Phase::Descend && ph != Phase::Descend) CHECK((ph == Phase::Align && have && aligned));
    }
  CHECK(land_transition(Phase::Explore, true, true, true, false) == Phase::Align);
  CHECK(land_transition(Phase::Descend, false, false, false, false) == Phase::Descend);
  CHECK(land_transition(Phase::Descend, true, false, true, false) == Phase::Align);
  CHECK(to_string(Phase::Descend) == "DESCEND");
}

TEST_CASE("scenario json round trip is strict") {
  const auto sc = reference_scenario();
  const auto j = to_json(sc);
  CHECK(to_json(sim_scenario_from_json(j)) == j);
  auto bad = j;
  bad["vehicle"]["mass"] = 1.0;
  CHECK_THROWS(sim_scenario_from_json(bad));
  CHECK(sim_mode_from_string("follow") == SimMode::Follow);
  CHECK_THROWS(sim_mode_from_string("orbit"));
}

TEST_CASE("noise-free follow regulates the centroid") {
  auto sc = reference_scenario();
  sc.noise = 0.0;
  const auto r = simulate(sc, SimMode::Follow, 1);
  CHECK(r.success);
  const double e = centroid_error_at(r, 10.0);
  CHECK(e >= 0.0);
  CHECK(e < 2.0);
}

TEST_CASE("noise-free landing is within tolerance") {
  auto sc = reference_scenario();
  sc.noise = 0.0;
  const auto r = simulate(sc, SimMode::Land, 1);
  CHECK(r.success);
  CHECK(r.outcome == "landed");
  CHECK(r.touchdown_error >= 0.0);
  CHECK(r.touchdown_error < 0.030);
}

TEST_CASE("episodes are deterministic per seed") {
  const auto sc = reference_scenario();
  for (auto mode : {SimMode::Follow, SimMode::Land}) {
    const auto a = simulate(sc, mode, 5);
    const auto b = simulate(sc, mode, 5);
    CHECK(a.digest == b.digest);
    CHECK(a.trajectory == b.trajectory);
    CHECK(simulate(sc, mode, 6).digest != a.digest);
    CHECK(simulate_batch(sc, mode, 4, 9, 1).digest == simulate_batch(sc, mode, 4, 9, 3).digest);
  }
}

TEST_CASE("a target that bolts is lost") {
  auto sc = reference_scenario();
  sc.noise = 0.0;
  sc.target.motion = TargetMotion::Jerk;
  const auto r = simulate(sc, SimMode::Follow, 1);
  CHECK_FALSE(r.success);
  CHECK(r.outcome == "target left the field of view");
  CHECK(r.max_lost_run > sc.lost_frames);
}

TEST_CASE("centroid error csv") {
  auto sc = reference_scenario();
  sc.noise = 0.0;
  const auto r = simulate(sc, SimMode::Land, 1);
  const auto csv = centroid_error_csv(r);
  CHECK(csv.rfind("time,centroid_error_px,phase\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == r.trajectory.size() + 1);
}
