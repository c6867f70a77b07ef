#include "propforge/track/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "propforge/common/json_fields.hpp"
#include "propforge/common/parallel.hpp"
#include "propforge/common/rng.hpp"
#include "propforge/common/sha256.hpp"

namespace propforge::track {

using nlohmann::json;
using std::numbers::pi;

std::string_view to_string(SimMode mode) { return mode == SimMode::Follow ? "follow" : "land"; }

SimMode sim_mode_from_string(std::string_view name) {
  if (name == "follow") return SimMode::Follow;
  if (name == "land") return SimMode::Land;
  throw std::invalid_argument("unknown simulation mode: " + std::string(name));
}

namespace {

std::string_view motion_name(TargetMotion m) {
  switch (m) {
    case TargetMotion::Hover: return "hover";
    case TargetMotion::Wander: return "wander";
    case TargetMotion::Jerk: return "jerk";
  }
  return "hover";
}

TargetMotion motion_from_string(const std::string& s) {
  if (s == "hover") return TargetMotion::Hover;
  if (s == "wander") return TargetMotion::Wander;
  if (s == "jerk") return TargetMotion::Jerk;
  throw std::invalid_argument("unknown target motion: " + s);
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("SimScenario: ") + what);
}

}  // namespace

void SimScenario::validate() const {
  require(camera.focal > 0.0 && camera.width > 1 && camera.height > 1, "camera must have positive size and focal");
  require(target.n_prop >= 1 && target.arm > 0.0, "target needs propellers on a positive arm");
  require(target.wander_speed >= 0.0 && target.land_wander_speed >= 0.0 && target.wander_time > 0.0, "wander must be non-negative with positive time");
  require(target.jerk_time >= 0.0, "jerk_time must be non-negative");
  require(detector.pixel_sigma >= 0.0 && detector.range_sigma >= 0.0, "detector noise must be non-negative");
  require(detector.dropout >= 0.0 && detector.dropout <= 1.0, "dropout must lie in [0, 1]");
  require(vehicle.lag > 0.0 && vehicle.damping >= 0.0 && vehicle.max_accel > 0.0, "vehicle parameters invalid");
  require(disturbance.sigma >= 0.0 && disturbance.decay >= 0.0 && disturbance.scale > 0.0, "disturbance invalid");
  tracker.validate();
  follow_gains.validate();
  land_gains.validate();
  land.validate();
  require(control_dt > 0.0, "control period must be positive");
  require(substeps >= 1, "substeps must be >= 1");
  require(follow_duration > 0.0 && land_timeout > 0.0, "durations must be positive");
  require(follow_separation > contact_height && land_separation > land.land_altitude, "start separations too small");
  require(initial_offset >= 0.0 && contact_height > 0.0, "offsets must be non-negative");
  require(pad_radius > 0.0 && tolerance > 0.0 && tolerance <= pad_radius, "need 0 < tolerance <= pad_radius");
  require(lost_frames >= 0, "lost_frames must be >= 0");
  require(noise >= 0.0, "noise must be non-negative");
}

SimScenario reference_scenario() {
  SimScenario s;
  s.follow_gains.roll = {0.02, 0.002, 0.012, 50.0, 6.0};
  s.follow_gains.pitch = s.follow_gains.roll;
  s.follow_gains.thrust = {0.0006, 0.0, 0.0004, 1000.0, 6.0};
  s.land_gains.roll = {0.012, 0.002, 0.01, 50.0, 6.0};
  s.land_gains.pitch = s.land_gains.roll;
  s.land_gains.thrust = {2.0, 0.5, 0.0, 2.0, 6.0};
  return s;
}

namespace {

json gains_json(const PidAxisGains& g) {
  return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}, {"integral_limit", g.integral_limit}, {"output_limit", g.output_limit}};
}

PidAxisGains gains_from(const json& j, const std::string& ctx) {
  StrictReader r(j, ctx);
  PidAxisGains g;
  g.kp = r.get<double>("kp");
  g.ki = r.get<double>("ki");
  g.kd = r.get<double>("kd");
  g.integral_limit = r.get<double>("integral_limit");
  g.output_limit = r.get<double>("output_limit");
  r.finish();
  return g;
}

json pid_json(const PidGains& g) {
  return {{"roll", gains_json(g.roll)}, {"pitch", gains_json(g.pitch)}, {"thrust", gains_json(g.thrust)}};
}

PidGains pid_from(const json& j, const std::string& ctx) {
  StrictReader r(j, ctx);
  PidGains g;
  g.roll = gains_from(r.at("roll"), r.child("roll"));
  g.pitch = gains_from(r.at("pitch"), r.child("pitch"));
  g.thrust = gains_from(r.at("thrust"), r.child("thrust"));
  r.finish();
  return g;
}

}  // namespace

json to_json(const SimScenario& s) {
  return {
      {"camera", {{"focal", s.camera.focal}, {"width", s.camera.width}, {"height", s.camera.height}}},
      {"target",
       {{"n_prop", s.target.n_prop},
        {"arm", s.target.arm},
        {"yaw", s.target.yaw},
        {"motion", motion_name(s.target.motion)},
        {"wander_speed", s.target.wander_speed},
        {"land_wander_speed", s.target.land_wander_speed},
        {"wander_time", s.target.wander_time},
        {"jerk_time", s.target.jerk_time},
        {"jerk_speed", s.target.jerk_speed}}},
      {"detector",
       {{"pixel_sigma", s.detector.pixel_sigma}, {"dropout", s.detector.dropout}, {"range_sigma", s.detector.range_sigma}}},
      {"vehicle", {{"lag", s.vehicle.lag}, {"damping", s.vehicle.damping}, {"max_accel", s.vehicle.max_accel}}},
      {"disturbance", {{"sigma", s.disturbance.sigma}, {"decay", s.disturbance.decay}, {"scale", s.disturbance.scale}}},
      {"tracker",
       {{"sigma_a", s.tracker.kf.sigma_a},
        {"meas_sigma", s.tracker.kf.meas_sigma},
        {"init_pos_sigma", s.tracker.kf.init_pos_sigma},
        {"init_vel_sigma", s.tracker.kf.init_vel_sigma},
        {"gate_px", s.tracker.gate_px},
        {"max_misses", s.tracker.max_misses},
        {"confirm_age", s.tracker.confirm_age}}},
      {"follow_gains", pid_json(s.follow_gains)},
      {"land_gains", pid_json(s.land_gains)},
      {"land",
       {{"align_px", s.land.align_px},
        {"land_altitude", s.land.land_altitude},
        {"descent_rate", s.land.descent_rate},
        {"explore_climb", s.land.explore_climb},
        {"max_lost", s.land.max_lost}}},
      {"control_dt", s.control_dt},
      {"substeps", s.substeps},
      {"follow_duration", s.follow_duration},
      {"land_timeout", s.land_timeout},
      {"follow_separation", s.follow_separation},
      {"land_separation", s.land_separation},
      {"initial_offset", s.initial_offset},
      {"contact_height", s.contact_height},
      {"pad_radius", s.pad_radius},
      {"tolerance", s.tolerance},
      {"lost_frames", s.lost_frames},
      {"noise", s.noise},
  };
}

SimScenario sim_scenario_from_json(const json& j) {
  StrictReader r(j, "scenario");
  SimScenario s;
  {
    StrictReader c(r.at("camera"), r.child("camera"));
    s.camera.focal = c.get<double>("focal");
    s.camera.width = c.get<int>("width");
    s.camera.height = c.get<int>("height");
    c.finish();
  }
  {
    StrictReader t(r.at("target"), r.child("target"));
    s.target.n_prop = t.get<int>("n_prop");
    s.target.arm = t.get<double>("arm");
    s.target.yaw = t.get<double>("yaw");
    s.target.motion = motion_from_string(t.get<std::string>("motion"));
    s.target.wander_speed = t.get<double>("wander_speed");
    s.target.land_wander_speed = t.get<double>("land_wander_speed");
    s.target.wander_time = t.get<double>("wander_time");
    s.target.jerk_time = t.get<double>("jerk_time");
    s.target.jerk_speed = t.get<double>("jerk_speed");
    t.finish();
  }
  {
    StrictReader d(r.at("detector"), r.child("detector"));
    s.detector.pixel_sigma = d.get<double>("pixel_sigma");
    s.detector.dropout = d.get<double>("dropout");
    s.detector.range_sigma = d.get<double>("range_sigma");
    d.finish();
  }
  {
    StrictReader v(r.at("vehicle"), r.child("vehicle"));
    s.vehicle.lag = v.get<double>("lag");
    s.vehicle.damping = v.get<double>("damping");
    s.vehicle.max_accel = v.get<double>("max_accel");
    v.finish();
  }
  {
    StrictReader d(r.at("disturbance"), r.child("disturbance"));
    s.disturbance.sigma = d.get<double>("sigma");
    s.disturbance.decay = d.get<double>("decay");
    s.disturbance.scale = d.get<double>("scale");
    d.finish();
  }
  {
    StrictReader t(r.at("tracker"), r.child("tracker"));
    s.tracker.kf.sigma_a = t.get<double>("sigma_a");
    s.tracker.kf.meas_sigma = t.get<double>("meas_sigma");
    s.tracker.kf.init_pos_sigma = t.get<double>("init_pos_sigma");
    s.tracker.kf.init_vel_sigma = t.get<double>("init_vel_sigma");
    s.tracker.gate_px = t.get<double>("gate_px");
    s.tracker.max_misses = t.get<int>("max_misses");
    s.tracker.confirm_age = t.get<int>("confirm_age");
    t.finish();
  }
  s.follow_gains = pid_from(r.at("follow_gains"), r.child("follow_gains"));
  s.land_gains = pid_from(r.at("land_gains"), r.child("land_gains"));
  {
    StrictReader l(r.at("land"), r.child("land"));
    s.land.align_px = l.get<double>("align_px");
    s.land.land_altitude = l.get<double>("land_altitude");
    s.land.descent_rate = l.get<double>("descent_rate");
    s.land.explore_climb = l.get<double>("explore_climb");
    s.land.max_lost = l.get<int>("max_lost");
    l.finish();
  }
  s.control_dt = r.get<double>("control_dt");
  s.substeps = r.get<int>("substeps");
  s.follow_duration = r.get<double>("follow_duration");
  s.land_timeout = r.get<double>("land_timeout");
  s.follow_separation = r.get<double>("follow_separation");
  s.land_separation = r.get<double>("land_separation");
  s.initial_offset = r.get<double>("initial_offset");
  s.contact_height = r.get<double>("contact_height");
  s.pad_radius = r.get<double>("pad_radius");
  s.tolerance = r.get<double>("tolerance");
  s.lost_frames = r.get<int>("lost_frames");
  s.noise = r.get<double>("noise");
  r.finish();
  s.validate();
  return s;
}

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

EpisodeResult simulate(const SimScenario& sc, SimMode mode, std::uint64_t seed, bool keep_trajectory) {
  sc.validate();
  Rng init_rng(derive_seed(seed, 0));
  Rng det_rng(derive_seed(seed, 1));
  Rng target_rng(derive_seed(seed, 2));
  Rng dist_rng(derive_seed(seed, 3));
  const double n = sc.noise;
  const bool follow = mode == SimMode::Follow;
  const double dt = sc.control_dt;
  const double h = dt / sc.substeps;
  const Point2 center((sc.camera.width - 1) / 2.0, (sc.camera.height - 1) / 2.0);

  Vec3 target = Vec3::Zero();
  Vec3 observer = Vec3::Zero();
  if (follow) {
    target.z() = sc.follow_separation;
  } else {
    observer.z() = sc.land_separation;
  }
  {
    const double r = sc.initial_offset * std::sqrt(init_rng.uniform());
    const double a = 2.0 * pi * init_rng.uniform();
    observer.x() += r * std::cos(a);
    observer.y() += r * std::sin(a);
  }
  Vec3 v_obs = Vec3::Zero();
  Vec3 a_obs = Vec3::Zero();
  Vec3 v_tgt = Vec3::Zero();
  Point2 disturbance = Point2::Zero();

  Tracker tracker(sc.tracker);
  FollowState fs;
  LandState ls;
  EpisodeResult res;
  res.trajectory = json::array();
  int lost_run = 0;
  bool done = false;
  const double duration = follow ? sc.follow_duration : sc.land_timeout;
  const auto steps = static_cast<long>(std::ceil(duration / dt - 1e-9));
  std::optional<DroneEstimate> last_estimate;
  Phase phase = Phase::Explore;

  for (long k = 0; k < steps && !done; ++k) {
    const double t = k * dt;
    const double sep = follow ? target.z() - observer.z() : observer.z() - target.z();

    // sense
    std::vector<Point2> detections;
    int visible = 0;
    for (int p = 0; p < sc.target.n_prop; ++p) {
      const double a = sc.target.yaw + 2.0 * pi * p / sc.target.n_prop;
      const double px = target.x() + sc.target.arm * std::cos(a);
      const double py = target.y() + sc.target.arm * std::sin(a);
      const double drop_draw = det_rng.uniform();
      const double nx = det_rng.normal();
      const double ny = det_rng.normal();
      if (!(sep > 0.0)) continue;
      const Point2 uv(center.x() + sc.camera.focal * (px - observer.x()) / sep,
                      center.y() + sc.camera.focal * (py - observer.y()) / sep);
      if (uv.x() < 0.0 || uv.y() < 0.0 || uv.x() > sc.camera.width - 1 || uv.y() > sc.camera.height - 1) continue;
      ++visible;
      if (drop_draw < n * sc.detector.dropout) continue;
      detections.emplace_back(uv.x() + n * sc.detector.pixel_sigma * nx, uv.y() + n * sc.detector.pixel_sigma * ny);
    }
    const double range_noise = dist_rng.normal();
    tracker.step(detections, k == 0 ? 0.0 : dt);
    const auto confident = tracker.confident_tracks();
    std::optional<DroneEstimate> est = drone_estimate(confident, 1);
    if (est && est->n_tracks < sc.target.n_prop) est.reset();
    last_estimate = est;

    // control
    ControlCommand cmd;
    if (follow) {
      if (est) {
        if (!fs.area_setpoint && est->area) fs.area_setpoint = est->area;
        cmd = follow_policy(loop_errors(*est, center, fs.area_setpoint), sc.follow_gains, fs, dt);
      }
    } else {
      LandInput in;
      if (est) in.errors = loop_errors(*est, center, std::nullopt);
      in.separation = sep + n * sc.detector.range_sigma * range_noise;
      in.closing_speed = -(v_obs.z() - v_tgt.z());
      const LandOutput out = land_policy(ls, in, sc.land_gains, sc.land, dt);
      cmd = out.command;
      phase = out.phase;
    }
    Vec3 a_cmd(cmd.u_roll, cmd.u_pitch, follow ? cmd.u_thrust : -cmd.u_thrust);
    for (int i = 0; i < 3; ++i) a_cmd[i] = std::clamp(a_cmd[i], -sc.vehicle.max_accel, sc.vehicle.max_accel);

    const double centroid_err = est ? (est->centroid - center).norm() : -1.0;
    if (follow) {
      lost_run = visible == 0 ? lost_run + 1 : 0;
      res.max_lost_run = std::max(res.max_lost_run, lost_run);
    }
    {
      json rec{{"t", t},
               {"observer", vec_json(observer)},
               {"target", vec_json(target)},
               {"command", {cmd.u_roll, cmd.u_pitch, cmd.u_thrust}},
               {"centroid_error", centroid_err}};
      json dets = json::array();
      for (const auto& d : detections) dets.push_back({d.x(), d.y()});
      rec["detections"] = std::move(dets);
      json tracks = json::array();
      for (const auto& tr : tracker.tracks()) {
        tracks.push_back({{"id", tr.id}, {"x", tr.x[0]}, {"y", tr.x[1]}, {"vx", tr.x[2]}, {"vy", tr.x[3]}});
      }
      rec["tracks"] = std::move(tracks);
      if (!follow) rec["phase"] = to_string(phase);
      res.trajectory.push_back(std::move(rec));
    }
    if (follow && lost_run > sc.lost_frames) {
      res.outcome = "target left the field of view";
      res.duration = t;
      done = true;
      break;
    }

    // physics
    const double lag_gain = 1.0 - std::exp(-h / sc.vehicle.lag);
    for (int s = 0; s < sc.substeps; ++s) {
      const double ts = t + s * h;
      a_obs += (a_cmd - a_obs) * lag_gain;
      Vec3 acc = a_obs - sc.vehicle.damping * v_obs;
      if (!follow) {
        const double cur_sep = std::max(0.0, observer.z() - target.z());
        const double g = sc.disturbance.scale / (cur_sep + sc.disturbance.scale);
        const double n1 = dist_rng.normal();
        const double n2 = dist_rng.normal();
        disturbance += -sc.disturbance.decay * disturbance * h +
                       n * sc.disturbance.sigma * g * std::sqrt(h) * Point2(n1, n2);
        acc.x() += disturbance.x();
        acc.y() += disturbance.y();
      }
      v_obs += acc * h;
      observer += v_obs * h;

      switch (sc.target.motion) {
        case TargetMotion::Hover: break;
        case TargetMotion::Wander: {
          const double tau = sc.target.wander_time;
          const double speed = follow ? sc.target.wander_speed : sc.target.land_wander_speed;
          const double amp = n * speed * std::sqrt(2.0 / tau) * std::sqrt(h);
          const double w1 = target_rng.normal();
          const double w2 = target_rng.normal();
          const double w3 = target_rng.normal();
          v_tgt += -v_tgt * (h / tau) + amp * Vec3(w1, w2, 0.3 * w3);
          break;
        }
        case TargetMotion::Jerk:
          if (ts >= sc.target.jerk_time) v_tgt = Vec3(sc.target.jerk_speed, 0.0, 0.0);
          break;
      }
      target += v_tgt * h;

      const double now_sep = follow ? target.z() - observer.z() : observer.z() - target.z();
      if (now_sep <= sc.contact_height) {
        const double lateral = (observer.head<2>() - target.head<2>()).norm();
        res.duration = ts + h;
        done = true;
        if (follow) {
          res.outcome = "collision";
        } else {
          res.touchdown_error = lateral;
          if (phase != Phase::Land) {
            res.outcome = "contact before landing phase";
          } else if (lateral <= sc.tolerance) {
            res.success = true;
            res.outcome = "landed";
          } else {
            res.outcome = lateral <= sc.pad_radius ? "landed outside tolerance" : "missed pad";
          }
        }
        break;
      }
    }
  }
  if (!done) {
    res.duration = steps * dt;
    if (follow) {
      res.success = true;
      res.outcome = "followed";
    } else {
      res.outcome = "timeout";
    }
  }
  res.final_centroid_error = last_estimate ? (last_estimate->centroid - center).norm() : -1.0;
  const json summary{{"success", res.success},
                     {"outcome", res.outcome},
                     {"touchdown_error", res.touchdown_error},
                     {"final_centroid_error", res.final_centroid_error},
                     {"duration", res.duration},
                     {"max_lost_run", res.max_lost_run},
                     {"trajectory", res.trajectory}};
  res.digest = sha256_hex(summary.dump());
  if (!keep_trajectory) res.trajectory = json::array();
  return res;
}

BatchResult simulate_batch(const SimScenario& scenario, SimMode mode, std::size_t episodes, std::uint64_t seed,
                           unsigned threads, bool keep_trajectories) {
  scenario.validate();
  BatchResult b;
  b.episodes.resize(episodes);
  parallel_for(
      episodes,
      [&](std::size_t i) { b.episodes[i] = simulate(scenario, mode, derive_seed(seed, i), keep_trajectories); },
      threads);
  std::string joined;
  for (const auto& e : b.episodes) {
    if (e.success) ++b.successes;
    joined += e.digest;
    joined += '\n';
  }
  b.success_rate = episodes ? static_cast<double>(b.successes) / static_cast<double>(episodes) : 0.0;
  b.digest = sha256_hex(joined);
  return b;
}

std::string centroid_error_csv(const EpisodeResult& episode) {
  std::ostringstream out;
  out << "time,centroid_error_px,phase\n";
  for (const auto& rec : episode.trajectory) {
    out << rec.at("t").get<double>() << ',' << rec.at("centroid_error").get<double>() << ','
        << (rec.contains("phase") ? rec.at("phase").get<std::string>() : std::string("FOLLOW")) << '\n';
  }
  return out.str();
}

}  // namespace propforge::track
