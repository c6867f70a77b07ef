#include "propforge/geometry/blade_shape.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "propforge/geometry/bspline.hpp"
#include "propforge/geometry/camera.hpp"

namespace propforge::geometry {

using std::numbers::pi;

void SplineBladeShape::validate() const {
  for (const auto& s : splines) {
    if (static_cast<int>(s.size()) < kDegree + 1) {
      throw std::invalid_argument("SplineBladeShape: each spline needs at least 4 control points");
    }
  }
  if (max_endpoint_gap() >= 1e-6) throw std::invalid_argument("SplineBladeShape: splines do not chain");
  if (!(hub_radius >= 0.0 && hub_radius < 1.0)) {
    throw std::invalid_argument("SplineBladeShape: hub radius must lie in [0, 1)");
  }
}

double SplineBladeShape::max_endpoint_gap() const {
  double gap = 0.0;
  for (std::size_t i = 0; i < splines.size(); ++i) {
    const auto& cur = splines[i];
    const auto& nxt = splines[(i + 1) % splines.size()];
    if (static_cast<int>(cur.size()) < kDegree + 1 || static_cast<int>(nxt.size()) < kDegree + 1) {
      throw std::invalid_argument("SplineBladeShape: each spline needs at least 4 control points");
    }
    const Point2 end = bspline_sample(cur, kDegree, 2, true).back();
    const Point2 start = bspline_sample(nxt, kDegree, 1, false).front();
    gap = std::max(gap, (end - start).norm());
  }
  return gap;
}

namespace {

/// Least-squares cubic fit through `samples` with clamped (tripled) ends.
std::vector<Point2> fit_clamped_spline(const std::vector<Point2>& samples, int free_points) {
  constexpr int k = SplineBladeShape::kDegree;
  const int n_ctrl = free_points + 6;
  const Point2 first = samples.front();
  const Point2 last = samples.back();

  std::vector<double> arclen(samples.size(), 0.0);
  for (std::size_t j = 1; j < samples.size(); ++j) arclen[j] = arclen[j - 1] + (samples[j] - samples[j - 1]).norm();
  const double total = arclen.back();

  std::vector<Point2> control(static_cast<std::size_t>(n_ctrl), first);
  for (int i = n_ctrl - 3; i < n_ctrl; ++i) control[static_cast<std::size_t>(i)] = last;
  if (total <= 0.0) return control;

  const auto knots = uniform_knots(n_ctrl, k);
  const auto [lo, hi] = valid_span(knots, k);
  const int rows = static_cast<int>(samples.size()) - 2;
  if (rows < free_points) throw std::invalid_argument("fit_clamped_spline: too few samples");

  Eigen::MatrixXd a(rows, free_points);
  Eigen::MatrixXd b(rows, 2);
  for (int r = 0; r < rows; ++r) {
    const std::size_t j = static_cast<std::size_t>(r + 1);
    const double t = lo + (hi - lo) * arclen[j] / total;
    Point2 rhs = samples[j];
    for (int i = 0; i < n_ctrl; ++i) {
      const double w = bspline_basis(i, k, t, knots);
      if (i >= 3 && i < 3 + free_points) {
        a(r, i - 3) = w;
      } else {
        rhs -= w * control[static_cast<std::size_t>(i)];
      }
    }
    b.row(r) = rhs.transpose();
  }
  const Eigen::MatrixXd sol = a.colPivHouseholderQr().solve(b);
  for (int i = 0; i < free_points; ++i) control[static_cast<std::size_t>(3 + i)] = sol.row(i).transpose();
  return control;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

SplineBladeShape fit_blade_shape(const PropellerSpec& spec, int free_points) {
  spec.validate();
  if (free_points < 1) throw std::invalid_argument("fit_blade_shape: need at least one free control point");
  constexpr int kDense = 24;
  constexpr double kTipStart = 0.9;

  const double distance = 40.0 * spec.radius;
  const CameraRig rig = shaft_aligned_rig(distance, 1000.0, 1000, 1000);
  const double px_per_radius = rig.focal * spec.radius / distance;
  const auto to_shape = [&](const Point3& x) {
    const Point2 px = project(rig, x);
    return Point2((px.x() - rig.cx) / px_per_radius, -(px.y() - rig.cy) / px_per_radius);
  };

  const double rho_hub = std::max(spec.hub_radius / spec.radius, 0.05);
  const auto lead = [&](double rho) { return to_shape(edge_points(spec, rho * spec.radius, 0.0).leading); };
  const auto trail = [&](double rho) { return to_shape(edge_points(spec, rho * spec.radius, 0.0).trailing); };

  SplineBladeShape shape;
  shape.hub_radius = spec.hub_radius / spec.radius;

  // hub arc: trailing root to leading root
  {
    const Point2 t0 = trail(rho_hub);
    const Point2 l0 = lead(rho_hub);
    const double a0 = std::atan2(t0.y(), t0.x());
    double a1 = std::atan2(l0.y(), l0.x());
    if (a1 < a0) a1 += 2.0 * pi;
    std::vector<Point2> pts;
    for (double a : linspace(a0, a1, kDense)) {
      const double rad = (a == a0) ? t0.norm() : (a == a1 ? l0.norm() : rho_hub);
      pts.emplace_back(rad * std::cos(a), rad * std::sin(a));
    }
    pts.front() = t0;
    pts.back() = l0;
    shape.splines[0] = fit_clamped_spline(pts, free_points);
  }
  // leading edge, root to tip start
  {
    std::vector<Point2> pts;
    for (double rho : linspace(rho_hub, kTipStart, kDense)) pts.push_back(lead(rho));
    shape.splines[1] = fit_clamped_spline(pts, free_points);
  }
  // tip: up the leading edge, across the tip, down the trailing edge
  {
    std::vector<Point2> pts;
    for (double rho : linspace(kTipStart, 1.0, kDense / 2)) pts.push_back(lead(rho));
    const Point2 l1 = lead(1.0);
    const Point2 t1 = trail(1.0);
    if ((l1 - t1).norm() > 1e-9) {
      const double a0 = std::atan2(l1.y(), l1.x());
      const double a1 = std::atan2(t1.y(), t1.x());
      const auto across = linspace(a0, a1, kDense / 2);
      for (std::size_t i = 1; i + 1 < across.size(); ++i) {
        pts.emplace_back(std::cos(across[i]) * l1.norm(), std::sin(across[i]) * l1.norm());
      }
    }
    const auto down = linspace(1.0, kTipStart, kDense / 2);
    for (std::size_t i = 0; i < down.size(); ++i) {
      if (i == 0 && (l1 - t1).norm() <= 1e-9) continue;
      pts.push_back(trail(down[i]));
    }
    shape.splines[2] = fit_clamped_spline(pts, free_points);
  }
  // trailing edge, tip start to root
  {
    std::vector<Point2> pts;
    for (double rho : linspace(kTipStart, rho_hub, kDense)) pts.push_back(trail(rho));
    shape.splines[3] = fit_clamped_spline(pts, free_points);
  }
  shape.validate();
  return shape;
}

PropellerSpec default_propeller_spec() {
  PropellerSpec spec;
  spec.pitch = 114.3;  // 5x4.5 hobby propeller
  spec.radius = 63.5;
  spec.rake = 0.0;
  spec.skew = 0.0;
  spec.chord = {0.25 * 63.5, 0.0};
  spec.n_blades = 3;
  spec.hub_radius = 8.0;
  return spec;
}

std::string_view to_string(ShapePreset preset) {
  switch (preset) {
    case ShapePreset::Fitted: return "fitted";
    case ShapePreset::Normal: return "normal";
    case ShapePreset::Bullnose: return "bullnose";
  }
  return "fitted";
}

ShapePreset shape_preset_from_string(std::string_view name) {
  if (name == "fitted") return ShapePreset::Fitted;
  if (name == "normal") return ShapePreset::Normal;
  if (name == "bullnose") return ShapePreset::Bullnose;
  throw std::invalid_argument("unknown shape preset: " + std::string(name));
}

const SplineBladeShape& preset_shape(ShapePreset preset) {
  switch (preset) {
    case ShapePreset::Fitted: {
      static const SplineBladeShape fitted = fit_blade_shape(default_propeller_spec());
      return fitted;
    }
    case ShapePreset::Normal: {
      static const SplineBladeShape normal = [] {
        PropellerSpec spec = default_propeller_spec();
        spec.pitch = 127.0;
        spec.chord = {0.2 * spec.radius, 0.0};
        spec.hub_radius = 7.0;
        return fit_blade_shape(spec);
      }();
      return normal;
    }
    case ShapePreset::Bullnose: {
      static const SplineBladeShape bullnose = [] {
        PropellerSpec spec = default_propeller_spec();
        spec.pitch = 101.6;
        spec.chord = {0.26 * spec.radius, 0.7};
        spec.hub_radius = 9.0;
        return fit_blade_shape(spec);
      }();
      return bullnose;
    }
  }
  throw std::invalid_argument("unknown shape preset");
}

ClosedContour blade_outline(const SplineBladeShape& shape, double theta_hb, int samples_per_spline) {
  shape.validate();
  if (samples_per_spline < 2) throw std::invalid_argument("blade_outline: need at least 2 samples per spline");
  const double c = std::cos(theta_hb);
  const double s = std::sin(theta_hb);
  ClosedContour out;
  out.reserve(4 * static_cast<std::size_t>(samples_per_spline));
  for (const auto& control : shape.splines) {
    for (const Point2& p : bspline_sample(control, SplineBladeShape::kDegree, samples_per_spline, false)) {
      out.emplace_back(c * p.x() - s * p.y(), s * p.x() + c * p.y());
    }
  }
  return out;
}

std::vector<ClosedContour> propeller_outline(const SplineBladeShape& shape, int n_blades, double theta_hb,
                                             int samples_per_spline) {
  if (n_blades < 2 || n_blades > 6) throw std::invalid_argument("propeller_outline: n_blades must be in [2, 6]");
  std::vector<ClosedContour> out;
  out.reserve(static_cast<std::size_t>(n_blades) + 1);
  const ClosedContour base = blade_outline(shape, 0.0, samples_per_spline);
  for (int b = 0; b < n_blades; ++b) {
    const double a = theta_hb + 2.0 * pi * b / n_blades;
    const double c = std::cos(a);
    const double s = std::sin(a);
    ClosedContour blade;
    blade.reserve(base.size());
    for (const Point2& p : base) blade.emplace_back(c * p.x() - s * p.y(), s * p.x() + c * p.y());
    out.push_back(std::move(blade));
  }
  ClosedContour hub;
  hub.reserve(kHubVertices);
  for (int k = 0; k < kHubVertices; ++k) {
    const double a = theta_hb + 2.0 * pi * k / kHubVertices;
    hub.emplace_back(shape.hub_radius * std::cos(a), shape.hub_radius * std::sin(a));
  }
  out.push_back(std::move(hub));
  return out;
}

std::vector<ClosedContour> rotate_contours(const std::vector<ClosedContour>& contours, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::vector<ClosedContour> out;
  out.reserve(contours.size());
  for (const auto& contour : contours) {
    ClosedContour r;
    r.reserve(contour.size());
    for (const Point2& p : contour) r.emplace_back(c * p.x() - s * p.y(), s * p.x() + c * p.y());
    out.push_back(std::move(r));
  }
  return out;
}

double signed_area(const ClosedContour& contour) {
  double twice = 0.0;
  for (std::size_t i = 0; i < contour.size(); ++i) {
    const Point2& a = contour[i];
    const Point2& b = contour[(i + 1) % contour.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

}  // namespace propforge::geometry
