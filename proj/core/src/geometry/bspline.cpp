#include "propforge/geometry/bspline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace propforge::geometry {

std::vector<double> uniform_knots(int n_control, int degree) {
  if (degree < 0) throw std::invalid_argument("uniform_knots: negative degree");
  if (n_control < degree + 1) {
    throw std::invalid_argument("B-spline of degree " + std::to_string(degree) + " needs at least " +
                                std::to_string(degree + 1) + " control points");
  }
  const int m = n_control + degree;  // index of the last knot
  std::vector<double> knots(static_cast<std::size_t>(m + 1));
  for (int j = 0; j <= m; ++j) knots[static_cast<std::size_t>(j)] = static_cast<double>(j) / m;
  return knots;
}

std::pair<double, double> valid_span(std::span<const double> knots, int degree) {
  const int m = static_cast<int>(knots.size()) - 1;
  if (degree < 0 || m - degree <= degree) throw std::invalid_argument("valid_span: too few knots");
  return {knots[static_cast<std::size_t>(degree)], knots[static_cast<std::size_t>(m - degree)]};
}

namespace {

double basis_rec(int i, int k, double t, std::span<const double> knots, int closed_interval) {
  const auto at = [&](int j) { return knots[static_cast<std::size_t>(j)]; };
  if (k == 0) {
    // the span end belongs to the last non-empty interval only
    if (t >= at(closed_interval + 1)) return i == closed_interval ? 1.0 : 0.0;
    return (t >= at(i) && t < at(i + 1)) ? 1.0 : 0.0;
  }
  double left = 0.0;
  const double d1 = at(i + k) - at(i);
  if (d1 > 0.0) left = (t - at(i)) / d1 * basis_rec(i, k - 1, t, knots, closed_interval);
  double right = 0.0;
  const double d2 = at(i + k + 1) - at(i + 1);
  if (d2 > 0.0) right = (at(i + k + 1) - t) / d2 * basis_rec(i + 1, k - 1, t, knots, closed_interval);
  return left + right;
}

int last_nonempty_interval(std::span<const double> knots, int degree) {
  const int m = static_cast<int>(knots.size()) - 1;
  for (int j = m - degree - 1; j >= degree; --j) {
    if (knots[static_cast<std::size_t>(j + 1)] > knots[static_cast<std::size_t>(j)]) return j;
  }
  return m - degree - 1;
}

}  // namespace

double bspline_basis(int i, int degree, double t, std::span<const double> knots) {
  const int m = static_cast<int>(knots.size()) - 1;
  if (i < 0 || i + degree + 1 > m) throw std::out_of_range("bspline_basis: index out of range");
  const auto [lo, hi] = valid_span(knots, degree);
  if (!(t >= lo && t <= hi)) throw std::out_of_range("bspline_basis: parameter outside valid span");
  return basis_rec(i, degree, t, knots, last_nonempty_interval(knots, degree));
}

Point2 bspline_eval(std::span<const Point2> control, int degree, double t) {
  const auto knots = uniform_knots(static_cast<int>(control.size()), degree);
  Point2 s = Point2::Zero();
  for (std::size_t i = 0; i < control.size(); ++i) {
    s += control[i] * bspline_basis(static_cast<int>(i), degree, t, knots);
  }
  return s;
}

std::vector<Point2> bspline_sample(std::span<const Point2> control, int degree, int count, bool include_end) {
  if (count < 1) throw std::invalid_argument("bspline_sample: count must be positive");
  const auto knots = uniform_knots(static_cast<int>(control.size()), degree);
  const auto [lo, hi] = valid_span(knots, degree);
  const int last = (include_end && count > 1) ? count - 1 : count;
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const double t = (j == last) ? hi : lo + (hi - lo) * static_cast<double>(j) / last;
    Point2 s = Point2::Zero();
    for (std::size_t i = 0; i < control.size(); ++i) {
      s += control[i] * bspline_basis(static_cast<int>(i), degree, t, knots);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace propforge::geometry
