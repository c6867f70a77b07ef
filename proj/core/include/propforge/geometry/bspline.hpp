#pragma once

#include <span>
#include <utility>
#include <vector>

#include "propforge/geometry/propeller_model.hpp"

namespace propforge::geometry {

/// m + 1 = n_control + degree + 1 knots uniformly spaced on [0, 1].
std::vector<double> uniform_knots(int n_control, int degree);

/// Valid parameter span [t_k, t_{m-k}] for a knot vector and degree.
std::pair<double, double> valid_span(std::span<const double> knots, int degree);

/// Cox-de Boor basis N_{i,k}(t), with 0/0 terms taken as 0. The degree-0
/// indicator is half-open [t_i, t_{i+1}) except on the last non-empty
/// interval of the valid span, which is closed so the right end of the
/// span is covered. Throws std::out_of_range when t lies outside the
/// valid span.
double bspline_basis(int i, int degree, double t, std::span<const double> knots);

/// s(t) = sum_i p_i N_{i,k}(t) over uniform knots.
Point2 bspline_eval(std::span<const Point2> control, int degree, double t);

/// `count` points at evenly spaced parameters across the valid span; the
/// end of the span is included only when `include_end` is set.
std::vector<Point2> bspline_sample(std::span<const Point2> control, int degree, int count, bool include_end);

}  // namespace propforge::geometry
