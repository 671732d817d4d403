#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bernapprox/expr.hpp"
#include "bernapprox/polynomial.hpp"
#include "bernapprox/rational.hpp"

namespace bernapprox {

struct Interval {
  Rational lo;
  Rational hi;
};

using Box = std::vector<Interval>;

Box unit_box(std::size_t dim);
/// [lo, hi]^dim.
Box cube(const Rational& lo, const Rational& hi, std::size_t dim);

/// Uniform tensor grid over a box: per axis lo + (hi - lo) * i / (g - 1),
/// i = 0..g-1, so the corners are included. Points are enumerated in
/// row-major order with axis 0 slowest.
class Grid {
 public:
  Grid(Box box, std::size_t per_axis);

  std::size_t dim() const noexcept { return box_.size(); }
  std::size_t per_axis() const noexcept { return per_axis_; }
  std::size_t size() const noexcept { return size_; }
  const Box& box() const noexcept { return box_; }
  const std::vector<Rational>& axis(std::size_t j) const { return axes_[j]; }

  std::vector<Rational> point(std::size_t flat) const;
  std::vector<double> point_f64(std::size_t flat) const;

 private:
  Box box_;
  std::size_t per_axis_;
  std::size_t size_;
  std::vector<std::vector<Rational>> axes_;
};

/// Exact values of p at every grid point, in grid order.
std::vector<Rational> evaluate_on_grid(const Polynomial& p, const Grid& grid);
/// Float values of e at every grid point; throws EvaluationError on poles.
std::vector<double> evaluate_on_grid(const Expression& e, const Grid& grid);

/// Exact max |p| over the grid points.
Rational sup_norm_exact(const Polynomial& p, const Grid& grid);

// Grid maxima are lower bounds on the true sup norm: estimates, never
// certificates.
double sup_norm_estimate(const Polynomial& p, const Grid& grid);
double sup_norm_estimate(const Expression& e, const Grid& grid);
double sup_norm_estimate(const Polynomial& p, const Box& box, std::size_t per_axis);
double sup_norm_estimate(const Expression& e, const Box& box, std::size_t per_axis);

struct ErrorEstimate {
  double estimate = 0.0;
  /// Set when the whole computation ran in exact arithmetic.
  std::optional<Rational> exact;
};

/// max over the grid of |p - f|. Exact when f is a rational expression,
/// float (with p evaluated exactly, then rounded) otherwise.
ErrorEstimate sup_error(const Polynomial& p, const Expression& f, const Grid& grid);
/// max over the grid of |f|, exact when f is a rational expression.
ErrorEstimate sup_norm(const Expression& f, const Grid& grid);

}  // namespace bernapprox
