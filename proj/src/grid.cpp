#include "bernapprox/grid.hpp"

#include <algorithm>
#include <cmath>

#include "bernapprox/errors.hpp"

namespace bernapprox {

Box unit_box(std::size_t dim) { return cube(0, 1, dim); }

Box cube(const Rational& lo, const Rational& hi, std::size_t dim) {
  if (dim == 0) throw PreconditionError("box dimension must be at least 1");
  return Box(dim, Interval{lo, hi});
}

Grid::Grid(Box box, std::size_t per_axis) : box_(std::move(box)), per_axis_(per_axis), size_(1) {
  if (box_.empty()) throw PreconditionError("grid dimension must be at least 1");
  if (per_axis_ < 2) throw PreconditionError("grid needs at least 2 points per axis");
  axes_.resize(box_.size());
  for (std::size_t j = 0; j < box_.size(); ++j) {
    const auto& [lo, hi] = box_[j];
    if (hi < lo) throw PreconditionError("empty interval in grid box");
    axes_[j].reserve(per_axis_);
    for (std::size_t i = 0; i < per_axis_; ++i) {
      Rational t(static_cast<unsigned long>(i), static_cast<unsigned long>(per_axis_ - 1));
      t.canonicalize();
      axes_[j].push_back(lo + (hi - lo) * t);
    }
    size_ *= per_axis_;
  }
}

std::vector<Rational> Grid::point(std::size_t flat) const {
  std::vector<Rational> x(dim());
  for (std::size_t j = dim(); j-- > 0;) {
    x[j] = axes_[j][flat % per_axis_];
    flat /= per_axis_;
  }
  return x;
}

std::vector<double> Grid::point_f64(std::size_t flat) const {
  std::vector<double> x(dim());
  for (std::size_t j = dim(); j-- > 0;) {
    x[j] = to_double(axes_[j][flat % per_axis_]);
    flat /= per_axis_;
  }
  return x;
}

namespace {

// Integer values V over the grid and a common positive scale S such that
// p(point_i) = V_i / S.
struct ScaledValues {
  std::vector<Integer> values;
  Integer scale;
};

ScaledValues evaluate_scaled(const Polynomial& p, const Grid& grid) {
  if (p.dim() != grid.dim()) throw DimensionMismatch(p.dim(), grid.dim());
  const std::size_t d = p.dim();
  const std::size_t g = grid.per_axis();
  ScaledValues out;
  if (p.is_zero()) {
    out.values.assign(grid.size(), Integer(0));
    out.scale = 1;
    return out;
  }

  // Dense integer coefficient tensor, row-major over exponents.
  const MultiIndex deg = p.degree_bound();
  std::vector<std::size_t> extent(d);
  for (std::size_t j = 0; j < d; ++j) extent[j] = deg[j] + 1;
  std::size_t total = 1;
  for (auto e : extent) total *= e;

  Integer coeff_lcm = 1;
  for (const auto& [e, c] : p.terms()) {
    mpz_lcm(coeff_lcm.get_mpz_t(), coeff_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  std::vector<Integer> tensor(total);
  for (const auto& [e, c] : p.terms()) {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < d; ++j) flat = flat * extent[j] + e[j];
    tensor[flat] = c.get_num() * (coeff_lcm / c.get_den());
  }
  Integer scale = coeff_lcm;

  // Eliminate one axis at a time. Before step j the tensor has shape
  // [g]^j x [extent_j] x [extent_{j+1}] ... ; after it, [g]^{j+1} x ...
  std::size_t outer = 1;
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t inner = 1;
    for (std::size_t i = j + 1; i < d; ++i) inner *= extent[i];
    const std::size_t deg_j = extent[j] - 1;

    const auto& axis = grid.axis(j);
    Integer den = 1;
    for (const auto& x : axis) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> nums(g);
    for (std::size_t i = 0; i < g; ++i) nums[i] = axis[i].get_num() * (den / axis[i].get_den());
    std::vector<Integer> den_pow(deg_j + 1);
    den_pow[0] = 1;
    for (std::size_t k = 1; k <= deg_j; ++k) den_pow[k] = den_pow[k - 1] * den;

    std::vector<Integer> next(outer * g * inner);
    std::vector<Integer> scaled(deg_j + 1);
    Integer acc;
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t t = 0; t < inner; ++t) {
        // c_k * den^(deg - k), so Horner on the numerators stays integral.
        for (std::size_t k = 0; k <= deg_j; ++k) {
          scaled[k] = tensor[(o * extent[j] + k) * inner + t] * den_pow[deg_j - k];
        }
        for (std::size_t i = 0; i < g; ++i) {
          acc = scaled[deg_j];
          for (std::size_t k = deg_j; k-- > 0;) {
            acc *= nums[i];
            acc += scaled[k];
          }
          next[(o * g + i) * inner + t] = acc;
        }
      }
    }
    tensor = std::move(next);
    scale *= den_pow[deg_j];
    outer *= g;
  }
  out.values = std::move(tensor);
  out.scale = std::move(scale);
  return out;
}

}  // namespace

std::vector<Rational> evaluate_on_grid(const Polynomial& p, const Grid& grid) {
  ScaledValues sv = evaluate_scaled(p, grid);
  std::vector<Rational> out;
  out.reserve(sv.values.size());
  for (auto& v : sv.values) {
    Rational r(v, sv.scale);
    r.canonicalize();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> evaluate_on_grid(const Expression& e, const Grid& grid) {
  if (e.dim() != grid.dim()) throw DimensionMismatch(e.dim(), grid.dim());
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = eval_f64(e, grid.point_f64(i));
  return out;
}

Rational sup_norm_exact(const Polynomial& p, const Grid& grid) {
  ScaledValues sv = evaluate_scaled(p, grid);
  Integer best = 0;
  for (const auto& v : sv.values) {
    if (mpz_cmpabs(v.get_mpz_t(), best.get_mpz_t()) > 0) best = abs(v);
  }
  Rational r(best, sv.scale);
  r.canonicalize();
  return r;
}

double sup_norm_estimate(const Polynomial& p, const Grid& grid) {
  return to_double(sup_norm_exact(p, grid));
}

double sup_norm_estimate(const Expression& e, const Grid& grid) {
  return sup_norm(e, grid).estimate;
}

double sup_norm_estimate(const Polynomial& p, const Box& box, std::size_t per_axis) {
  return sup_norm_estimate(p, Grid(box, per_axis));
}

double sup_norm_estimate(const Expression& e, const Box& box, std::size_t per_axis) {
  return sup_norm_estimate(e, Grid(box, per_axis));
}

ErrorEstimate sup_error(const Polynomial& p, const Expression& f, const Grid& grid) {
  if (p.dim() != f.dim()) throw DimensionMismatch(p.dim(), f.dim());
  ErrorEstimate out;
  if (is_polynomial_expression(f)) {
    Rational r = sup_norm_exact(p - to_polynomial(f), grid);
    out.estimate = to_double(r);
    out.exact = std::move(r);
    return out;
  }
  const std::vector<Rational> pv = evaluate_on_grid(p, grid);
  if (f.is_exact()) {
    Rational best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Rational diff = abs(pv[i] - eval_exact(f, grid.point(i)));
      if (diff > best) best = std::move(diff);
    }
    out.estimate = to_double(best);
    out.exact = std::move(best);
    return out;
  }
  double best = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    best = std::max(best, std::fabs(to_double(pv[i]) - eval_f64(f, grid.point_f64(i))));
  }
  out.estimate = best;
  return out;
}

ErrorEstimate sup_norm(const Expression& f, const Grid& grid) {
  return sup_error(Polynomial(f.dim()), f, grid);
}

}  // namespace bernapprox
