#include "bernapprox/bernstein.hpp"

#include "bernapprox/errors.hpp"
#include "bernapprox/grid.hpp"

namespace bernapprox {

SampledFunction::SampledFunction(std::size_t dim, Callable fn, bool exact,
                                 std::optional<MultiIndex> table_alpha)
    : dim_(dim), fn_(std::move(fn)), exact_(exact), table_alpha_(std::move(table_alpha)) {
  if (dim_ == 0) throw PreconditionError("function dimension must be at least 1");
}

SampledFunction SampledFunction::from_expression(Expression f) {
  const std::size_t d = f.dim();
  if (f.is_exact()) {
    return SampledFunction(
        d, [f](std::span<const Rational> x) { return eval_exact(f, x); }, true, std::nullopt);
  }
  return SampledFunction(
      d,
      [f](std::span<const Rational> x) {
        std::vector<double> xf(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) xf[j] = to_double(x[j]);
        return rational_from_double(eval_f64(f, xf));
      },
      false, std::nullopt);
}

SampledFunction SampledFunction::from_table(MultiIndex alpha, std::vector<Rational> values) {
  for (auto a : alpha.entries()) {
    if (a == 0) throw PreconditionError("value table grid requires alpha >= 1");
  }
  if (values.size() != box_size(alpha)) {
    throw PreconditionError("value table has " + std::to_string(values.size()) +
                            " entries, grid needs " + std::to_string(box_size(alpha)));
  }
  const std::size_t d = alpha.dim();
  auto fn = [alpha, values = std::move(values)](std::span<const Rational> x) {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const Rational scaled = x[j] * alpha[j];
      if (scaled.get_den() != 1 || scaled < 0 || scaled > alpha[j]) {
        throw EvaluationError("point is not on the value table's grid");
      }
      flat = flat * (alpha[j] + 1) + scaled.get_num().get_ui();
    }
    return values[flat];
  };
  return SampledFunction(d, std::move(fn), true, std::move(alpha));
}

SampledFunction SampledFunction::from_callable(std::size_t dim, Callable fn, bool exact) {
  return SampledFunction(dim, std::move(fn), exact, std::nullopt);
}

Rational SampledFunction::at(std::span<const Rational> x) const {
  if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
  return fn_(x);
}

SampledFunction linear_combination(const SampledFunction& f, const SampledFunction& g,
                                   const Rational& c) {
  if (f.dim() != g.dim()) throw DimensionMismatch(f.dim(), g.dim());
  if (f.table_grid() && g.table_grid() && !(*f.table_grid() == *g.table_grid())) {
    throw PreconditionError("grid mismatch between value tables");
  }
  auto fn = [f, g, c](std::span<const Rational> x) -> Rational { return f.at(x) + c * g.at(x); };
  SampledFunction out = SampledFunction::from_callable(f.dim(), std::move(fn),
                                                       f.exact() && g.exact());
  return out;
}

namespace {

// Monomial coefficients of C(n,k) x^k (1-x)^(n-k): row k, column i (power),
// nonzero only for i >= k.
std::vector<std::vector<Integer>> basis_matrix(std::uint32_t n) {
  std::vector<std::vector<Integer>> m(n + 1, std::vector<Integer>(n + 1));
  for (std::uint32_t k = 0; k <= n; ++k) {
    const Integer head = binomial(n, k);
    for (std::uint32_t i = k; i <= n; ++i) {
      Integer v = head * binomial(n - k, i - k);
      m[k][i] = ((i - k) % 2 == 0) ? v : Integer(-v);
    }
  }
  return m;
}

// Expands sum_beta samples[beta] * prod_a basis_{deg_a, beta_a}(x_{active_a})
// where beta runs over the box of `degrees` in lexicographic order.
Polynomial expand_tensor(std::size_t dim, const std::vector<std::size_t>& active,
                         const std::vector<std::uint32_t>& degrees,
                         const std::vector<Rational>& samples) {
  const std::size_t m = active.size();
  std::vector<std::size_t> extent(m);
  for (std::size_t a = 0; a < m; ++a) extent[a] = degrees[a] + 1;

  // Work on integers: samples * lcm of denominators.
  const Integer common = lcm_of_denominators(samples);
  std::vector<Integer> tensor(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    tensor[i] = samples[i].get_num() * (common / samples[i].get_den());
  }

  // Contract one axis at a time: beta_a -> gamma_a (same extent).
  std::vector<Integer> next(tensor.size());
  for (std::size_t a = 0; a < m; ++a) {
    const auto basis = basis_matrix(degrees[a]);
    std::size_t outer = 1;
    for (std::size_t i = 0; i < a; ++i) outer *= extent[i];
    std::size_t inner = 1;
    for (std::size_t i = a + 1; i < m; ++i) inner *= extent[i];
    const std::size_t n = extent[a];
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t t = 0; t < inner; ++t) {
        for (std::size_t gamma = 0; gamma < n; ++gamma) {
          Integer acc = 0;
          for (std::size_t beta = 0; beta <= gamma; ++beta) {
            const Integer& s = tensor[(o * n + beta) * inner + t];
            if (s == 0) continue;
            mpz_addmul(acc.get_mpz_t(), s.get_mpz_t(), basis[beta][gamma].get_mpz_t());
          }
          next[(o * n + gamma) * inner + t] = std::move(acc);
        }
      }
    }
    std::swap(tensor, next);
  }

  Polynomial p(dim);
  MultiIndex exponent(dim);
  std::vector<std::uint32_t> gamma(m, 0);
  for (std::size_t flat = 0; flat < tensor.size(); ++flat) {
    if (tensor[flat] != 0) {
      for (std::size_t a = 0; a < m; ++a) exponent[active[a]] = gamma[a];
      Rational c(tensor[flat], common);
      c.canonicalize();
      p.add_term(exponent, c);
    }
    for (std::size_t a = m; a-- > 0;) {
      if (++gamma[a] < extent[a]) break;
      gamma[a] = 0;
    }
  }
  return p;
}

Polynomial bernstein_impl(const SampledFunction& f, const MultiIndex& alpha,
                          std::span<const std::optional<Rational>> frozen) {
  const std::size_t d = f.dim();
  if (alpha.dim() != d) throw DimensionMismatch(d, alpha.dim());
  std::vector<std::size_t> active;
  std::vector<std::uint32_t> degrees;
  std::vector<Rational> point(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (alpha[j] > 0) {
      active.push_back(j);
      degrees.push_back(alpha[j]);
    } else {
      if (frozen.size() != d || !frozen[j]) {
        throw PreconditionError("missing frozen coordinate for inactive direction " +
                                std::to_string(j));
      }
      point[j] = *frozen[j];
    }
  }
  if (active.empty()) throw PreconditionError("Bernstein operator needs alpha != 0");

  if (f.table_grid() && !(*f.table_grid() == alpha)) {
    throw PreconditionError("grid mismatch: value table grid " + f.table_grid()->to_string() +
                            " vs alpha " + alpha.to_string());
  }

  std::size_t total = 1;
  for (auto n : degrees) total *= n + 1;
  std::vector<Rational> samples;
  samples.reserve(total);
  std::vector<std::uint32_t> beta(active.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t a = 0; a < active.size(); ++a) {
      Rational t(beta[a], degrees[a]);
      t.canonicalize();
      point[active[a]] = std::move(t);
    }
    samples.push_back(f.at(point));
    for (std::size_t a = active.size(); a-- > 0;) {
      if (++beta[a] <= degrees[a]) break;
      beta[a] = 0;
    }
  }
  return expand_tensor(d, active, degrees, samples);
}

Rational rational_pow(const Rational& base, std::uint64_t k) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), k);
  return r;
}

void require_unit_interval(const Rational& x) {
  if (x < 0 || x > 1) throw PreconditionError("x must lie in [0, 1]");
}

}  // namespace

Polynomial bernstein_1d(const SampledFunction& f, std::uint32_t n) {
  if (f.dim() != 1) throw DimensionMismatch(1, f.dim());
  if (n == 0) throw PreconditionError("Bernstein degree must be at least 1");
  return bernstein_impl(f, MultiIndex{n}, {});
}

Polynomial bernstein(const SampledFunction& f, const MultiIndex& alpha) {
  for (auto a : alpha.entries()) {
    if (a == 0) {
      throw PreconditionError("bernstein requires alpha >= 1; use bernstein_partial for " +
                              alpha.to_string());
    }
  }
  return bernstein_impl(f, alpha, {});
}

Polynomial bernstein_partial(const SampledFunction& f, const MultiIndex& alpha,
                             std::span<const std::optional<Rational>> frozen) {
  if (alpha.is_zero()) throw PreconditionError("Bernstein operator needs alpha != 0");
  return bernstein_impl(f, alpha, frozen);
}

std::pair<Rational, Rational> moment_identity_check(std::uint32_t n, std::uint32_t N,
                                                    const Rational& x) {
  require_unit_interval(x);
  const Rational y = 1 - x;
  Rational lhs = 0;
  for (std::uint32_t k = 0; k <= n; ++k) {
    lhs += Rational(falling_factorial(k, N) * binomial(n, k)) * rational_pow(x, k) *
           rational_pow(y, n - k);
  }
  const Rational rhs = Rational(falling_factorial(n, N)) * rational_pow(x, N);
  return {lhs, rhs};
}

std::pair<Rational, Rational> variance_identity_check(std::uint32_t n, const Rational& x) {
  if (n == 0) throw PreconditionError("n must be at least 1");
  require_unit_interval(x);
  const Rational y = 1 - x;
  Rational lhs = 0;
  for (std::uint32_t k = 0; k <= n; ++k) {
    const Rational dev = Rational(k) - n * x;
    lhs += dev * dev * Rational(binomial(n, k)) * rational_pow(x, k) * rational_pow(y, n - k);
  }
  const Rational rhs = n * x * y;
  return {lhs, rhs};
}

bool BoundCheck::holds(double tolerance) const {
  if (lhs_exact && rhs_exact) return *lhs_exact <= *rhs_exact;
  return lhs <= rhs + tolerance;
}

BoundCheck derivative_bound_check(const Expression& f, const MultiIndex& beta,
                                  const MultiIndex& alpha, std::size_t grid_per_axis) {
  if (!lt(beta, alpha)) {
    throw PreconditionError("derivative bound needs alpha > beta componentwise, got alpha " +
                            alpha.to_string() + ", beta " + beta.to_string());
  }
  const Grid grid(unit_box(f.dim()), grid_per_axis);
  const Polynomial approx = derivative(bernstein(SampledFunction::from_expression(f), alpha), beta);
  BoundCheck out;
  Rational lhs = sup_norm_exact(approx, grid);
  out.lhs = to_double(lhs);
  // The polynomial side is always exact; it only counts as an exact
  // comparison when the samples were exact too.
  if (f.is_exact()) out.lhs_exact = std::move(lhs);
  const ErrorEstimate rhs = sup_norm(diff(f, beta), grid);
  out.rhs = rhs.estimate;
  out.rhs_exact = rhs.exact;
  if (!out.lhs_exact) out.rhs_exact.reset();
  return out;
}

std::pair<Rational, Rational> factorization_check(const SampledFunction& f,
                                                  const MultiIndex& alpha,
                                                  const MultiIndex& beta,
                                                  std::span<const Rational> x) {
  const std::size_t d = f.dim();
  if (d < 2) throw PreconditionError("factorization needs dimension >= 2");
  if (alpha.dim() != d) throw DimensionMismatch(d, alpha.dim());
  if (beta.dim() != d) throw DimensionMismatch(d, beta.dim());
  if (x.size() != d) throw DimensionMismatch(d, x.size());

  const Rational lhs = evaluate(derivative(bernstein(f, alpha), beta), x);

  const MultiIndex alpha_first = MultiIndex::unit(0, d, alpha[0]);
  const MultiIndex beta_first = MultiIndex::unit(0, d, beta[0]);
  MultiIndex alpha_rest = alpha;
  alpha_rest[0] = 0;
  MultiIndex beta_rest = beta;
  beta_rest[0] = 0;

  // Inner: y -> d^{beta_1 e_1} B_{alpha_1 e_1}(f) (y), with y_2.. held fixed.
  auto inner = [f, alpha_first, beta_first, d](std::span<const Rational> y) {
    std::vector<std::optional<Rational>> frozen(y.begin(), y.end());
    frozen[0].reset();
    const Polynomial p = derivative(bernstein_partial(f, alpha_first, frozen), beta_first);
    return evaluate(p, y);
  };
  const SampledFunction g = SampledFunction::from_callable(d, inner, f.exact());

  std::vector<std::optional<Rational>> frozen(d);
  frozen[0] = x[0];
  const Polynomial outer = derivative(bernstein_partial(g, alpha_rest, frozen), beta_rest);
  const Rational rhs = evaluate(outer, x);
  return {lhs, rhs};
}

bool linearity_check(const SampledFunction& f, const SampledFunction& g, const Rational& c,
                     const MultiIndex& alpha) {
  for (const SampledFunction* h : {&f, &g}) {
    if (h->table_grid() && !(*h->table_grid() == alpha)) {
      throw PreconditionError("grid mismatch: value table grid " + h->table_grid()->to_string() +
                              " vs alpha " + alpha.to_string());
    }
  }
  const Polynomial combined = bernstein(linear_combination(f, g, c), alpha);
  const Polynomial separate = bernstein(f, alpha) + bernstein(g, alpha) * c;
  return combined == separate;
}

}  // namespace bernapprox
