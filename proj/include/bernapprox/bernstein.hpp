#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bernapprox/expr.hpp"
#include "bernapprox/multiindex.hpp"
#include "bernapprox/polynomial.hpp"
#include "bernapprox/rational.hpp"

namespace bernapprox {

/// A function as seen by the Bernstein operators: only its values at
/// sample points are ever used.
///
/// Rational expressions are sampled exactly. Expressions containing
/// sin/cos/exp are sampled in double precision and the double is then taken
/// as an exact rational, so every downstream computation is still exact
/// arithmetic on (rounded) samples.
class SampledFunction {
 public:
  using Callable = std::function<Rational(std::span<const Rational>)>;

  static SampledFunction from_expression(Expression f);
  /// Values f(beta / alpha) for every beta <= alpha, in lexicographic order
  /// of beta. Requires alpha >= 1.
  static SampledFunction from_table(MultiIndex alpha, std::vector<Rational> values);
  static SampledFunction from_callable(std::size_t dim, Callable fn, bool exact = true);

  std::size_t dim() const noexcept { return dim_; }
  /// True when samples are exact values of the function.
  bool exact() const noexcept { return exact_; }
  /// Grid of a value table, if this is one.
  const std::optional<MultiIndex>& table_grid() const noexcept { return table_alpha_; }

  Rational at(std::span<const Rational> x) const;

 private:
  SampledFunction(std::size_t dim, Callable fn, bool exact, std::optional<MultiIndex> table_alpha);

  std::size_t dim_;
  Callable fn_;
  bool exact_;
  std::optional<MultiIndex> table_alpha_;
};

/// f + c g, sample by sample. Value tables must share their grid.
SampledFunction linear_combination(const SampledFunction& f, const SampledFunction& g,
                                   const Rational& c);

/// B_n(f)(x) = sum_k C(n,k) f(k/n) x^k (1-x)^(n-k), for one-dimensional f.
Polynomial bernstein_1d(const SampledFunction& f, std::uint32_t n);

/// B_alpha(f)(x) = sum_{beta <= alpha} C(alpha,beta) f(beta/alpha)
///                 x^beta (1-x)^(alpha-beta), requires alpha >= 1.
Polynomial bernstein(const SampledFunction& f, const MultiIndex& alpha);

/// Bernstein operator that leaves directions with alpha_j = 0 untouched:
/// those coordinates are held at frozen[j]. Entries of `frozen` at active
/// directions are ignored. The result has the full dimension d but involves
/// only the active variables.
Polynomial bernstein_partial(const SampledFunction& f, const MultiIndex& alpha,
                             std::span<const std::optional<Rational>> frozen);

/// Moment identity sum_k k^(N falling) C(n,k) x^k (1-x)^(n-k) = n^(N falling) x^N.
/// Returns (lhs computed term by term, rhs).
std::pair<Rational, Rational> moment_identity_check(std::uint32_t n, std::uint32_t N,
                                                    const Rational& x);

/// sum_k (k - n x)^2 C(n,k) x^k (1-x)^(n-k) = n x (1 - x).
std::pair<Rational, Rational> variance_identity_check(std::uint32_t n, const Rational& x);

struct BoundCheck {
  double lhs = 0.0;  // grid sup of d^beta B_alpha(f)
  double rhs = 0.0;  // grid sup of d^beta f
  std::optional<Rational> lhs_exact;
  std::optional<Rational> rhs_exact;

  /// Exact comparison when both sides are exact, lhs <= rhs + tolerance otherwise.
  bool holds(double tolerance) const;
};

/// Derivative norm bound: sup |d^beta B_alpha(f)| <= sup |d^beta f| on
/// [0,1]^d, both sides estimated on a uniform grid. Requires alpha > beta.
BoundCheck derivative_bound_check(const Expression& f, const MultiIndex& beta,
                                  const MultiIndex& alpha, std::size_t grid_per_axis);

/// Both sides of the first-direction splitting
///   d^beta B_alpha(f) = d^beta' B_alpha'( d^{beta_1 e_1} B_{alpha_1 e_1}(f) )
/// at the point x, with alpha' = (0, alpha_2, ...), beta' = (0, beta_2, ...).
std::pair<Rational, Rational> factorization_check(const SampledFunction& f,
                                                  const MultiIndex& alpha,
                                                  const MultiIndex& beta,
                                                  std::span<const Rational> x);

/// B_alpha(f + c g) == B_alpha(f) + c B_alpha(g) as canonical polynomials.
bool linearity_check(const SampledFunction& f, const SampledFunction& g, const Rational& c,
                     const MultiIndex& alpha);

}  // namespace bernapprox
