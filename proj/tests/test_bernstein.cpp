#include <doctest.h>

#include <random>

#include "bernapprox/bernstein.hpp"
#include "bernapprox/errors.hpp"
#include "bernapprox/grid.hpp"
#include "bernapprox/verify.hpp"
#include "support.hpp"

using namespace bernapprox;
using support::q;

namespace {

SampledFunction fn(const std::string& text, std::size_t dim) {
  return SampledFunction::from_expression(parse_expression(text, dim));
}

Polynomial poly(const std::string& text, std::size_t dim) {
  return to_polynomial(parse_expression(text, dim));
}

// Sum of C(a,b) f(b/a) x^b (1-x)^(a-b) built from ring operations only.
Polynomial bernstein_naive(const SampledFunction& f, const MultiIndex& a) {
  const std::size_t d = a.dim();
  Polynomial out(d);
  for_each_below(a, [&](const MultiIndex& b) {
    Polynomial term = Polynomial::constant(Rational(binomial(a, b)) * f.at(ratio(b, a)), d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto xj = Polynomial::variable(j, d);
      term *= pow(xj, b[j]) * pow(Polynomial::constant(1, d) - xj, a[j] - b[j]);
    }
    out += term;
  });
  return out;
}

}  // namespace

TEST_CASE("univariate operator") {
  for (std::uint32_t n = 1; n <= 8; ++n) {
    CHECK(bernstein_1d(fn("x0", 1), n) == poly("x0", 1));
    CHECK(bernstein_1d(fn("1", 1), n) == poly("1", 1));
  }
  CHECK(bernstein_1d(fn("x0^2", 1), 4) == poly("x0^2 + x0*(1-x0)/4", 1));
  CHECK_THROWS(bernstein_1d(fn("x0", 1), 0));
}

TEST_CASE("multivariate operator") {
  CHECK(bernstein(fn("x0*x1", 2), MultiIndex{3, 3}) == poly("x0*x1", 2));
  CHECK(bernstein(fn("1", 3), MultiIndex{2, 1, 4}) == poly("1", 3));
  CHECK(bernstein(fn("x0^2", 2), MultiIndex{2, 5}) == poly("x0^2 + x0*(1-x0)/2", 2));
  CHECK_THROWS_AS(bernstein(fn("x0", 2), MultiIndex{2, 0}), PreconditionError);
}

TEST_CASE("expansion agrees with ring arithmetic and with the direct sum") {
  std::mt19937_64 rng(41);
  const std::vector<std::pair<std::string, std::size_t>> corpus = {
      {"x0^3 - 2*x0*x1 + 1/3", 2}, {"1/(1+x0+x1)", 2}, {"x0*x1*x2 + x2^2", 3}};
  for (const auto& [text, dim] : corpus) {
    const auto f = fn(text, dim);
    for (int t = 0; t < 4; ++t) {
      MultiIndex a(dim);
      for (std::size_t j = 0; j < dim; ++j) a[j] = 1 + (t + 2 * j) % 5;
      const auto b = bernstein(f, a);
      CHECK(b == bernstein_naive(f, a));
      const auto x = support::random_unit_point(rng, dim);
      CHECK(evaluate(b, x) == bernstein_eval_direct(f, a, x));
    }
  }
}

TEST_CASE("partial operator freezes inactive directions") {
  const std::vector<std::optional<Rational>> frozen{std::nullopt, q(1, 2)};
  CHECK(bernstein_partial(fn("x0*x1", 2), MultiIndex{3, 0}, frozen) == poly("x0/2", 2));

  const std::vector<std::optional<Rational>> free_y{q(3, 7), std::nullopt};
  const auto g = fn("x1^2", 2);
  const auto expected = compose(bernstein_1d(fn("x0^2", 1), 5), Homothety(1, {q(0)}));
  const auto by = bernstein_partial(g, MultiIndex{0, 5}, free_y);
  CHECK(by == poly("x1^2 + x1*(1-x1)/5", 2));
  CHECK(expected == poly("x0^2 + x0*(1-x0)/5", 1));

  CHECK_THROWS_AS(bernstein_partial(g, MultiIndex{0, 0}, free_y), PreconditionError);
  const std::vector<std::optional<Rational>> none(2);
  CHECK_THROWS_AS(bernstein_partial(g, MultiIndex{0, 3}, none), PreconditionError);
}

TEST_CASE("moment identities") {
  auto check = [](std::uint32_t n, std::uint32_t N, const Rational& x, const Rational& value) {
    const auto [lhs, rhs] = moment_identity_check(n, N, x);
    CHECK(lhs == value);
    CHECK(rhs == value);
  };
  check(6, 0, q(1, 3), 1);
  check(6, 1, q(1, 3), 2);
  check(6, 2, q(1, 2), q(15, 2));
  check(1, 2, q(1, 2), 0);
  CHECK_THROWS_AS(moment_identity_check(3, 1, q(3, 2)), PreconditionError);
}

TEST_CASE("variance identity") {
  auto check = [](std::uint32_t n, const Rational& x, const Rational& value) {
    const auto [lhs, rhs] = variance_identity_check(n, x);
    CHECK(lhs == value);
    CHECK(rhs == value);
  };
  check(10, q(1, 2), q(5, 2));
  check(9, q(0), 0);
  check(7, q(1, 7), q(6, 7));
}

TEST_CASE("derivative bound") {
  const auto b = derivative_bound_check(parse_expression("x0^2", 1), MultiIndex{1}, MultiIndex{5}, 101);
  REQUIRE(b.lhs_exact.has_value());
  // d/dx B_5(x^2) = 2x + (1 - 2x)/5, largest at x = 1.
  CHECK(*b.lhs_exact == 2 - q(1, 5));
  CHECK(*b.rhs_exact == 2);
  CHECK(b.holds(0.0));

  const auto c = derivative_bound_check(parse_expression("7/3", 2), MultiIndex{1, 0}, MultiIndex{3, 3}, 11);
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);

  const auto xy = derivative_bound_check(parse_expression("x0*x1", 2), MultiIndex{1, 1}, MultiIndex{4, 4}, 21);
  CHECK(*xy.lhs_exact == 1);
  CHECK(*xy.rhs_exact == 1);

  const auto s = derivative_bound_check(parse_expression("sin(3*x0)", 1), MultiIndex{2}, MultiIndex{12}, 101);
  CHECK_FALSE(s.lhs_exact.has_value());
  CHECK(s.holds(1e-9));

  CHECK_THROWS_AS(derivative_bound_check(parse_expression("x0", 1), MultiIndex{2}, MultiIndex{2}, 11),
                  PreconditionError);
}

TEST_CASE("factorization") {
  const Rational pt[] = {q(1, 3), q(1, 4)};
  auto [l, r] = factorization_check(fn("x0*x1", 2), MultiIndex{2, 2}, MultiIndex{0, 0}, pt);
  CHECK(l == q(1, 12));
  CHECK(r == q(1, 12));

  std::mt19937_64 rng(42);
  for (int t = 0; t < 10; ++t) {
    const auto x = support::random_unit_point(rng, 2);
    auto [lhs, rhs] = factorization_check(fn("x0^2*x1^2", 2), MultiIndex{3, 3}, MultiIndex{1, 0}, x);
    CHECK(lhs == rhs);
    std::tie(lhs, rhs) = factorization_check(fn("1/(2+x0*x1)", 2), MultiIndex{2, 3}, MultiIndex{1, 1}, x);
    CHECK(lhs == rhs);
  }
  std::tie(l, r) = factorization_check(fn("5", 2), MultiIndex{2, 2}, MultiIndex{0, 0}, pt);
  CHECK(l == 5);
  CHECK(r == 5);
  CHECK_THROWS(factorization_check(fn("x0", 1), MultiIndex{2}, MultiIndex{0}, std::vector<Rational>{q(0)}));
}

TEST_CASE("linearity") {
  CHECK(linearity_check(fn("x0", 1), fn("1", 1), 3, MultiIndex{4}));
  CHECK(bernstein(linear_combination(fn("x0", 1), fn("1", 1), 3), MultiIndex{4}) == poly("x0+3", 1));
  CHECK(bernstein(linear_combination(fn("x0^2", 1), fn("x0^3", 1), 0), MultiIndex{4}) ==
        bernstein(fn("x0^2", 1), MultiIndex{4}));

  std::mt19937_64 rng(43);
  const MultiIndex a{3, 2};
  for (int t = 0; t < 10; ++t) {
    std::vector<Rational> fv;
    std::vector<Rational> gv;
    for (std::size_t i = 0; i < box_size(a); ++i) {
      fv.push_back(support::random_rational(rng));
      gv.push_back(support::random_rational(rng));
    }
    CHECK(linearity_check(SampledFunction::from_table(a, fv), SampledFunction::from_table(a, gv),
                          support::random_rational(rng), a));
  }
  const auto t1 = SampledFunction::from_table(MultiIndex{1}, {q(0), q(1)});
  const auto t2 = SampledFunction::from_table(MultiIndex{2}, {q(0), q(1), q(2)});
  CHECK_THROWS_AS(linearity_check(t1, t2, 1, MultiIndex{2}), PreconditionError);
  CHECK_THROWS_AS(SampledFunction::from_table(MultiIndex{2}, {q(0)}), PreconditionError);
}

TEST_CASE("endpoint interpolation and multilinear exactness") {
  const auto f = fn("1/(1+x0^2+x1)", 2);
  const auto b = bernstein(f, MultiIndex{4, 3});
  for (const auto& v : indices_below(MultiIndex{1, 1})) {
    const auto x = ratio(v, MultiIndex{1, 1});
    CHECK(evaluate(b, x) == f.at(x));
  }
  const auto m = fn("3*x0*x1 - x0/2 + 2*x1 + 1/5", 2);
  CHECK(bernstein(m, MultiIndex{5, 2}) == poly("3*x0*x1 - x0/2 + 2*x1 + 1/5", 2));
}

TEST_CASE("positivity") {
  std::mt19937_64 rng(45);
  const Grid g(unit_box(2), 101);
  for (int t = 0; t < 5; ++t) {
    const MultiIndex a{3, 4};
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < box_size(a); ++i) vals.push_back(abs(support::random_rational(rng)));
    const auto b = bernstein(SampledFunction::from_table(a, vals), a);
    for (const auto& v : evaluate_on_grid(b, g)) REQUIRE(v >= 0);
  }
}

TEST_CASE("univariate derivative norm bound") {
  // ||(d/dx)^j B_{n+j}(f)|| <= ||f^(j)|| + 1e-9 on grid estimates.
  for (const std::string text : {"sin(2*x0)", "exp(x0)", "x0^4-x0"}) {
    const auto e = parse_expression(text, 1);
    for (std::uint32_t j = 1; j <= 2; ++j) {
      for (std::uint32_t n = 1; n <= 12; n += 3) {
        const auto bc = derivative_bound_check(e, MultiIndex{j}, MultiIndex{n + j}, 101);
        CAPTURE(text);
        CHECK(bc.holds(1e-9));
      }
    }
  }
}

TEST_CASE("float samples are exact rationals of the double values") {
  const auto f = fn("sin(x0)", 1);
  CHECK_FALSE(f.exact());
  const Rational x[] = {q(1, 3)};
  CHECK(f.at(x) == rational_from_double(std::sin(1.0 / 3.0)));
}
