#include <doctest.h>

#include <random>

#include "bernapprox/errors.hpp"
#include "bernapprox/expr.hpp"
#include "bernapprox/grid.hpp"
#include "support.hpp"

using namespace bernapprox;
using support::q;

TEST_CASE("grid layout") {
  const Grid g(cube(q(-1), q(1), 2), 3);
  CHECK(g.size() == 9);
  CHECK(g.axis(0) == std::vector<Rational>{q(-1), q(0), q(1)});
  CHECK(g.point(0) == std::vector<Rational>{q(-1), q(-1)});
  CHECK(g.point(1) == std::vector<Rational>{q(-1), q(0)});
  CHECK(g.point(3) == std::vector<Rational>{q(0), q(-1)});
  CHECK(g.point_f64(8) == std::vector<double>{1.0, 1.0});
  CHECK_THROWS_AS(Grid(unit_box(1), 1), PreconditionError);
}

TEST_CASE("grid evaluation matches pointwise evaluation") {
  std::mt19937_64 rng(21);
  const Grid g({{q(-2), q(1, 3)}, {q(0), q(5, 2)}}, 7);
  for (int t = 0; t < 20; ++t) {
    const auto p = support::random_polynomial(rng, 2, 6, 10);
    const auto values = evaluate_on_grid(p, g);
    REQUIRE(values.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(values[i] == evaluate(p, g.point(i)));
  }
}

TEST_CASE("sup norm estimates") {
  const auto x = Polynomial::variable(0, 1);
  CHECK(sup_norm_estimate(x, unit_box(1), 2) == 1.0);
  CHECK(sup_norm_estimate(x, unit_box(1), 101) == 1.0);
  const auto hump = x * (Polynomial::constant(1, 1) - x);
  CHECK(sup_norm_estimate(hump, unit_box(1), 101) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(sup_norm_exact(hump, Grid(unit_box(1), 101)) == q(1, 4));
  CHECK(sup_norm_estimate(Polynomial(1), unit_box(1), 11) == 0.0);
  CHECK(sup_norm_estimate(parse_expression("sin(x0)", 1), cube(q(0), q(2), 1), 3) ==
        doctest::Approx(std::sin(2.0)));
}

TEST_CASE("sup error takes the exact path for rational targets") {
  const Grid g(unit_box(1), 11);
  const auto f = parse_expression("x0^2", 1);
  const auto p = Polynomial::variable(0, 1);
  const auto e = sup_error(p, f, g);
  REQUIRE(e.exact.has_value());
  CHECK(*e.exact == q(1, 4));
  const auto s = sup_error(p, parse_expression("sin(x0)", 1), g);
  CHECK_FALSE(s.exact.has_value());
  CHECK(s.estimate == doctest::Approx(1 - std::sin(1.0)));
  const auto r = sup_norm(parse_expression("1/(1+x0)", 1), g);
  REQUIRE(r.exact.has_value());
  CHECK(*r.exact == 1);
  CHECK_THROWS_AS(sup_norm(parse_expression("1/x0", 1), g), EvaluationError);
}
