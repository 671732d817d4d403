#include <doctest.h>

#include <random>

#include "bernapprox/errors.hpp"
#include "bernapprox/expr.hpp"
#include "bernapprox/polynomial.hpp"
#include "support.hpp"

using namespace bernapprox;
using support::q;

namespace {

Polynomial x(std::size_t j, std::size_t d) { return Polynomial::variable(j, d); }

// p o h by substituting (scale x_j + v_j) into every monomial with ring
// arithmetic; shares nothing with the dense contraction in compose().
Polynomial compose_naive(const Polynomial& p, const Homothety& h) {
  const std::size_t d = p.dim();
  std::vector<Polynomial> lin;
  for (std::size_t j = 0; j < d; ++j) {
    lin.push_back(x(j, d) * h.scale() + Polynomial::constant(h.offset()[j], d));
  }
  Polynomial out(d);
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(c, d);
    for (std::size_t j = 0; j < d; ++j) term *= pow(lin[j], e[j]);
    out += term;
  }
  return out;
}

Homothety random_homothety(std::mt19937_64& rng, std::size_t d) {
  Rational s = 0;
  while (s == 0) s = support::random_rational(rng, 3, 4);
  std::vector<Rational> v;
  for (std::size_t j = 0; j < d; ++j) v.push_back(support::random_rational(rng, 3, 4));
  return Homothety(s, v);
}

}  // namespace

TEST_CASE("evaluation") {
  const Polynomial p = pow(x(0, 1), 2) + Polynomial::constant(1, 1);
  const Rational half[] = {q(1, 2)};
  CHECK(evaluate(p, half) == q(5, 4));
  const Polynomial xy = x(0, 2) * x(1, 2);
  const Rational pt[] = {q(1, 3), q(3)};
  CHECK(evaluate(xy, pt) == 1);
  CHECK(evaluate(Polynomial(2), pt) == 0);
  const double ptf[] = {0.5, 4.0};
  CHECK(evaluate(xy, ptf) == 2.0);
  CHECK_THROWS_AS(evaluate(xy, half), DimensionMismatch);
}

TEST_CASE("float evaluation agrees with exact evaluation") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto p = support::random_polynomial(rng, 3, 5, 12);
    const auto pt = support::random_unit_point(rng, 3);
    std::vector<double> ptf;
    for (const auto& v : pt) ptf.push_back(to_double(v));
    CHECK(evaluate(p, ptf) == doctest::Approx(to_double(evaluate(p, pt))).epsilon(1e-12));
  }
}

TEST_CASE("canonical form") {
  Polynomial p(2);
  p.add_term(MultiIndex{1, 0}, 3);
  p.add_term(MultiIndex{1, 0}, -3);
  CHECK(p.is_zero());
  CHECK(p.term_count() == 0);
  CHECK(x(0, 2) - x(0, 2) == Polynomial(2));
  CHECK(x(0, 2) + x(1, 2) == x(1, 2) + x(0, 2));
  CHECK(p.coefficient(MultiIndex{1, 0}) == 0);
}

TEST_CASE("formal derivatives") {
  CHECK(derivative(pow(x(0, 1), 3), MultiIndex{2}) == x(0, 1) * q(6));
  CHECK(derivative(pow(x(0, 2), 2) * pow(x(1, 2), 2), MultiIndex{1, 1}) ==
        x(0, 2) * x(1, 2) * q(4));
  CHECK(derivative(x(0, 1), MultiIndex{2}).is_zero());
  CHECK_THROWS_AS(derivative(x(0, 1), MultiIndex{1, 0}), DimensionMismatch);
}

TEST_CASE("derivatives compose additively") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const auto p = support::random_polynomial(rng, 2, 6, 10);
    const MultiIndex a{static_cast<unsigned>(t % 3), static_cast<unsigned>(t % 2)};
    const MultiIndex b{static_cast<unsigned>(t % 2), static_cast<unsigned>(t % 4)};
    CHECK(derivative(p, a + b) == derivative(derivative(p, a), b));
  }
}

TEST_CASE("ring axioms") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 40; ++t) {
    const auto a = support::random_polynomial(rng, 2, 3, 4);
    const auto b = support::random_polynomial(rng, 2, 3, 4);
    const auto c = support::random_polynomial(rng, 2, 3, 4);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a - a == Polynomial(2));
    CHECK(a * Polynomial::constant(1, 2) == a);
  }
}

TEST_CASE("homothety composition") {
  CHECK(compose(x(0, 1), Homothety(2, {q(-1)})) == x(0, 1) * q(2) - Polynomial::constant(1, 1));
  CHECK(compose(pow(x(0, 1), 2), Homothety(1, {q(1)})) ==
        pow(x(0, 1), 2) + x(0, 1) * q(2) + Polynomial::constant(1, 1));
  CHECK_THROWS_AS(Homothety(0, {q(1)}), PreconditionError);

  std::mt19937_64 rng(14);
  for (int t = 0; t < 30; ++t) {
    const auto p = support::random_polynomial(rng, 2, 5, 8);
    const auto h = random_homothety(rng, 2);
    const auto ph = compose(p, h);
    CHECK(ph == compose_naive(p, h));
    CHECK(compose(ph, h.inverse()) == p);
    const auto pt = support::random_unit_point(rng, 2);
    CHECK(evaluate(ph, pt) == evaluate(p, h.apply(pt)));
  }
}

TEST_CASE("chain rule under homothety") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 30; ++t) {
    const auto p = support::random_polynomial(rng, 2, 5, 8);
    const auto h = random_homothety(rng, 2);
    const MultiIndex beta{static_cast<unsigned>(t % 3), static_cast<unsigned>((t / 3) % 3)};
    Rational factor = 1;
    for (unsigned i = 0; i < beta.order(); ++i) factor *= h.scale();
    CHECK(derivative(compose(p, h), beta) == compose(derivative(p, beta), h) * factor);
  }
}

TEST_CASE("expressions to polynomials") {
  const auto e = parse_expression("(x0+1)^2/4 - x1*3", 2);
  CHECK(is_polynomial_expression(e));
  const auto p = to_polynomial(e);
  CHECK(p == (pow(x(0, 2) + Polynomial::constant(1, 2), 2) * q(1, 4) - x(1, 2) * q(3)));
  CHECK_FALSE(is_polynomial_expression(parse_expression("1/x0", 1)));
  CHECK_FALSE(is_polynomial_expression(parse_expression("sin(x0)", 1)));
  CHECK_THROWS(to_polynomial(parse_expression("x0/(1-1)", 1)));
}

TEST_CASE("json round trip is exact and ordered") {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 30; ++t) {
    const auto p = support::random_polynomial(rng, 3, 4, 10);
    const auto j = to_json(p);
    CHECK(polynomial_from_json(j) == p);
    CHECK(to_json(polynomial_from_json(j)).dump() == j.dump());
  }
  const auto j = to_json(x(0, 2) * q(-1, 3) + Polynomial::constant(2, 2));
  CHECK(j["dim"] == 2);
  CHECK(j["terms"][0]["exp"] == nlohmann::json::array({0, 0}));
  CHECK(j["terms"][0]["num"] == "2");
  CHECK(j["terms"][1]["num"] == "-1");
  CHECK(j["terms"][1]["den"] == "3");
}

TEST_CASE("json validation") {
  auto bad = nlohmann::json::parse(R"({"dim":1,"terms":[{"exp":[1],"num":"1","den":"0"}]})");
  CHECK_THROWS(polynomial_from_json(bad));
  bad = nlohmann::json::parse(R"({"dim":1,"terms":[{"exp":[1],"num":"0","den":"1"}]})");
  CHECK_THROWS(polynomial_from_json(bad));
  bad = nlohmann::json::parse(
      R"({"dim":1,"terms":[{"exp":[2],"num":"1","den":"1"},{"exp":[1],"num":"1","den":"1"}]})");
  CHECK_THROWS(polynomial_from_json(bad));
  bad = nlohmann::json::parse(R"({"dim":2,"terms":[{"exp":[1],"num":"1","den":"1"}]})");
  CHECK_THROWS(polynomial_from_json(bad));
}
