#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bernapprox/errors.hpp"
#include "bernapprox/rational.hpp"
#include "support.hpp"

using namespace bernapprox;

TEST_CASE("doubles convert exactly") {
  CHECK(rational_from_double(0.25) == Rational(1, 4));
  CHECK(rational_from_double(-3.0) == -3);
  CHECK(rational_from_double(0.1) != Rational(1, 10));
  CHECK(to_double(rational_from_double(0.1)) == 0.1);
  CHECK_THROWS(rational_from_double(std::numeric_limits<double>::infinity()));
  CHECK_THROWS(rational_from_double(std::nan("")));
}

TEST_CASE("to_double rounds to nearest") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 2000; ++t) {
    const double d = u(rng);
    REQUIRE(to_double(rational_from_double(d)) == d);
  }
  CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(Rational(-2, 7)) == -2.0 / 7.0);
  // Halfway between 1 and the next double rounds to even (1).
  const Rational half_ulp = rational_from_double(std::nextafter(1.0, 2.0) - 1.0) / 2;
  CHECK(to_double(1 + half_ulp) == 1.0);
  CHECK(to_double(1 + half_ulp * 3) == std::nextafter(std::nextafter(1.0, 2.0), 2.0));
}

TEST_CASE("parsing rationals") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("printing") {
  CHECK(to_string(support::q(-4, 6)) == "-2/3");
  CHECK(to_string(Rational(5)) == "5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.03125) == "0.03125");
}

TEST_CASE("rounding helpers") {
  CHECK(round_nearest(Rational(11, 3)) == 4);
  CHECK(round_nearest(Rational(5, 2)) == 3);
  CHECK(round_nearest(Rational(-5, 2)) == -3);
  CHECK(round_nearest(Rational(-7, 3)) == -2);
  CHECK(abs(Rational(-1, 3)) == Rational(1, 3));
  CHECK(lcm_of_denominators({Rational(1, 4), Rational(5, 6), Rational(2)}) == 12);
}
