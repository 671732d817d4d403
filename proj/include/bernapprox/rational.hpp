#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace bernapprox {

using Integer = mpz_class;
using Rational = mpq_class;

/// Exact value of a finite double (every finite double is a dyadic rational).
Rational rational_from_double(double value);

/// Nearest double, rounding to nearest (mpq_get_d truncates, this does not).
double to_double(const Rational& value);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

/// Accepts "p", "-p", "p/q" and decimal "a.b" forms; throws ParseError.
Rational parse_rational(std::string_view text);

/// Shortest round-trip decimal form of a double; used by every report writer
/// so that serialized output is byte-deterministic.
std::string format_double(double value);

Rational abs(const Rational& value);

/// Rounds to the nearest integer, ties away from zero.
Integer round_nearest(const Rational& value);

Integer lcm_of_denominators(const std::vector<Rational>& values);

}  // namespace bernapprox
