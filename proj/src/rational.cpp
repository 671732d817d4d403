#include "bernapprox/rational.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>

#include "bernapprox/errors.hpp"

namespace bernapprox {

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) {
    throw EvaluationError("cannot convert non-finite double to a rational");
  }
  Rational r(value);  // mpq_set_d is exact
  r.canonicalize();
  return r;
}

double to_double(const Rational& value) {
  // mpq_get_d truncates toward zero; step one ulp outward when that is closer.
  const double truncated = value.get_d();
  if (!std::isfinite(truncated)) return truncated;
  const double outward =
      std::nextafter(truncated, value < 0 ? -HUGE_VAL : HUGE_VAL);
  if (!std::isfinite(outward)) return truncated;
  const Rational below_gap = abs(value - Rational(truncated));
  const Rational above_gap = abs(Rational(outward) - value);
  if (above_gap < below_gap) return outward;
  if (above_gap == below_gap) {
    // Ties to even mantissa.
    return (std::bit_cast<std::uint64_t>(outward) & 1) == 0 ? outward : truncated;
  }
  return truncated;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

std::string to_string(const Integer& value) { return value.get_str(); }

Rational parse_rational(std::string_view text) {
  auto fail = [&](std::size_t at) -> Rational {
    throw ParseError("malformed rational '" + std::string(text) + "'", at);
  };
  if (text.empty()) return fail(0);
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-') {
    negative = true;
    pos = 1;
  }
  auto digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
    return end;
  };
  const std::size_t int_end = digits(pos);
  if (int_end == pos) return fail(pos);
  Rational result;
  Integer head(std::string(text.substr(pos, int_end - pos)));
  if (int_end == text.size()) {
    result = head;
  } else if (text[int_end] == '/') {
    const std::size_t den_end = digits(int_end + 1);
    if (den_end == int_end + 1 || den_end != text.size()) return fail(int_end + 1);
    Integer den(std::string(text.substr(int_end + 1, den_end - int_end - 1)));
    if (den == 0) throw ParseError("zero denominator", int_end + 1);
    result = Rational(head, den);
    result.canonicalize();
  } else if (text[int_end] == '.') {
    const std::size_t frac_end = digits(int_end + 1);
    if (frac_end == int_end + 1 || frac_end != text.size()) return fail(int_end + 1);
    const std::string frac(text.substr(int_end + 1, frac_end - int_end - 1));
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    result = Rational(head * scale + Integer(frac), scale);
    result.canonicalize();
  } else {
    return fail(int_end);
  }
  return negative ? Rational(-result) : result;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Integer round_nearest(const Rational& value) {
  // floor(|v| + 1/2) with the sign restored: ties go away from zero.
  Rational shifted = abs(value) + Rational(1, 2);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return value < 0 ? Integer(-q) : q;
}

Integer lcm_of_denominators(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

}  // namespace bernapprox
