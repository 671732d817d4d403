#pragma once

#include <random>
#include <vector>

#include "bernapprox/polynomial.hpp"
#include "bernapprox/rational.hpp"

namespace support {

using bernapprox::MultiIndex;
using bernapprox::Polynomial;
using bernapprox::Rational;

inline Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// num in [-range*den, range*den], den in [1, den_max].
inline Rational random_rational(std::mt19937_64& rng, long range = 5, long den_max = 12) {
  const long den = std::uniform_int_distribution<long>(1, den_max)(rng);
  const long num = std::uniform_int_distribution<long>(-range * den, range * den)(rng);
  return q(num, den);
}

inline Rational random_unit_rational(std::mt19937_64& rng, long den_max = 97) {
  const long den = std::uniform_int_distribution<long>(1, den_max)(rng);
  return q(std::uniform_int_distribution<long>(0, den)(rng), den);
}

inline std::vector<Rational> random_unit_point(std::mt19937_64& rng, std::size_t dim) {
  std::vector<Rational> x;
  for (std::size_t j = 0; j < dim; ++j) x.push_back(random_unit_rational(rng));
  return x;
}

inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t dim, unsigned max_degree,
                                    unsigned terms) {
  Polynomial p(dim);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  for (unsigned t = 0; t < terms; ++t) {
    MultiIndex e(dim);
    for (std::size_t j = 0; j < dim; ++j) e[j] = deg(rng);
    p.add_term(e, random_rational(rng));
  }
  return p;
}

}  // namespace support
