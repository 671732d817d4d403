#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bernapprox/expr.hpp"
#include "bernapprox/multiindex.hpp"
#include "bernapprox/rational.hpp"

namespace bernapprox {

/// Multivariate polynomial with exact rational coefficients in the monomial
/// basis. Canonical form: no stored zero coefficients, terms ordered
/// lexicographically by exponent, so equality is map equality.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, Rational, LexLess>;

  explicit Polynomial(std::size_t dim);

  static Polynomial constant(const Rational& c, std::size_t dim);
  /// x_j.
  static Polynomial variable(std::size_t j, std::size_t dim);
  static Polynomial monomial(const MultiIndex& exponent, const Rational& coefficient);

  std::size_t dim() const noexcept { return dim_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }

  Rational coefficient(const MultiIndex& exponent) const;
  /// Adds c x^exponent, dropping the term if it cancels.
  void add_term(const MultiIndex& exponent, const Rational& c);

  /// Largest exponent of each variable (all zeros for constants).
  MultiIndex degree_bound() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  std::string to_string() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

 private:
  std::size_t dim_;
  Terms terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(Polynomial a, const Rational& c);
Polynomial operator-(Polynomial a);
Polynomial pow(const Polynomial& base, unsigned exponent);

Rational evaluate(const Polynomial& p, std::span<const Rational> x);
/// Horner's scheme, one variable at a time.
double evaluate(const Polynomial& p, std::span<const double> x);

/// Formal mixed partial derivative.
Polynomial derivative(const Polynomial& p, const MultiIndex& orders);

/// Affine map h(x) = scale * x + offset with scale != 0.
class Homothety {
 public:
  Homothety(Rational scale, std::vector<Rational> offset);

  const Rational& scale() const noexcept { return scale_; }
  const std::vector<Rational>& offset() const noexcept { return offset_; }
  std::size_t dim() const noexcept { return offset_.size(); }

  /// h^{-1}(y) = y / scale - offset / scale.
  Homothety inverse() const;
  std::vector<Rational> apply(std::span<const Rational> x) const;

 private:
  Rational scale_;
  std::vector<Rational> offset_;
};

/// Exact coefficients of p o h.
Polynomial compose(const Polynomial& p, const Homothety& h);

/// Converts an expression built only from constants, variables, + - *,
/// powers and division by constant subexpressions. Throws PreconditionError
/// for anything else.
Polynomial to_polynomial(const Expression& e);
bool is_polynomial_expression(const Expression& e);

/// {"dim": d, "terms": [{"exp": [...], "num": "...", "den": "..."}]}, terms
/// in lexicographic exponent order.
nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace bernapprox
