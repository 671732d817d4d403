#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bernapprox/multiindex.hpp"
#include "bernapprox/rational.hpp"

namespace bernapprox {

/// Immutable expression tree for a function R^d -> R built from rational
/// constants, variables x0..x{d-1}, + - * /, non-negative integer powers and
/// sin/cos/exp. The class is closed under partial differentiation.
class Expression {
 public:
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

  static Expression constant(const Rational& value, std::size_t dim);
  static Expression variable(std::size_t index, std::size_t dim);
  /// Raw node construction without simplification; the parser uses this so
  /// that parse(print(e)) reproduces e node for node.
  static Expression binary(Kind kind, const Expression& lhs, const Expression& rhs);
  static Expression unary(Kind kind, const Expression& arg);
  static Expression power(const Expression& base, std::uint32_t exponent);

  Kind kind() const noexcept;
  std::size_t dim() const noexcept { return dim_; }

  const Rational& value() const;          // Constant
  std::size_t var_index() const;          // Variable
  std::uint32_t exponent() const;         // Pow
  Expression lhs() const;                 // binary nodes, Pow base
  Expression rhs() const;                 // binary nodes
  Expression arg() const;                 // Neg, Sin, Cos, Exp

  bool is_constant() const noexcept { return kind() == Kind::Constant; }
  /// No sin/cos/exp anywhere in the tree.
  bool is_exact() const;
  /// False only if x_var provably does not occur in the tree.
  bool depends_on(std::size_t var) const;
  std::size_t node_count() const;

  std::string to_string() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node;
  Expression(std::shared_ptr<const Node> node, std::size_t dim);

  std::shared_ptr<const Node> node_;
  std::size_t dim_;
};

// Simplifying constructors: constant folding and 0/1 elimination only.
Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& base, std::uint32_t exponent);
Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression exp(const Expression& a);

/// Parses the expression grammar; variables are x0..x{dim-1}.
Expression parse_expression(std::string_view text, std::size_t dim);

/// Partial derivative with respect to x_var.
Expression diff(const Expression& e, std::size_t var);
/// Mixed partial derivative of multiorder `orders`.
Expression diff(const Expression& e, const MultiIndex& orders);

Rational eval_exact(const Expression& e, std::span<const Rational> point);
double eval_f64(const Expression& e, std::span<const double> point);

/// Substitutes x_j -> scale * x_j + offset_j, i.e. returns e o h for the
/// homothety h(x) = scale * x + offset.
Expression compose_affine(const Expression& e, const Rational& scale,
                          std::span<const Rational> offset);

}  // namespace bernapprox
