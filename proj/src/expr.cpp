#include "bernapprox/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>

#include "bernapprox/errors.hpp"

namespace bernapprox {

struct Expression::Node {
  Kind kind;
  Rational value;               // Constant
  std::uint32_t index = 0;      // Variable index or Pow exponent
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
  std::uint64_t var_mask = 0;   // bit j set if x_j occurs (saturates above 63)
  bool exact = true;
};

namespace {

using Kind = Expression::Kind;

std::uint64_t var_bit(std::size_t index) {
  return index < 64 ? (std::uint64_t{1} << index) : ~std::uint64_t{0};
}

bool is_transcendental(Kind k) { return k == Kind::Sin || k == Kind::Cos || k == Kind::Exp; }

}  // namespace

Expression::Expression(std::shared_ptr<const Node> node, std::size_t dim)
    : node_(std::move(node)), dim_(dim) {}

Expression Expression::constant(const Rational& value, std::size_t dim) {
  if (dim == 0) throw PreconditionError("expression dimension must be at least 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  n->value.canonicalize();
  return Expression(std::move(n), dim);
}

Expression Expression::variable(std::size_t index, std::size_t dim) {
  if (dim == 0) throw PreconditionError("expression dimension must be at least 1");
  if (index >= dim) {
    throw PreconditionError("variable x" + std::to_string(index) + " out of range for dimension " +
                            std::to_string(dim));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = static_cast<std::uint32_t>(index);
  n->var_mask = var_bit(index);
  return Expression(std::move(n), dim);
}

Expression Expression::binary(Kind kind, const Expression& lhs, const Expression& rhs) {
  if (lhs.dim_ != rhs.dim_) throw DimensionMismatch(lhs.dim_, rhs.dim_);
  if (kind != Kind::Add && kind != Kind::Sub && kind != Kind::Mul && kind != Kind::Div) {
    throw PreconditionError("not a binary expression kind");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = lhs.node_;
  n->b = rhs.node_;
  n->var_mask = lhs.node_->var_mask | rhs.node_->var_mask;
  n->exact = lhs.node_->exact && rhs.node_->exact;
  return Expression(std::move(n), lhs.dim_);
}

Expression Expression::unary(Kind kind, const Expression& arg) {
  if (kind != Kind::Neg && !is_transcendental(kind)) {
    throw PreconditionError("not a unary expression kind");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = arg.node_;
  n->var_mask = arg.node_->var_mask;
  n->exact = arg.node_->exact && !is_transcendental(kind);
  return Expression(std::move(n), arg.dim_);
}

Expression Expression::power(const Expression& base, std::uint32_t exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->index = exponent;
  n->a = base.node_;
  n->var_mask = base.node_->var_mask;
  n->exact = base.node_->exact;
  return Expression(std::move(n), base.dim_);
}

Expression::Kind Expression::kind() const noexcept { return node_->kind; }

const Rational& Expression::value() const {
  if (node_->kind != Kind::Constant) throw PreconditionError("not a constant node");
  return node_->value;
}

std::size_t Expression::var_index() const {
  if (node_->kind != Kind::Variable) throw PreconditionError("not a variable node");
  return node_->index;
}

std::uint32_t Expression::exponent() const {
  if (node_->kind != Kind::Pow) throw PreconditionError("not a power node");
  return node_->index;
}

Expression Expression::lhs() const {
  if (!node_->a) throw PreconditionError("node has no operand");
  return Expression(node_->a, dim_);
}

Expression Expression::rhs() const {
  if (!node_->b) throw PreconditionError("node has no right operand");
  return Expression(node_->b, dim_);
}

Expression Expression::arg() const { return lhs(); }

bool Expression::is_exact() const { return node_->exact; }

bool Expression::depends_on(std::size_t var) const {
  return (node_->var_mask & var_bit(var)) != 0;
}

std::size_t Expression::node_count() const {
  std::function<std::size_t(const Node*)> count = [&](const Node* n) -> std::size_t {
    if (!n) return 0;
    return 1 + count(n->a.get()) + count(n->b.get());
  };
  return count(node_.get());
}

bool operator==(const Expression& x, const Expression& y) {
  if (x.dim_ != y.dim_) return false;
  std::function<bool(const Expression::Node*, const Expression::Node*)> same =
      [&](const Expression::Node* a, const Expression::Node* b) -> bool {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->index != b->index) return false;
    if (a->kind == Kind::Constant && a->value != b->value) return false;
    return same(a->a.get(), b->a.get()) && same(a->b.get(), b->b.get());
  };
  return same(x.node_.get(), y.node_.get());
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expression& e) {
  switch (e.kind()) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Neg:
      return 3;
    case Kind::Pow:
      return 4;
    case Kind::Constant:
      // Negative constants print as "(-p/q)", an atom.
      return 5;
    default:
      return 5;
  }
}

std::string print(const Expression& e);

std::string wrap(const std::string& s) { return "(" + s + ")"; }

bool starts_with_digit(const std::string& s) {
  return !s.empty() && std::isdigit(static_cast<unsigned char>(s[0]));
}

std::string print(const Expression& e) {
  switch (e.kind()) {
    case Kind::Constant: {
      const Rational& v = e.value();
      if (v < 0) return wrap(to_string(v));
      return to_string(v);
    }
    case Kind::Variable:
      return "x" + std::to_string(e.var_index());
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const int p = precedence(e);
      const Expression l = e.lhs();
      const Expression r = e.rhs();
      std::string ls = print(l);
      std::string rs = print(r);
      if (precedence(l) < p) ls = wrap(ls);
      if (precedence(r) <= p) rs = wrap(rs);
      // A digit after '/' would be read back as part of a rational literal.
      if (e.kind() == Kind::Div && starts_with_digit(rs)) rs = wrap(rs);
      const char* op = e.kind() == Kind::Add   ? "+"
                       : e.kind() == Kind::Sub ? "-"
                       : e.kind() == Kind::Mul ? "*"
                                               : "/";
      return ls + op + rs;
    }
    case Kind::Neg: {
      std::string s = print(e.arg());
      // "-2" would be read back as a negative literal.
      if (precedence(e.arg()) < 3 || starts_with_digit(s)) s = wrap(s);
      return "-" + s;
    }
    case Kind::Pow: {
      std::string s = print(e.lhs());
      if (precedence(e.lhs()) < 5) s = wrap(s);
      return s + "^" + std::to_string(e.exponent());
    }
    case Kind::Sin:
      return "sin(" + print(e.arg()) + ")";
    case Kind::Cos:
      return "cos(" + print(e.arg()) + ")";
    case Kind::Exp:
      return "exp(" + print(e.arg()) + ")";
  }
  return {};
}

}  // namespace

std::string Expression::to_string() const { return print(*this); }

// ---------------------------------------------------------------------------
// Simplifying constructors

namespace {

bool is_value(const Expression& e, long v) { return e.is_constant() && e.value() == v; }

}  // namespace

Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) {
    return Expression::constant(a.value() + b.value(), a.dim());
  }
  if (is_value(a, 0)) return b;
  if (is_value(b, 0)) return a;
  return Expression::binary(Kind::Add, a, b);
}

Expression operator-(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) {
    return Expression::constant(a.value() - b.value(), a.dim());
  }
  if (is_value(b, 0)) return a;
  if (is_value(a, 0)) return -b;
  return Expression::binary(Kind::Sub, a, b);
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) {
    return Expression::constant(a.value() * b.value(), a.dim());
  }
  if (is_value(a, 0) || is_value(b, 0)) return Expression::constant(0, a.dim());
  if (is_value(a, 1)) return b;
  if (is_value(b, 1)) return a;
  return Expression::binary(Kind::Mul, a, b);
}

Expression operator/(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0) {
    return Expression::constant(a.value() / b.value(), a.dim());
  }
  if (is_value(b, 1)) return a;
  if (is_value(a, 0) && !is_value(b, 0)) return a;
  return Expression::binary(Kind::Div, a, b);
}

Expression operator-(const Expression& a) {
  if (a.is_constant()) return Expression::constant(-a.value(), a.dim());
  if (a.kind() == Kind::Neg) return a.arg();
  return Expression::unary(Kind::Neg, a);
}

Expression pow(const Expression& base, std::uint32_t exponent) {
  if (exponent == 0) return Expression::constant(1, base.dim());
  if (exponent == 1) return base;
  if (base.is_constant()) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.value().get_num_mpz_t(), exponent);
    mpz_pow_ui(r.get_den_mpz_t(), base.value().get_den_mpz_t(), exponent);
    return Expression::constant(r, base.dim());
  }
  return Expression::power(base, exponent);
}

Expression sin(const Expression& a) {
  if (is_value(a, 0)) return a;
  return Expression::unary(Kind::Sin, a);
}

Expression cos(const Expression& a) {
  if (is_value(a, 0)) return Expression::constant(1, a.dim());
  return Expression::unary(Kind::Cos, a);
}

Expression exp(const Expression& a) {
  if (is_value(a, 0)) return Expression::constant(1, a.dim());
  return Expression::unary(Kind::Exp, a);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t dim) : text_(text), dim_(dim) {}

  Expression parse() {
    Expression e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool peek_digit() {
    skip_space();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  std::string read_digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a natural number");
    return std::string(text_.substr(start, pos_ - start));
  }

  Expression parse_expr() {
    Expression e = parse_term();
    while (true) {
      if (accept('+')) {
        e = Expression::binary(Kind::Add, e, parse_term());
      } else if (accept('-')) {
        e = Expression::binary(Kind::Sub, e, parse_term());
      } else {
        return e;
      }
    }
  }

  Expression parse_term() {
    Expression e = parse_factor();
    while (true) {
      if (accept('*')) {
        e = Expression::binary(Kind::Mul, e, parse_factor());
      } else if (accept('/')) {
        e = Expression::binary(Kind::Div, e, parse_factor());
      } else {
        return e;
      }
    }
  }

  Expression parse_factor() {
    if (accept('-')) {
      // '-' directly followed by a literal (and no '^') is a negative constant.
      if (peek_digit()) {
        const std::size_t save = pos_;
        Rational v = parse_number();
        if (!peek('^')) return Expression::constant(-v, dim_);
        pos_ = save;
      }
      return Expression::unary(Kind::Neg, parse_factor());
    }
    Expression base = parse_atom();
    if (accept('^')) {
      skip_space();
      if (peek('-')) fail("negative exponent");
      const std::string digits = read_digits();
      if (digits.size() > 9) fail("exponent too large");
      base = Expression::power(base, static_cast<std::uint32_t>(std::stoul(digits)));
    }
    return base;
  }

  Rational parse_number() {
    skip_space();
    const std::string head = read_digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::string frac = read_digits();
      return parse_rational(head + "." + frac);
    }
    // nat '/' nat is one rational literal.
    const std::size_t save = pos_;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      skip_space();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        const std::size_t den_at = pos_;
        const std::string den = read_digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
          // "1/2.5" is 1 divided by a decimal; leave the '/' to parse_term.
          pos_ = save;
          return parse_rational(head);
        }
        if (Integer(den) == 0) throw ParseError("zero denominator", den_at);
        return parse_rational(head + "/" + den);
      }
    }
    pos_ = save;
    return parse_rational(head);
  }

  Expression parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Expression::constant(parse_number(), dim_);
    }
    if (c == '(') {
      ++pos_;
      Expression e = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "x") {
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          fail("expected variable index after 'x'");
        }
        const std::string digits = read_digits();
        const unsigned long idx = digits.size() > 9 ? ~0ul : std::stoul(digits);
        if (idx >= dim_) {
          pos_ = start;
          fail("variable x" + digits + " out of range for dimension " + std::to_string(dim_));
        }
        return Expression::variable(idx, dim_);
      }
      Kind kind;
      if (name == "sin") {
        kind = Kind::Sin;
      } else if (name == "cos") {
        kind = Kind::Cos;
      } else if (name == "exp") {
        kind = Kind::Exp;
      } else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      Expression arg = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return Expression::unary(kind, arg);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text, std::size_t dim) {
  if (dim == 0) throw PreconditionError("expression dimension must be at least 1");
  return Parser(text, dim).parse();
}

// ---------------------------------------------------------------------------
// Differentiation

Expression diff(const Expression& e, std::size_t var) {
  if (var >= e.dim()) throw PreconditionError("differentiation variable out of range");
  const std::size_t dim = e.dim();
  switch (e.kind()) {
    case Kind::Constant:
      return Expression::constant(0, dim);
    case Kind::Variable:
      return Expression::constant(e.var_index() == var ? 1 : 0, dim);
    default:
      break;
  }
  if (!e.depends_on(var)) return Expression::constant(0, dim);
  switch (e.kind()) {
    case Kind::Add:
      return diff(e.lhs(), var) + diff(e.rhs(), var);
    case Kind::Sub:
      return diff(e.lhs(), var) - diff(e.rhs(), var);
    case Kind::Mul:
      return diff(e.lhs(), var) * e.rhs() + e.lhs() * diff(e.rhs(), var);
    case Kind::Div: {
      const Expression u = e.lhs();
      const Expression v = e.rhs();
      return (diff(u, var) * v - u * diff(v, var)) / pow(v, 2);
    }
    case Kind::Pow: {
      const std::uint32_t k = e.exponent();
      if (k == 0) return Expression::constant(0, dim);
      return Expression::constant(k, dim) * pow(e.lhs(), k - 1) * diff(e.lhs(), var);
    }
    case Kind::Neg:
      return -diff(e.arg(), var);
    case Kind::Sin:
      return cos(e.arg()) * diff(e.arg(), var);
    case Kind::Cos:
      return -(sin(e.arg()) * diff(e.arg(), var));
    case Kind::Exp:
      return e * diff(e.arg(), var);
    default:
      break;
  }
  throw PreconditionError("unhandled expression kind");
}

Expression diff(const Expression& e, const MultiIndex& orders) {
  if (orders.dim() != e.dim()) throw DimensionMismatch(e.dim(), orders.dim());
  Expression out = e;
  for (std::size_t j = 0; j < orders.dim(); ++j) {
    for (std::uint32_t t = 0; t < orders[j]; ++t) out = diff(out, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

Rational eval_exact(const Expression& e, std::span<const Rational> point) {
  if (point.size() != e.dim()) throw DimensionMismatch(e.dim(), point.size());
  switch (e.kind()) {
    case Kind::Constant:
      return e.value();
    case Kind::Variable:
      return point[e.var_index()];
    case Kind::Add:
      return eval_exact(e.lhs(), point) + eval_exact(e.rhs(), point);
    case Kind::Sub:
      return eval_exact(e.lhs(), point) - eval_exact(e.rhs(), point);
    case Kind::Mul:
      return eval_exact(e.lhs(), point) * eval_exact(e.rhs(), point);
    case Kind::Div: {
      const Rational den = eval_exact(e.rhs(), point);
      if (den == 0) throw EvaluationError("division by zero");
      return eval_exact(e.lhs(), point) / den;
    }
    case Kind::Pow: {
      const Rational base = eval_exact(e.lhs(), point);
      Rational r;
      mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e.exponent());
      mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e.exponent());
      return r;
    }
    case Kind::Neg:
      return -eval_exact(e.arg(), point);
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
      throw EvaluationError("transcendental function in exact evaluation");
  }
  throw EvaluationError("unhandled expression kind");
}

namespace {

double eval_f64_node(const Expression& e, std::span<const double> point) {
  switch (e.kind()) {
    case Kind::Constant:
      return to_double(e.value());
    case Kind::Variable:
      return point[e.var_index()];
    case Kind::Add:
      return eval_f64_node(e.lhs(), point) + eval_f64_node(e.rhs(), point);
    case Kind::Sub:
      return eval_f64_node(e.lhs(), point) - eval_f64_node(e.rhs(), point);
    case Kind::Mul:
      return eval_f64_node(e.lhs(), point) * eval_f64_node(e.rhs(), point);
    case Kind::Div: {
      const double den = eval_f64_node(e.rhs(), point);
      if (den == 0.0) throw EvaluationError("division by zero");
      return eval_f64_node(e.lhs(), point) / den;
    }
    case Kind::Pow: {
      const double base = eval_f64_node(e.lhs(), point);
      double r = 1.0;
      double x = base;
      for (std::uint32_t k = e.exponent(); k; k >>= 1u) {
        if (k & 1u) r *= x;
        x *= x;
      }
      return r;
    }
    case Kind::Neg:
      return -eval_f64_node(e.arg(), point);
    case Kind::Sin:
      return std::sin(eval_f64_node(e.arg(), point));
    case Kind::Cos:
      return std::cos(eval_f64_node(e.arg(), point));
    case Kind::Exp:
      return std::exp(eval_f64_node(e.arg(), point));
  }
  throw EvaluationError("unhandled expression kind");
}

}  // namespace

double eval_f64(const Expression& e, std::span<const double> point) {
  if (point.size() != e.dim()) throw DimensionMismatch(e.dim(), point.size());
  const double v = eval_f64_node(e, point);
  if (!std::isfinite(v)) throw EvaluationError("non-finite value " + e.to_string());
  return v;
}

Expression compose_affine(const Expression& e, const Rational& scale,
                          std::span<const Rational> offset) {
  if (offset.size() != e.dim()) throw DimensionMismatch(e.dim(), offset.size());
  const std::size_t dim = e.dim();
  switch (e.kind()) {
    case Kind::Constant:
      return e;
    case Kind::Variable: {
      const std::size_t j = e.var_index();
      return Expression::constant(scale, dim) * e + Expression::constant(offset[j], dim);
    }
    case Kind::Add:
      return compose_affine(e.lhs(), scale, offset) + compose_affine(e.rhs(), scale, offset);
    case Kind::Sub:
      return compose_affine(e.lhs(), scale, offset) - compose_affine(e.rhs(), scale, offset);
    case Kind::Mul:
      return compose_affine(e.lhs(), scale, offset) * compose_affine(e.rhs(), scale, offset);
    case Kind::Div:
      return compose_affine(e.lhs(), scale, offset) / compose_affine(e.rhs(), scale, offset);
    case Kind::Pow:
      return pow(compose_affine(e.lhs(), scale, offset), e.exponent());
    case Kind::Neg:
      return -compose_affine(e.arg(), scale, offset);
    case Kind::Sin:
      return sin(compose_affine(e.arg(), scale, offset));
    case Kind::Cos:
      return cos(compose_affine(e.arg(), scale, offset));
    case Kind::Exp:
      return exp(compose_affine(e.arg(), scale, offset));
  }
  throw PreconditionError("unhandled expression kind");
}

}  // namespace bernapprox
