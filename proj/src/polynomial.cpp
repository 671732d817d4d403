#include "bernapprox/polynomial.hpp"

#include <algorithm>
#include <optional>

#include "bernapprox/errors.hpp"

namespace bernapprox {

namespace {

void require_dim(std::size_t expected, std::size_t actual) {
  if (expected != actual) throw DimensionMismatch(expected, actual);
}

Rational rational_pow(const Rational& base, unsigned k) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), k);
  return r;
}

}  // namespace

Polynomial::Polynomial(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw PreconditionError("polynomial dimension must be at least 1");
}

Polynomial Polynomial::constant(const Rational& c, std::size_t dim) {
  Polynomial p(dim);
  p.add_term(MultiIndex(dim), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t j, std::size_t dim) {
  Polynomial p(dim);
  p.add_term(MultiIndex::unit(j, dim), 1);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& exponent, const Rational& coefficient) {
  Polynomial p(exponent.dim());
  p.add_term(exponent, coefficient);
  return p;
}

Rational Polynomial::coefficient(const MultiIndex& exponent) const {
  require_dim(dim_, exponent.dim());
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const MultiIndex& exponent, const Rational& c) {
  require_dim(dim_, exponent.dim());
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiIndex Polynomial::degree_bound() const {
  MultiIndex deg(dim_);
  for (const auto& [e, c] : terms_) {
    for (std::size_t j = 0; j < dim_; ++j) deg[j] = std::max(deg[j], e[j]);
  }
  return deg;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_dim(dim_, other.dim_);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_dim(dim_, other.dim_);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  require_dim(dim_, other.dim_);
  Polynomial out(dim_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) out.add_term(ea + eb, ca * cb);
  }
  *this = std::move(out);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coeff] : terms_) coeff *= c;
  return *this;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  // Highest exponents first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (e[j] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(j);
      if (e[j] > 1) mono += "^" + std::to_string(e[j]);
    }
    if (mono.empty()) {
      s += bernapprox::to_string(mag);
    } else if (mag == 1) {
      s += mono;
    } else {
      s += bernapprox::to_string(mag) + "*" + mono;
    }
  }
  return s;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  r *= b;
  return r;
}
Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
Polynomial operator-(Polynomial a) { return a *= Rational(-1); }

Polynomial pow(const Polynomial& base, unsigned exponent) {
  Polynomial result = Polynomial::constant(1, base.dim());
  Polynomial sq = base;
  while (exponent) {
    if (exponent & 1u) result *= sq;
    exponent >>= 1u;
    if (exponent) sq *= sq;
  }
  return result;
}

Rational evaluate(const Polynomial& p, std::span<const Rational> x) {
  require_dim(p.dim(), x.size());
  // Cache powers per variable up to the degree bound.
  const MultiIndex deg = p.degree_bound();
  std::vector<std::vector<Rational>> powers(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) {
    powers[j].resize(deg[j] + 1);
    powers[j][0] = 1;
    for (std::uint32_t k = 1; k <= deg[j]; ++k) powers[j][k] = powers[j][k - 1] * x[j];
  }
  Rational sum = 0;
  for (const auto& [e, c] : p.terms()) {
    Rational t = c;
    for (std::size_t j = 0; j < p.dim(); ++j) {
      if (e[j]) t *= powers[j][e[j]];
    }
    sum += t;
  }
  return sum;
}

namespace {

using TermIt = Polynomial::Terms::const_iterator;

// Horner in x_var over [first, last), which all share exponents for
// variables < var. Terms are in lexicographic order, so grouping by the
// exponent of x_var yields contiguous runs.
double horner(TermIt first, TermIt last, std::size_t var, std::span<const double> x) {
  const std::size_t d = x.size();
  if (var == d) return to_double(first->second);
  double acc = 0.0;
  std::uint32_t prev_exp = 0;
  bool started = false;
  // Runs come in increasing exponent; walk them in reverse for Horner.
  std::vector<std::pair<std::uint32_t, double>> runs;
  while (first != last) {
    const std::uint32_t e = first->first[var];
    TermIt run_end = first;
    while (run_end != last && run_end->first[var] == e) ++run_end;
    runs.emplace_back(e, horner(first, run_end, var + 1, x));
    first = run_end;
  }
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    if (started) {
      for (std::uint32_t k = it->first; k < prev_exp; ++k) acc *= x[var];
    }
    acc += it->second;
    prev_exp = it->first;
    started = true;
  }
  for (std::uint32_t k = 0; k < prev_exp; ++k) acc *= x[var];
  return acc;
}

}  // namespace

double evaluate(const Polynomial& p, std::span<const double> x) {
  require_dim(p.dim(), x.size());
  if (p.is_zero()) return 0.0;
  return horner(p.terms().begin(), p.terms().end(), 0, x);
}

Polynomial derivative(const Polynomial& p, const MultiIndex& orders) {
  require_dim(p.dim(), orders.dim());
  Polynomial out(p.dim());
  for (const auto& [e, c] : p.terms()) {
    if (!le(orders, e)) continue;
    Rational factor = c;
    for (std::size_t j = 0; j < p.dim(); ++j) factor *= falling_factorial(e[j], orders[j]);
    out.add_term(e - orders, factor);
  }
  return out;
}

Homothety::Homothety(Rational scale, std::vector<Rational> offset)
    : scale_(std::move(scale)), offset_(std::move(offset)) {
  if (scale_ == 0) throw PreconditionError("homothety scale must be nonzero");
  if (offset_.empty()) throw PreconditionError("homothety dimension must be at least 1");
}

Homothety Homothety::inverse() const {
  std::vector<Rational> off(offset_.size());
  for (std::size_t j = 0; j < off.size(); ++j) off[j] = -offset_[j] / scale_;
  return Homothety(1 / scale_, std::move(off));
}

std::vector<Rational> Homothety::apply(std::span<const Rational> x) const {
  require_dim(dim(), x.size());
  std::vector<Rational> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = scale_ * x[j] + offset_[j];
  return y;
}

Polynomial compose(const Polynomial& p, const Homothety& h) {
  require_dim(p.dim(), h.dim());
  const std::size_t d = p.dim();
  if (p.is_zero()) return p;
  const MultiIndex deg = p.degree_bound();
  std::vector<std::size_t> extent(d);
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) {
    extent[j] = deg[j] + 1;
    total *= extent[j];
  }
  std::vector<Rational> tensor(total);
  for (const auto& [e, c] : p.terms()) {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < d; ++j) flat = flat * extent[j] + e[j];
    tensor[flat] = c;
  }

  // Substitute x_j -> scale x_j + v_j one axis at a time. The coefficient of
  // x^i in (scale x + v)^k is C(k,i) scale^i v^(k-i).
  std::vector<Rational> next(total);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t n = extent[j];
    std::vector<std::vector<Rational>> expansion(n, std::vector<Rational>(n));
    for (std::uint32_t k = 0; k < n; ++k) {
      for (std::uint32_t i = 0; i <= k; ++i) {
        expansion[k][i] = Rational(binomial(k, i)) * rational_pow(h.scale(), i) *
                          rational_pow(h.offset()[j], k - i);
      }
    }
    std::size_t outer = 1;
    for (std::size_t i = 0; i < j; ++i) outer *= extent[i];
    std::size_t inner = 1;
    for (std::size_t i = j + 1; i < d; ++i) inner *= extent[i];
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t t = 0; t < inner; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
          Rational acc = 0;
          for (std::size_t k = i; k < n; ++k) {
            const Rational& c = tensor[(o * n + k) * inner + t];
            if (c == 0 || expansion[k][i] == 0) continue;
            acc += c * expansion[k][i];
          }
          next[(o * n + i) * inner + t] = std::move(acc);
        }
      }
    }
    std::swap(tensor, next);
  }

  Polynomial out(d);
  MultiIndex exponent(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (tensor[flat] != 0) {
      std::size_t rest = flat;
      for (std::size_t j = d; j-- > 0;) {
        exponent[j] = static_cast<std::uint32_t>(rest % extent[j]);
        rest /= extent[j];
      }
      out.add_term(exponent, tensor[flat]);
    }
  }
  return out;
}

bool is_polynomial_expression(const Expression& e) {
  using Kind = Expression::Kind;
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Variable:
      return true;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
      return is_polynomial_expression(e.lhs()) && is_polynomial_expression(e.rhs());
    case Kind::Div: {
      if (!is_polynomial_expression(e.lhs())) return false;
      const Expression den = e.rhs();
      for (std::size_t j = 0; j < e.dim(); ++j) {
        if (den.depends_on(j)) return false;
      }
      return den.is_exact() && eval_exact(den, std::vector<Rational>(e.dim())) != 0;
    }
    case Kind::Pow:
    case Kind::Neg:
      return is_polynomial_expression(e.lhs());
    default:
      return false;
  }
}

Polynomial to_polynomial(const Expression& e) {
  using Kind = Expression::Kind;
  const std::size_t d = e.dim();
  switch (e.kind()) {
    case Kind::Constant:
      return Polynomial::constant(e.value(), d);
    case Kind::Variable:
      return Polynomial::variable(e.var_index(), d);
    case Kind::Add:
      return to_polynomial(e.lhs()) + to_polynomial(e.rhs());
    case Kind::Sub:
      return to_polynomial(e.lhs()) - to_polynomial(e.rhs());
    case Kind::Mul:
      return to_polynomial(e.lhs()) * to_polynomial(e.rhs());
    case Kind::Div: {
      const Expression den = e.rhs();
      for (std::size_t j = 0; j < d; ++j) {
        if (den.depends_on(j)) throw PreconditionError("not a polynomial: variable denominator");
      }
      if (!den.is_exact()) throw PreconditionError("not a polynomial: transcendental denominator");
      const Rational v = eval_exact(den, std::vector<Rational>(d));
      if (v == 0) throw EvaluationError("division by zero");
      return to_polynomial(e.lhs()) * Rational(1 / v);
    }
    case Kind::Pow:
      return pow(to_polynomial(e.lhs()), e.exponent());
    case Kind::Neg:
      return -to_polynomial(e.arg());
    default:
      throw PreconditionError("not a polynomial: transcendental function");
  }
}

nlohmann::json to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) {
    terms.push_back({{"exp", std::vector<std::uint32_t>(e.entries().begin(), e.entries().end())},
                     {"num", c.get_num().get_str()},
                     {"den", c.get_den().get_str()}});
  }
  return {{"dim", p.dim()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
  const std::size_t d = j.at("dim").get<std::size_t>();
  Polynomial p(d);
  std::optional<MultiIndex> prev;
  for (const auto& t : j.at("terms")) {
    MultiIndex e(t.at("exp").get<std::vector<std::uint32_t>>());
    if (e.dim() != d) throw DimensionMismatch(d, e.dim());
    Rational c(Integer(t.at("num").get<std::string>()), Integer(t.at("den").get<std::string>()));
    if (c.get_den() == 0) throw ParseError("zero denominator in polynomial term", 0);
    c.canonicalize();
    if (c == 0) throw ParseError("explicit zero coefficient in polynomial term", 0);
    if (prev && !LexLess{}(*prev, e)) {
      throw ParseError("polynomial terms not in strictly increasing lexicographic order", 0);
    }
    p.add_term(e, c);
    prev = std::move(e);
  }
  return p;
}

}  // namespace bernapprox
