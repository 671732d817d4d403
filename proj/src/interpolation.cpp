#include "bernapprox/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bernapprox/errors.hpp"

namespace bernapprox {

namespace {

void require_distinct(std::span<const Rational> nodes) {
  if (nodes.empty()) throw PreconditionError("interpolation needs at least one node");
  std::vector<Rational> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionError("interpolation nodes must be pairwise distinct");
  }
}

// (x - c) as a univariate polynomial.
Polynomial linear_factor(const Rational& c) {
  Polynomial p = Polynomial::variable(0, 1);
  p.add_term(MultiIndex{0}, -c);
  return p;
}

}  // namespace

Polynomial lagrange_basis(std::span<const Rational> nodes, std::size_t j) {
  require_distinct(nodes);
  if (j >= nodes.size()) throw PreconditionError("Lagrange basis index out of range");
  Polynomial p = Polynomial::constant(1, 1);
  Rational denom = 1;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k == j) continue;
    p *= linear_factor(nodes[k]);
    denom *= nodes[j] - nodes[k];
  }
  return p * Rational(1 / denom);
}

Polynomial interpolate(std::span<const Rational> values, std::span<const Rational> nodes) {
  if (values.size() != nodes.size()) {
    throw PreconditionError("interpolation needs one value per node");
  }
  require_distinct(nodes);
  Polynomial p(1);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (values[k] == 0) continue;
    p += lagrange_basis(nodes, k) * values[k];
  }
  return p;
}

Polynomial nodal_polynomial(std::span<const Rational> nodes) {
  require_distinct(nodes);
  Polynomial p = Polynomial::constant(1, 1);
  for (const auto& c : nodes) p *= linear_factor(c);
  return p;
}

double interp_error_bound(std::span<const Rational> nodes, const Rational& y, double deriv_sup) {
  require_distinct(nodes);
  for (const auto& c : nodes) {
    if (!(y > c)) throw PreconditionError("evaluation point must lie to the right of every node");
  }
  if (deriv_sup < 0 || !std::isfinite(deriv_sup)) {
    throw PreconditionError("derivative bound must be finite and non-negative");
  }
  const Rational omega = evaluate(nodal_polynomial(nodes), std::vector<Rational>{y});
  const Rational scaled = abs(omega) / Rational(factorial(nodes.size()));
  return to_double(scaled) * deriv_sup;
}

}  // namespace bernapprox
