#pragma once

#include <cstddef>
#include <span>

#include "bernapprox/polynomial.hpp"
#include "bernapprox/rational.hpp"

namespace bernapprox {

// Univariate Lagrange interpolation over exact rational nodes. All results
// are one-dimensional polynomials.

/// L_j with L_j(nodes[m]) = [j == m]; `j` is zero-based. Degree n - 1.
Polynomial lagrange_basis(std::span<const Rational> nodes, std::size_t j);

/// sum_k values[k] * L_k: the unique polynomial of degree <= n - 1 through
/// the points (nodes[k], values[k]).
Polynomial interpolate(std::span<const Rational> values, std::span<const Rational> nodes);

/// prod_k (x - nodes[k]), monic of degree n.
Polynomial nodal_polynomial(std::span<const Rational> nodes);

/// |omega(y)| * deriv_sup / n!, where deriv_sup bounds |f^(n)| between the
/// leftmost node and y. Requires y to the right of every node.
double interp_error_bound(std::span<const Rational> nodes, const Rational& y, double deriv_sup);

}  // namespace bernapprox
