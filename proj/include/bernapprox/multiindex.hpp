#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bernapprox/rational.hpp"

namespace bernapprox {

/// A multiindex of dimension d >= 1: non-negative exponents or derivative
/// orders. The dimension is fixed at construction; entries may be changed.
class MultiIndex {
 public:
  using value_type = std::uint32_t;

  /// The zero multiindex of dimension `dim`.
  explicit MultiIndex(std::size_t dim);
  MultiIndex(std::initializer_list<value_type> entries);
  explicit MultiIndex(std::vector<value_type> entries);

  /// (n, ..., n) of dimension d.
  static MultiIndex constant(value_type n, std::size_t dim);
  /// scale * e_j.
  static MultiIndex unit(std::size_t j, std::size_t dim, value_type scale = 1);

  std::size_t dim() const noexcept { return entries_.size(); }
  value_type operator[](std::size_t j) const { return entries_[j]; }
  value_type& operator[](std::size_t j) { return entries_[j]; }
  std::span<const value_type> entries() const noexcept { return entries_; }

  /// |a| = sum of entries.
  std::uint64_t order() const noexcept;
  bool is_zero() const noexcept;

  std::string to_string() const;  // "(1,2)"

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<value_type> entries_;
};

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
/// a - b, defined only when b <= a.
MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);

std::ostream& operator<<(std::ostream& os, const MultiIndex& a);

/// Lexicographic total order (first entry most significant). Used as the
/// container ordering for polynomial terms; unrelated to the partial order.
struct LexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// Componentwise a <= b.
bool le(const MultiIndex& a, const MultiIndex& b);
/// Componentwise a < b in every entry.
bool lt(const MultiIndex& a, const MultiIndex& b);

/// prod_j C(a_j, b_j), zero when some b_j > a_j.
Integer binomial(const MultiIndex& a, const MultiIndex& b);
/// prod_j a_j!.
Integer factorial(const MultiIndex& a);
MultiIndex min(const MultiIndex& a, const MultiIndex& b);
/// (b_1/a_1, ..., b_d/a_d); requires a >= 1.
std::vector<Rational> ratio(const MultiIndex& b, const MultiIndex& a);

Integer binomial(std::uint64_t n, std::uint64_t k);
Integer factorial(std::uint64_t n);
/// a (a-1) ... (a-b+1); 1 for b = 0, 0 for b > a.
Integer falling_factorial(std::uint64_t a, std::uint64_t b);

/// Number of multiindices g with g <= upper: prod (upper_j + 1).
std::size_t box_size(const MultiIndex& upper);
/// Calls `visit` on every g <= upper in lexicographic order.
void for_each_below(const MultiIndex& upper, const std::function<void(const MultiIndex&)>& visit);
std::vector<MultiIndex> indices_below(const MultiIndex& upper);

/// Parses "1,2,3" (no parentheses); a single entry is broadcast to `dim`.
MultiIndex parse_multiindex(const std::string& text, std::size_t dim);

}  // namespace bernapprox
