#include "bernapprox/multiindex.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "bernapprox/errors.hpp"

namespace bernapprox {

namespace {

void require_same_dim(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
}

}  // namespace

MultiIndex::MultiIndex(std::size_t dim) : entries_(dim, 0) {
  if (dim == 0) throw PreconditionError("multiindex dimension must be at least 1");
}

MultiIndex::MultiIndex(std::initializer_list<value_type> entries) : entries_(entries) {
  if (entries_.empty()) throw PreconditionError("multiindex dimension must be at least 1");
}

MultiIndex::MultiIndex(std::vector<value_type> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw PreconditionError("multiindex dimension must be at least 1");
}

MultiIndex MultiIndex::constant(value_type n, std::size_t dim) {
  MultiIndex a(dim);
  std::fill(a.entries_.begin(), a.entries_.end(), n);
  return a;
}

MultiIndex MultiIndex::unit(std::size_t j, std::size_t dim, value_type scale) {
  MultiIndex a(dim);
  if (j >= dim) throw PreconditionError("unit direction out of range");
  a.entries_[j] = scale;
  return a;
}

std::uint64_t MultiIndex::order() const noexcept {
  std::uint64_t s = 0;
  for (auto e : entries_) s += e;
  return s;
}

bool MultiIndex::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](value_type e) { return e == 0; });
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(entries_[j]);
  }
  return s + ")";
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  MultiIndex c(a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) c[j] = a[j] + b[j];
  return c;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  if (!le(b, a)) {
    throw PreconditionError("multiindex subtraction " + a.to_string() + " - " + b.to_string() +
                            " is undefined");
  }
  MultiIndex c(a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) c[j] = a[j] - b[j];
  return c;
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& a) { return os << a.to_string(); }

bool LexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  return std::lexicographical_compare(a.entries().begin(), a.entries().end(),
                                      b.entries().begin(), b.entries().end());
}

bool le(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (a[j] > b[j]) return false;
  }
  return true;
}

bool lt(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (a[j] >= b[j]) return false;
  }
  return true;
}

Integer binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Integer factorial(std::uint64_t n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer falling_factorial(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0;
  Integer r = 1;
  for (std::uint64_t i = 0; i < b; ++i) r *= static_cast<unsigned long>(a - i);
  return r;
}

Integer binomial(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  Integer r = 1;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (b[j] > a[j]) return 0;
    r *= binomial(a[j], b[j]);
  }
  return r;
}

Integer factorial(const MultiIndex& a) {
  Integer r = 1;
  for (auto e : a.entries()) r *= factorial(e);
  return r;
}

MultiIndex min(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  MultiIndex c(a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) c[j] = std::min(a[j], b[j]);
  return c;
}

std::vector<Rational> ratio(const MultiIndex& b, const MultiIndex& a) {
  require_same_dim(a, b);
  std::vector<Rational> out;
  out.reserve(a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (a[j] == 0) throw PreconditionError("ratio requires a >= 1 componentwise");
    Rational q(b[j], a[j]);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

std::size_t box_size(const MultiIndex& upper) {
  std::size_t n = 1;
  for (auto e : upper.entries()) n *= static_cast<std::size_t>(e) + 1;
  return n;
}

void for_each_below(const MultiIndex& upper, const std::function<void(const MultiIndex&)>& visit) {
  MultiIndex g(upper.dim());
  const std::size_t d = upper.dim();
  while (true) {
    visit(g);
    // Odometer increment, last entry fastest: yields lexicographic order.
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (g[j] < upper[j]) {
        ++g[j];
        break;
      }
      g[j] = 0;
      if (j == 0) return;
    }
  }
}

std::vector<MultiIndex> indices_below(const MultiIndex& upper) {
  std::vector<MultiIndex> out;
  out.reserve(box_size(upper));
  for_each_below(upper, [&](const MultiIndex& g) { out.push_back(g); });
  return out;
}

MultiIndex parse_multiindex(const std::string& text, std::size_t dim) {
  std::vector<MultiIndex::value_type> entries;
  std::stringstream ss(text);
  std::string item;
  std::size_t offset = 0;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("malformed multiindex '" + text + "'", offset);
    }
    entries.push_back(static_cast<MultiIndex::value_type>(std::stoul(item)));
    offset += item.size() + 1;
  }
  if (entries.empty()) throw ParseError("empty multiindex", 0);
  if (entries.size() == 1 && dim > 1) {
    return MultiIndex::constant(entries[0], dim);
  }
  if (entries.size() != dim) throw DimensionMismatch(dim, entries.size());
  return MultiIndex(std::move(entries));
}

}  // namespace bernapprox
