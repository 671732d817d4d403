#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "bernapprox/expr.hpp"
#include "bernapprox/multiindex.hpp"
#include "bernapprox/polynomial.hpp"
#include "bernapprox/rational.hpp"

namespace bernapprox {

/// Rounds every coefficient a to round(a D) / D with D = ceil(1/eps) + 1,
/// so |a - b| <= 1/(2D) < eps. Coefficients with denominator dividing D
/// are unchanged; coefficients that round to zero are dropped.
Polynomial round_to_rational(const Polynomial& p, const Rational& eps);
Integer rounding_denominator(const Rational& eps);

/// eps * prod_j (a_j + 1) * a!: a certified bound on sup over [0,1]^d of
/// |d^beta (p - q)| for every beta, when p and q have exponents <= a and
/// coefficients within eps of each other.
Rational rounding_derivative_bound(const MultiIndex& degree, const Rational& eps);
/// eps * |a| * a!, the smaller constant that the safe bound replaces. Kept
/// for reporting; it does not hold in general (see the (1,1) case).
Rational loose_rounding_bound(const MultiIndex& degree, const Rational& eps);

/// |scale|^|beta| * bound: how a derivative error bound moves under p -> p o h.
Rational transport_error(const Rational& bound, const MultiIndex& beta, const Homothety& h);

struct ApproxRequest {
  Expression f;
  /// Smoothness budget; nullopt means infinitely smooth.
  std::optional<MultiIndex> gamma;
  std::uint32_t n = 1;
  std::size_t grid_per_axis = 101;
  std::uint32_t alpha_cap = 64;
};

/// All beta <= min{(n,...,n), gamma} in lexicographic order.
std::vector<MultiIndex> derivative_orders(std::uint32_t n, const std::optional<MultiIndex>& gamma,
                                          std::size_t dim);

struct BetaError {
  MultiIndex beta;
  /// Grid sup of d^beta (B_alpha(f o h) - f o h) over [0,1]^d.
  double bernstein_estimate = 0.0;
  /// The same, times (1/(2n))^|beta|: its contribution on [-n,n]^d.
  double bernstein_transported = 0.0;
  /// Grid sup of d^beta (q_n - f) over [-n,n]^d.
  double final_estimate = 0.0;
};

struct ApproxLedger {
  Rational bernstein_target;   // 1/(2n)
  Rational accept_threshold;   // 0.9/(2n)
  Rational rounding_target;    // 1/(2n)
  Rational rounding_eps;
  Integer rounding_denominator;
  Rational loose_bound;        // eps |alpha| alpha!
  Rational safe_bound;         // eps prod(alpha_j+1) alpha!
  std::vector<std::uint32_t> searched;  // candidate m values, in order
};

struct ApproxResult {
  std::uint32_t n = 1;
  MultiIndex alpha{1};
  Polynomial q{1};
  std::vector<BetaError> errors;
  ApproxLedger ledger;
};

/// The Bernstein degree search ran out of room, or the final estimate did
/// not come out below 1/n. Carries the best estimates reached.
class ApproxFailure : public std::runtime_error {
 public:
  ApproxFailure(const std::string& what, MultiIndex alpha, std::vector<BetaError> best,
                ApproxLedger ledger)
      : std::runtime_error(what),
        alpha_(std::move(alpha)),
        best_(std::move(best)),
        ledger_(std::move(ledger)) {}

  const MultiIndex& alpha() const noexcept { return alpha_; }
  const std::vector<BetaError>& best() const noexcept { return best_; }
  const ApproxLedger& ledger() const noexcept { return ledger_; }

 private:
  MultiIndex alpha_;
  std::vector<BetaError> best_;
  ApproxLedger ledger_;
};

/// Builds q_n with rational coefficients such that the grid-estimated
/// sup of |d^beta (q_n - f)| over [-n,n]^d is below 1/n for every
/// beta <= min{(n,...,n), gamma}:
///   1. h(x) = 2n x - (n,...,n) maps [0,1]^d onto [-n,n]^d;
///   2. doubling search over alpha = (m,...,m) until every Bernstein-stage
///      error of f o h, transported back by (1/(2n))^|beta|, is <= 0.9/(2n);
///   3. coefficient rounding with a safe derivative bound <= 1/(2n);
///   4. q_n = r_n o h^{-1};
///   5. re-estimation of every error on [-n,n]^d.
/// Throws ApproxFailure when step 2 exhausts alpha_cap or step 5 fails.
ApproxResult build_qn(const ApproxRequest& request);

nlohmann::json to_json(const ApproxLedger& ledger);
nlohmann::json to_json(const ApproxResult& result);
nlohmann::json failure_json(const ApproxFailure& failure, std::uint32_t n);

}  // namespace bernapprox
