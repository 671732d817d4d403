#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bernapprox/bernstein.hpp"
#include "bernapprox/expr.hpp"
#include "bernapprox/multiindex.hpp"
#include "bernapprox/rational.hpp"

namespace bernapprox {

/// B_alpha(f)(x) evaluated as the literal sum over beta <= alpha, without
/// expanding to the monomial basis. Oracle for `bernstein`.
Rational bernstein_eval_direct(const SampledFunction& f, const MultiIndex& alpha,
                               std::span<const Rational> x);

/// Iterated central differences, one axis at a time. Intended for
/// |orders| <= 4; accuracy degrades quickly beyond that.
double finite_difference(const Expression& e, const MultiIndex& orders, std::span<const double> x,
                         double step);

struct ConvergenceRow {
  MultiIndex alpha;
  MultiIndex beta;
  double sup_error = 0.0;
  std::size_t grid = 0;
  bool exact = false;
  /// Non-empty when the row could not be computed (e.g. alpha does not
  /// dominate beta); such rows carry no estimate.
  std::string failure;
};

/// Below this, an error computed from double samples is indistinguishable
/// from zero and counts as converged.
inline constexpr double kFloatNoiseFloor = 1e-9;

struct ConvergenceVerdict {
  MultiIndex beta;
  double bottom = 0.0;  // error at the smallest alpha in the ladder
  double top = 0.0;     // error at the largest alpha
  bool halved = false;  // top < bottom / 2, top == 0, or float noise only
};

struct ConvergenceReport {
  std::string function;
  std::size_t dim = 0;
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceVerdict> verdicts;
  std::vector<std::pair<std::string, double>> stage_seconds;

  bool all_halved() const;
  bool has_failures() const;
};

/// For every (alpha, beta): grid sup over [0,1]^d of |d^beta B_alpha(f) - d^beta f|.
/// Rows where alpha does not strictly dominate beta are reported as
/// failures rather than aborting the run.
ConvergenceReport run_convergence(const Expression& f, const std::string& function_text,
                                  const std::vector<MultiIndex>& betas,
                                  const std::vector<MultiIndex>& ladder,
                                  std::size_t grid_per_axis);

/// Timings are wall-clock and therefore excluded unless asked for, so that
/// identical runs serialize identically.
nlohmann::json to_json(const ConvergenceReport& report, bool include_timing = false);
/// "alpha;beta;sup_error;grid" header plus one line per row.
std::string to_csv(const ConvergenceReport& report);

}  // namespace bernapprox
