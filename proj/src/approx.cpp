#include "bernapprox/approx.hpp"

#include <algorithm>

#include "bernapprox/bernstein.hpp"
#include "bernapprox/errors.hpp"
#include "bernapprox/grid.hpp"

namespace bernapprox {

Integer rounding_denominator(const Rational& eps) {
  if (eps <= 0) throw PreconditionError("rounding eps must be positive");
  const Rational inv = 1 / eps;
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
  return c + 1;
}

Polynomial round_to_rational(const Polynomial& p, const Rational& eps) {
  const Integer den = rounding_denominator(eps);
  Polynomial q(p.dim());
  for (const auto& [e, a] : p.terms()) {
    Rational b(round_nearest(a * den), den);
    b.canonicalize();
    q.add_term(e, b);
  }
  return q;
}

Rational rounding_derivative_bound(const MultiIndex& degree, const Rational& eps) {
  if (eps <= 0) throw PreconditionError("rounding eps must be positive");
  Integer terms = 1;
  for (auto a : degree.entries()) terms *= a + 1;
  return eps * Rational(terms * factorial(degree));
}

Rational loose_rounding_bound(const MultiIndex& degree, const Rational& eps) {
  if (eps <= 0) throw PreconditionError("rounding eps must be positive");
  return eps * Rational(Integer(static_cast<unsigned long>(degree.order())) * factorial(degree));
}

Rational transport_error(const Rational& bound, const MultiIndex& beta, const Homothety& h) {
  if (bound < 0) throw PreconditionError("error bound must be non-negative");
  if (beta.dim() != h.dim()) throw DimensionMismatch(h.dim(), beta.dim());
  const Rational s = abs(h.scale());
  Rational factor;
  mpz_pow_ui(factor.get_num_mpz_t(), s.get_num_mpz_t(), beta.order());
  mpz_pow_ui(factor.get_den_mpz_t(), s.get_den_mpz_t(), beta.order());
  return factor * bound;
}

std::vector<MultiIndex> derivative_orders(std::uint32_t n, const std::optional<MultiIndex>& gamma,
                                          std::size_t dim) {
  MultiIndex bound = MultiIndex::constant(n, dim);
  if (gamma) {
    if (gamma->dim() != dim) throw DimensionMismatch(dim, gamma->dim());
    bound = min(bound, *gamma);
  }
  return indices_below(bound);
}

namespace {

// d^beta of the target, as an exact polynomial when possible.
struct Target {
  MultiIndex beta;
  Expression expr;
  std::optional<Polynomial> poly;
};

std::vector<Target> derivative_targets(const Expression& f, const std::vector<MultiIndex>& betas) {
  std::optional<Polynomial> base;
  if (is_polynomial_expression(f)) base = to_polynomial(f);
  std::vector<Target> out;
  out.reserve(betas.size());
  for (const auto& b : betas) {
    Target t{b, diff(f, b), std::nullopt};
    if (base) t.poly = derivative(*base, b);
    out.push_back(std::move(t));
  }
  return out;
}

ErrorEstimate estimate(const Polynomial& approx, const Target& target, const Grid& grid) {
  const Polynomial d = derivative(approx, target.beta);
  if (target.poly) {
    Rational r = sup_norm_exact(d - *target.poly, grid);
    ErrorEstimate e;
    e.estimate = to_double(r);
    e.exact = std::move(r);
    return e;
  }
  return sup_error(d, target.expr, grid);
}

void validate(const ApproxRequest& req) {
  if (req.n < 1) throw PreconditionError("n must be at least 1");
  if (req.grid_per_axis < 3 || req.grid_per_axis % 2 == 0) {
    throw PreconditionError("grid_per_axis must be odd and at least 3");
  }
  if (req.alpha_cap < 1) throw PreconditionError("alpha_cap must be at least 1");
  if (req.gamma && req.gamma->dim() != req.f.dim()) {
    throw DimensionMismatch(req.f.dim(), req.gamma->dim());
  }
}

}  // namespace

ApproxResult build_qn(const ApproxRequest& req) {
  validate(req);
  const std::size_t d = req.f.dim();
  const std::uint32_t n = req.n;
  const Rational two_n(2 * static_cast<unsigned long>(n));

  const Homothety h(two_n, std::vector<Rational>(d, Rational(-static_cast<long>(n))));
  const Homothety h_inv = h.inverse();
  const Expression g = compose_affine(req.f, h.scale(), h.offset());
  const std::vector<MultiIndex> betas = derivative_orders(n, req.gamma, d);
  const std::vector<Target> targets = derivative_targets(g, betas);

  ApproxLedger ledger;
  ledger.bernstein_target = 1 / two_n;
  ledger.accept_threshold = Rational(9, 10) / two_n;
  ledger.rounding_target = 1 / two_n;

  const Grid unit_grid(unit_box(d), req.grid_per_axis);

  // Doubling search; the first m that meets the budget is taken, so the
  // selected alpha is the smallest candidate regardless of anything else.
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t m = std::min<std::uint32_t>(2, req.alpha_cap);; m *= 2) {
    candidates.push_back(std::min(m, req.alpha_cap));
    if (m >= req.alpha_cap) break;
  }

  std::optional<Polynomial> chosen;
  MultiIndex alpha(d);
  std::vector<BetaError> errors;
  std::vector<BetaError> best;
  double best_worst = -1.0;
  MultiIndex best_alpha(d);
  for (std::uint32_t m : candidates) {
    ledger.searched.push_back(m);
    const MultiIndex trial = MultiIndex::constant(m, d);
    Polynomial p = bernstein(SampledFunction::from_expression(g), trial);
    std::vector<BetaError> trial_errors;
    bool ok = true;
    double worst = 0.0;
    for (const auto& t : targets) {
      const ErrorEstimate raw = estimate(p, t, unit_grid);
      BetaError be{t.beta, raw.estimate, 0.0, 0.0};
      bool within;
      if (raw.exact) {
        const Rational moved = transport_error(*raw.exact, t.beta, h_inv);
        be.bernstein_transported = to_double(moved);
        within = moved <= ledger.accept_threshold;
      } else {
        be.bernstein_transported =
            raw.estimate * to_double(transport_error(1, t.beta, h_inv));
        within = be.bernstein_transported <= to_double(ledger.accept_threshold);
      }
      worst = std::max(worst, be.bernstein_transported);
      ok = ok && within;
      trial_errors.push_back(std::move(be));
    }
    if (best_worst < 0 || worst < best_worst) {
      best_worst = worst;
      best = trial_errors;
      best_alpha = trial;
    }
    if (ok) {
      chosen = std::move(p);
      alpha = trial;
      errors = std::move(trial_errors);
      break;
    }
  }
  if (!chosen) {
    throw ApproxFailure("Bernstein stage did not reach " + to_string(ledger.accept_threshold) +
                            " within alpha_cap " + std::to_string(req.alpha_cap) +
                            " (best transported error " + format_double(best_worst) + ")",
                        best_alpha, best, ledger);
  }

  // Rounding stage: eps so that the safe bound is exactly the target.
  const MultiIndex degree = chosen->degree_bound();
  Integer terms = 1;
  for (auto a : degree.entries()) terms *= a + 1;
  ledger.rounding_eps = ledger.rounding_target / Rational(terms * factorial(degree));
  ledger.rounding_denominator = rounding_denominator(ledger.rounding_eps);
  ledger.safe_bound = rounding_derivative_bound(degree, ledger.rounding_eps);
  ledger.loose_bound = loose_rounding_bound(degree, ledger.rounding_eps);
  const Polynomial r = round_to_rational(*chosen, ledger.rounding_eps);

  ApproxResult result;
  result.n = n;
  result.alpha = alpha;
  result.q = compose(r, h_inv);

  const Grid final_grid(cube(-static_cast<long>(n), static_cast<long>(n), d), req.grid_per_axis);
  const std::vector<Target> final_targets = derivative_targets(req.f, betas);
  const Rational limit(1, n);
  bool ok = true;
  for (std::size_t i = 0; i < final_targets.size(); ++i) {
    const ErrorEstimate fe = estimate(result.q, final_targets[i], final_grid);
    errors[i].final_estimate = fe.estimate;
    ok = ok && (fe.exact ? *fe.exact < limit : fe.estimate < to_double(limit));
  }
  result.errors = std::move(errors);
  result.ledger = std::move(ledger);
  if (!ok) {
    throw ApproxFailure("final error estimate not below 1/" + std::to_string(n), result.alpha,
                        result.errors, result.ledger);
  }
  return result;
}

nlohmann::json to_json(const ApproxLedger& ledger) {
  return {{"bernstein_target", to_string(ledger.bernstein_target)},
          {"accept_threshold", to_string(ledger.accept_threshold)},
          {"rounding_target", to_string(ledger.rounding_target)},
          {"rounding_eps", to_string(ledger.rounding_eps)},
          {"rounding_denominator", to_string(ledger.rounding_denominator)},
          {"loose_bound", to_string(ledger.loose_bound)},
          {"safe_bound", to_string(ledger.safe_bound)},
          {"searched", ledger.searched}};
}

namespace {

nlohmann::json errors_json(const std::vector<BetaError>& errors) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : errors) {
    arr.push_back({{"beta", std::vector<std::uint32_t>(e.beta.entries().begin(),
                                                       e.beta.entries().end())},
                   {"estimate", e.final_estimate},
                   {"bernstein_estimate", e.bernstein_estimate},
                   {"bernstein_transported", e.bernstein_transported}});
  }
  return arr;
}

}  // namespace

nlohmann::json to_json(const ApproxResult& result) {
  return {{"n", result.n},
          {"alpha", std::vector<std::uint32_t>(result.alpha.entries().begin(),
                                               result.alpha.entries().end())},
          {"q", to_json(result.q)},
          {"errors", errors_json(result.errors)},
          {"ledger", to_json(result.ledger)}};
}

nlohmann::json failure_json(const ApproxFailure& failure, std::uint32_t n) {
  return {{"n", n},
          {"status", "failed"},
          {"reason", failure.what()},
          {"alpha", std::vector<std::uint32_t>(failure.alpha().entries().begin(),
                                               failure.alpha().entries().end())},
          {"errors", errors_json(failure.best())},
          {"ledger", to_json(failure.ledger())}};
}

}  // namespace bernapprox
