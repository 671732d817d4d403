#include "bernapprox/verify.hpp"

#include <algorithm>
#include <chrono>

#include "bernapprox/errors.hpp"
#include "bernapprox/grid.hpp"
#include "bernapprox/polynomial.hpp"

namespace bernapprox {

namespace {

Rational rational_pow(const Rational& base, std::uint64_t k) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), k);
  return r;
}

std::string joined(const MultiIndex& a) {
  std::string s;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (j) s += ',';
    s += std::to_string(a[j]);
  }
  return s;
}

}  // namespace

Rational bernstein_eval_direct(const SampledFunction& f, const MultiIndex& alpha,
                               std::span<const Rational> x) {
  const std::size_t d = f.dim();
  if (alpha.dim() != d) throw DimensionMismatch(d, alpha.dim());
  if (x.size() != d) throw DimensionMismatch(d, x.size());
  for (auto a : alpha.entries()) {
    if (a == 0) throw PreconditionError("direct Bernstein evaluation requires alpha >= 1");
  }
  Rational sum = 0;
  std::vector<Rational> node(d);
  for_each_below(alpha, [&](const MultiIndex& beta) {
    for (std::size_t j = 0; j < d; ++j) {
      node[j] = Rational(beta[j], alpha[j]);
      node[j].canonicalize();
    }
    Rational term = Rational(binomial(alpha, beta)) * f.at(node);
    for (std::size_t j = 0; j < d && term != 0; ++j) {
      term *= rational_pow(x[j], beta[j]) * rational_pow(1 - x[j], alpha[j] - beta[j]);
    }
    sum += term;
  });
  return sum;
}

double finite_difference(const Expression& e, const MultiIndex& orders, std::span<const double> x,
                         double step) {
  if (orders.dim() != e.dim()) throw DimensionMismatch(e.dim(), orders.dim());
  if (x.size() != e.dim()) throw DimensionMismatch(e.dim(), x.size());
  if (!(step > 0)) throw PreconditionError("finite difference step must be positive");
  std::size_t axis = orders.dim();
  for (std::size_t j = 0; j < orders.dim(); ++j) {
    if (orders[j] > 0) {
      axis = j;
      break;
    }
  }
  if (axis == orders.dim()) return eval_f64(e, x);
  MultiIndex rest = orders;
  --rest[axis];
  std::vector<double> plus(x.begin(), x.end());
  std::vector<double> minus(x.begin(), x.end());
  plus[axis] += step;
  minus[axis] -= step;
  return (finite_difference(e, rest, plus, step) - finite_difference(e, rest, minus, step)) /
         (2 * step);
}

bool ConvergenceReport::all_halved() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const ConvergenceVerdict& v) { return v.halved; });
}

bool ConvergenceReport::has_failures() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const ConvergenceRow& r) { return !r.failure.empty(); });
}

ConvergenceReport run_convergence(const Expression& f, const std::string& function_text,
                                  const std::vector<MultiIndex>& betas,
                                  const std::vector<MultiIndex>& ladder,
                                  std::size_t grid_per_axis) {
  using Clock = std::chrono::steady_clock;
  const std::size_t d = f.dim();
  ConvergenceReport report;
  report.function = function_text;
  report.dim = d;
  if (betas.empty() || ladder.empty()) {
    throw PreconditionError("convergence run needs at least one beta and one alpha");
  }
  for (const auto& b : betas) {
    if (b.dim() != d) throw DimensionMismatch(d, b.dim());
  }
  for (const auto& a : ladder) {
    if (a.dim() != d) throw DimensionMismatch(d, a.dim());
  }

  const Grid grid(unit_box(d), grid_per_axis);
  const SampledFunction sampled = SampledFunction::from_expression(f);

  auto t0 = Clock::now();
  std::vector<std::pair<MultiIndex, Polynomial>> approximants;
  for (const auto& a : ladder) {
    bool positive = true;
    for (auto e : a.entries()) positive = positive && e > 0;
    approximants.emplace_back(a, positive ? bernstein(sampled, a) : Polynomial(d));
  }
  auto t1 = Clock::now();

  std::optional<Polynomial> f_poly;
  if (is_polynomial_expression(f)) f_poly = to_polynomial(f);
  for (const auto& b : betas) {
    const Expression target = diff(f, b);
    std::optional<Polynomial> target_poly;
    if (f_poly) target_poly = derivative(*f_poly, b);
    for (const auto& [a, p] : approximants) {
      ConvergenceRow row{a, b, 0.0, grid_per_axis, false, {}};
      if (!lt(b, a)) {
        row.failure = "alpha " + a.to_string() + " does not dominate beta " + b.to_string();
        report.rows.push_back(std::move(row));
        continue;
      }
      const Polynomial dp = derivative(p, b);
      if (target_poly) {
        row.sup_error = to_double(sup_norm_exact(dp - *target_poly, grid));
        row.exact = sampled.exact();
      } else {
        const ErrorEstimate est = sup_error(dp, target, grid);
        row.sup_error = est.estimate;
        row.exact = sampled.exact() && est.exact.has_value();
      }
      report.rows.push_back(std::move(row));
    }
  }
  auto t2 = Clock::now();

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ConvergenceRow& x, const ConvergenceRow& y) {
                     if (x.alpha.order() != y.alpha.order()) {
                       return x.alpha.order() < y.alpha.order();
                     }
                     if (!(x.alpha == y.alpha)) return LexLess{}(x.alpha, y.alpha);
                     return LexLess{}(x.beta, y.beta);
                   });

  for (const auto& b : betas) {
    const ConvergenceRow* bottom = nullptr;
    const ConvergenceRow* top = nullptr;
    for (const auto& row : report.rows) {
      if (!(row.beta == b) || !row.failure.empty()) continue;
      if (!bottom) bottom = &row;
      top = &row;
    }
    ConvergenceVerdict v{b, 0.0, 0.0, false};
    if (bottom && top) {
      v.bottom = bottom->sup_error;
      v.top = top->sup_error;
      v.halved = v.top == 0.0 || v.top < 0.5 * v.bottom ||
                 (!top->exact && v.top <= kFloatNoiseFloor);
    }
    report.verdicts.push_back(std::move(v));
  }

  auto seconds = [](Clock::duration dt) { return std::chrono::duration<double>(dt).count(); };
  report.stage_seconds = {{"bernstein", seconds(t1 - t0)}, {"errors", seconds(t2 - t1)}};
  return report;
}

nlohmann::json to_json(const ConvergenceReport& report, bool include_timing) {
  auto entries = [](const MultiIndex& a) {
    return std::vector<std::uint32_t>(a.entries().begin(), a.entries().end());
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row = {{"alpha", entries(r.alpha)},
                          {"beta", entries(r.beta)},
                          {"grid", r.grid},
                          {"exact", r.exact}};
    if (r.failure.empty()) {
      row["sup_error"] = r.sup_error;
    } else {
      row["sup_error"] = nullptr;
      row["failure"] = r.failure;
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : report.verdicts) {
    verdicts.push_back({{"beta", entries(v.beta)},
                        {"bottom", v.bottom},
                        {"top", v.top},
                        {"halved", v.halved}});
  }
  nlohmann::json j = {{"function", report.function},
                      {"dim", report.dim},
                      {"rows", std::move(rows)},
                      {"verdicts", std::move(verdicts)},
                      {"estimates_only", true}};
  if (include_timing) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [stage, s] : report.stage_seconds) t[stage] = s;
    j["stage_seconds"] = std::move(t);
  }
  return j;
}

std::string to_csv(const ConvergenceReport& report) {
  std::string out = "alpha;beta;sup_error;grid\n";
  for (const auto& r : report.rows) {
    out += joined(r.alpha) + ";" + joined(r.beta) + ";" +
           (r.failure.empty() ? format_double(r.sup_error) : std::string("nan")) + ";" +
           std::to_string(r.grid) + "\n";
  }
  return out;
}

}  // namespace bernapprox
