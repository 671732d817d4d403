#include <doctest.h>

#include <cmath>
#include <random>

#include "bernapprox/errors.hpp"
#include "bernapprox/verify.hpp"
#include "support.hpp"

using namespace bernapprox;
using support::q;

namespace {

std::vector<MultiIndex> ladder_1d() { return {MultiIndex{8}, MultiIndex{16}, MultiIndex{32}, MultiIndex{64}}; }

}  // namespace

TEST_CASE("direct Bernstein sum") {
  const auto f = SampledFunction::from_expression(parse_expression("x0^2*x1 - 1/(3+x1)", 2));
  std::mt19937_64 rng(61);
  for (int t = 0; t < 10; ++t) {
    const MultiIndex a{static_cast<unsigned>(1 + t % 4), static_cast<unsigned>(2 + t % 3)};
    const auto x = support::random_unit_point(rng, 2);
    CHECK(bernstein_eval_direct(f, a, x) == evaluate(bernstein(f, a), x));
  }
  for (const auto& v : indices_below(MultiIndex{1, 1})) {
    const auto x = ratio(v, MultiIndex{1, 1});
    CHECK(bernstein_eval_direct(f, MultiIndex{3, 2}, x) == f.at(x));
  }
  const auto one = SampledFunction::from_expression(parse_expression("1", 2));
  CHECK(bernstein_eval_direct(one, MultiIndex{5, 4}, support::random_unit_point(rng, 2)) == 1);
  CHECK_THROWS_AS(bernstein_eval_direct(one, MultiIndex{0, 4}, support::random_unit_point(rng, 2)),
                  PreconditionError);
}

TEST_CASE("finite differences") {
  const double one[] = {1.0};
  CHECK(finite_difference(parse_expression("x0^2", 1), MultiIndex{1}, one, 1e-5) ==
        doctest::Approx(2.0).epsilon(1e-9));
  const double p[] = {0.3};
  CHECK(std::abs(finite_difference(parse_expression("sin(x0)", 1), MultiIndex{2}, p, 1e-5) +
                 std::sin(0.3)) < 1e-5);
  CHECK(finite_difference(parse_expression("exp(x0)", 1), MultiIndex{0}, p, 1e-5) == std::exp(0.3));
  CHECK_THROWS_AS(finite_difference(parse_expression("x0", 1), MultiIndex{1}, p, 0.0), PreconditionError);
}

TEST_CASE("third and fourth order differences within the relaxed tolerance") {
  const auto e = parse_expression("exp(x0)*sin(x1)", 2);
  const double x[] = {0.4, 0.7};
  for (const auto& b : {MultiIndex{2, 1}, MultiIndex{2, 2}, MultiIndex{1, 3}}) {
    const double exact = eval_f64(diff(e, b), x);
    const double fd = finite_difference(e, b, x, b.order() == 3 ? 1e-3 : 1e-2);
    CHECK(std::abs(fd - exact) <= 1e-3 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("convergence of the square law") {
  const auto report = run_convergence(parse_expression("x0^2", 1), "x0^2", {MultiIndex{0}}, ladder_1d(), 101);
  REQUIRE(report.rows.size() == 4);
  CHECK(report.rows[0].sup_error == 1.0 / 32);
  CHECK(report.rows[1].sup_error == 1.0 / 64);
  CHECK(report.rows[2].sup_error == 1.0 / 128);
  CHECK(report.rows[3].sup_error == 1.0 / 256);
  CHECK(report.rows[0].exact);
  CHECK(report.all_halved());
}

TEST_CASE("constant function converges trivially") {
  const auto report = run_convergence(parse_expression("3", 2), "3", {MultiIndex{0, 0}, MultiIndex{1, 0}},
                                      {MultiIndex{4, 4}, MultiIndex{8, 8}}, 11);
  for (const auto& r : report.rows) CHECK(r.sup_error == 0.0);
  CHECK(report.all_halved());
}

TEST_CASE("smooth transcendental function halves for low derivatives") {
  const auto report = run_convergence(parse_expression("sin(3*x0)", 1), "sin(3*x0)",
                                      {MultiIndex{0}, MultiIndex{1}, MultiIndex{2}}, ladder_1d(), 101);
  CHECK(report.all_halved());
  for (const auto& r : report.rows) {
    CHECK(std::isfinite(r.sup_error));
    CHECK(r.sup_error >= 0);
  }
}

TEST_CASE("rows are ordered and violations are reported per row") {
  const auto report = run_convergence(parse_expression("x0*x1^2", 2), "x0*x1^2",
                                      {MultiIndex{1, 1}, MultiIndex{0, 0}, MultiIndex{0, 3}},
                                      {MultiIndex{8, 8}, MultiIndex{2, 2}, MultiIndex{4, 4}}, 11);
  REQUIRE(report.rows.size() == 9);
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    const auto& b = report.rows[i];
    CHECK(a.alpha.order() <= b.alpha.order());
    if (a.alpha == b.alpha) CHECK(LexLess{}(a.beta, b.beta));
  }
  CHECK(report.has_failures());
  std::size_t failures = 0;
  for (const auto& r : report.rows) failures += r.failure.empty() ? 0 : 1;
  CHECK(failures == 1);  // only (2,2) against (0,3)
}

TEST_CASE("serialized reports") {
  const auto report = run_convergence(parse_expression("x0^2", 1), "x0^2", {MultiIndex{0}, MultiIndex{1}},
                                      {MultiIndex{8}, MultiIndex{16}}, 101);
  const std::string csv = to_csv(report);
  CHECK(csv.rfind("alpha;beta;sup_error;grid\n8;0;0.03125;101\n", 0) == 0);
  const auto j = to_json(report);
  CHECK(j["rows"].size() == 4);
  CHECK_FALSE(j.contains("stage_seconds"));
  CHECK(to_json(report, true).contains("stage_seconds"));

  const auto again = run_convergence(parse_expression("x0^2", 1), "x0^2", {MultiIndex{0}, MultiIndex{1}},
                                     {MultiIndex{8}, MultiIndex{16}}, 101);
  CHECK(to_json(again).dump() == j.dump());
  CHECK(to_csv(again) == csv);

  const auto two = run_convergence(parse_expression("x0*x1", 2), "x0*x1", {MultiIndex{1, 0}},
                                   {MultiIndex{2, 3}}, 5);
  CHECK(to_csv(two) == "alpha;beta;sup_error;grid\n2,3;1,0;0;5\n");
}
