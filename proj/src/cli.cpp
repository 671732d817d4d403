#include "bernapprox/cli.hpp"

#include <fstream>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "bernapprox/approx.hpp"
#include "bernapprox/bernstein.hpp"
#include "bernapprox/errors.hpp"
#include "bernapprox/expr.hpp"
#include "bernapprox/polynomial.hpp"
#include "bernapprox/verify.hpp"

namespace bernapprox::cli {

namespace {

// x = p/q with 1 <= q <= 1000 and 0 <= p <= q.
Rational random_unit_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> den(1, 1000);
  const long q = den(rng);
  std::uniform_int_distribution<long> num(0, q);
  Rational r(num(rng), q);
  r.canonicalize();
  return r;
}

Rational random_value(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> den(1, 50);
  const long q = den(rng);
  std::uniform_int_distribution<long> num(-10 * q, 10 * q);
  Rational r(num(rng), q);
  r.canonicalize();
  return r;
}

struct Suite {
  std::string name;
  std::size_t checks = 0;
  std::optional<std::string> counterexample;

  void record(bool ok, const std::function<std::string()>& describe) {
    ++checks;
    if (!ok && !counterexample) counterexample = describe();
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open output file " + path);
  f << content;
  if (!f) throw PreconditionError("cannot write output file " + path);
}

}  // namespace

int cmd_identities(const IdentitiesOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.n_max < 1) {
    err << "error: --n-max must be at least 1\n";
    return kUsage;
  }
  std::mt19937_64 rng(opts.seed);
  std::vector<Rational> xs;
  for (std::uint32_t t = 0; t < opts.trials; ++t) xs.push_back(random_unit_rational(rng));

  Suite moment{"moment", 0, {}};
  Suite variance{"variance", 0, {}};
  for (std::uint32_t n = 1; n <= opts.n_max; ++n) {
    for (const auto& x : xs) {
      for (std::uint32_t N = 0; N <= 2; ++N) {
        const auto [lhs, rhs] = moment_identity_check(n, N, x);
        moment.record(lhs == rhs, [&, lhs = lhs, rhs = rhs] {
          return "n=" + std::to_string(n) + " N=" + std::to_string(N) + " x=" + to_string(x) +
                 " lhs=" + to_string(lhs) + " rhs=" + to_string(rhs);
        });
      }
      const auto [lhs, rhs] = variance_identity_check(n, x);
      variance.record(lhs == rhs, [&, lhs = lhs, rhs = rhs] {
        return "n=" + std::to_string(n) + " x=" + to_string(x) + " lhs=" + to_string(lhs) +
               " rhs=" + to_string(rhs);
      });
    }
  }

  Suite linearity{"linearity", 0, {}};
  std::uniform_int_distribution<std::uint32_t> a0(1, 4);
  std::uniform_int_distribution<std::uint32_t> a1(1, 3);
  for (std::uint32_t t = 0; t < opts.trials; ++t) {
    const MultiIndex alpha{a0(rng), a1(rng)};
    std::vector<Rational> fv;
    std::vector<Rational> gv;
    for (std::size_t i = 0; i < box_size(alpha); ++i) {
      fv.push_back(random_value(rng));
      gv.push_back(random_value(rng));
    }
    const Rational c = random_value(rng);
    const bool ok = linearity_check(SampledFunction::from_table(alpha, fv),
                                    SampledFunction::from_table(alpha, gv), c, alpha);
    linearity.record(ok, [&] { return "alpha=" + alpha.to_string() + " c=" + to_string(c); });
  }

  Suite factorization{"factorization", 0, {}};
  const std::vector<std::string> polys = {"x0*x1", "x0^2*x1^2", "x0^3+x1"};
  for (const auto& text : polys) {
    const SampledFunction f = SampledFunction::from_expression(parse_expression(text, 2));
    for (std::uint32_t m : {2u, 3u}) {
      const MultiIndex alpha = MultiIndex::constant(m, 2);
      for (const auto& beta : indices_below(MultiIndex::constant(1, 2))) {
        for (std::uint32_t t = 0; t < opts.trials; ++t) {
          const std::vector<Rational> x = {random_unit_rational(rng), random_unit_rational(rng)};
          const auto [lhs, rhs] = factorization_check(f, alpha, beta, x);
          factorization.record(lhs == rhs, [&, lhs = lhs, rhs = rhs] {
            return "f=" + text + " alpha=" + alpha.to_string() + " beta=" + beta.to_string() +
                   " x=(" + to_string(x[0]) + "," + to_string(x[1]) + ") lhs=" + to_string(lhs) +
                   " rhs=" + to_string(rhs);
          });
        }
      }
    }
  }

  int code = kSuccess;
  for (const Suite* s : {&moment, &variance, &linearity, &factorization}) {
    out << s->name << ": " << s->checks << " checks, "
        << (s->counterexample ? "FAILED" : "all exact") << "\n";
    if (s->counterexample) {
      out << "  counterexample: " << *s->counterexample << "\n";
      code = kCheckFailed;
    }
  }
  return code;
}

int cmd_converge(const ConvergeOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.format != "json" && opts.format != "csv") {
    err << "error: --format must be json or csv\n";
    return kUsage;
  }
  if (opts.betas.empty() || opts.ladder.empty()) {
    err << "error: at least one --beta and one --ladder entry are required\n";
    return kUsage;
  }
  const Expression f = parse_expression(opts.function, opts.dim);
  std::vector<MultiIndex> betas;
  std::vector<MultiIndex> ladder;
  for (const auto& b : opts.betas) betas.push_back(parse_multiindex(b, opts.dim));
  for (const auto& a : opts.ladder) ladder.push_back(parse_multiindex(a, opts.dim));

  const ConvergenceReport report = run_convergence(f, opts.function, betas, ladder, opts.grid);
  const std::string data = opts.format == "csv" ? to_csv(report) : to_json(report).dump(2) + "\n";
  std::ostream& summary = opts.out.empty() ? err : out;
  if (opts.out.empty()) {
    out << data;
  } else {
    write_file(opts.out, data);
  }
  for (const auto& v : report.verdicts) {
    summary << "beta " << v.beta << ": bottom " << format_double(v.bottom) << ", top "
            << format_double(v.top) << (v.halved ? ", halved" : ", NOT halved") << "\n";
  }
  for (const auto& [stage, s] : report.stage_seconds) {
    summary << "time " << stage << ": " << format_double(s) << " s\n";
  }
  for (const auto& row : report.rows) {
    if (!row.failure.empty()) {
      err << "error: " << row.failure << "\n";
      return kUsage;
    }
  }
  return report.all_halved() ? kSuccess : kCheckFailed;
}

int cmd_build(const BuildOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.n < 1) {
    err << "error: --n must be at least 1\n";
    return kUsage;
  }
  ApproxRequest req{parse_expression(opts.function, opts.dim), std::nullopt, opts.n, opts.grid,
                    opts.alpha_cap};
  if (opts.gamma != "inf") req.gamma = parse_multiindex(opts.gamma, opts.dim);

  auto emit = [&](const nlohmann::json& j) {
    const std::string data = j.dump(2) + "\n";
    if (opts.out.empty()) {
      out << data;
    } else {
      write_file(opts.out, data);
    }
  };
  std::ostream& summary = opts.out.empty() ? err : out;
  try {
    const ApproxResult result = build_qn(req);
    emit(to_json(result));
    summary << "n " << result.n << ": alpha " << result.alpha << ", " << result.q.term_count()
            << " terms\n";
    for (const auto& e : result.errors) {
      summary << "beta " << e.beta << ": error " << format_double(e.final_estimate) << "\n";
    }
    return kSuccess;
  } catch (const ApproxFailure& failure) {
    emit(failure_json(failure, opts.n));
    err << "failed: " << failure.what() << "\n";
    return kCheckFailed;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bernstein polynomial approximation toolkit"};
  app.require_subcommand(1);

  IdentitiesOptions id;
  auto* identities = app.add_subcommand("identities", "Check the Bernstein moment identities");
  identities->add_option("--n-max", id.n_max, "Largest degree")->capture_default_str();
  identities->add_option("--trials", id.trials, "Random points per degree")->capture_default_str();
  identities->add_option("--seed", id.seed, "RNG seed")->capture_default_str();

  ConvergeOptions cv;
  auto* converge = app.add_subcommand("converge", "Derivative error of B_alpha(f) over a ladder");
  converge->add_option("--fn", cv.function, "Function of x0..x{d-1}")->required();
  converge->add_option("--dim", cv.dim, "Dimension")->capture_default_str();
  converge->add_option("--beta", cv.betas, "Derivative order, comma-joined (repeatable)");
  converge->add_option("--ladder,--alpha", cv.ladder, "Bernstein degree, comma-joined (repeatable)");
  converge->add_option("--grid", cv.grid, "Grid points per axis")->capture_default_str();
  converge->add_option("--out", cv.out, "Output file (default stdout)");
  converge->add_option("--format", cv.format, "json or csv")->capture_default_str();

  BuildOptions bd;
  auto* build = app.add_subcommand("build", "Build a rational polynomial approximant q_n");
  build->add_option("--fn", bd.function, "Function of x0..x{d-1}")->required();
  build->add_option("--dim", bd.dim, "Dimension")->capture_default_str();
  build->add_option("--gamma", bd.gamma, "Smoothness orders or inf")->capture_default_str();
  build->add_option("--n", bd.n, "Index n")->capture_default_str();
  build->add_option("--grid", bd.grid, "Grid points per axis")->capture_default_str();
  build->add_option("--alpha-cap", bd.alpha_cap, "Largest Bernstein degree per axis")
      ->capture_default_str();
  build->add_option("--out", bd.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*identities) return cmd_identities(id, out, err);
    if (*converge) return cmd_converge(cv, out, err);
    return cmd_build(bd, out, err);
  } catch (const ParseError& e) {
    err << "parse error at offset " << e.offset() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return kCheckFailed;
  }
}

}  // namespace bernapprox::cli
