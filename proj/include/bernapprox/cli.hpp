#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace bernapprox::cli {

enum ExitCode : int { kSuccess = 0, kCheckFailed = 1, kUsage = 2 };

struct IdentitiesOptions {
  std::uint32_t n_max = 16;
  std::uint32_t trials = 25;
  std::uint64_t seed = 0;
};

struct ConvergeOptions {
  std::string function;
  std::size_t dim = 1;
  std::vector<std::string> betas;   // comma-joined entries, one per beta
  std::vector<std::string> ladder;  // likewise, one per alpha
  std::size_t grid = 101;
  std::string out;                  // empty: write to stdout
  std::string format = "json";
};

struct BuildOptions {
  std::string function;
  std::size_t dim = 1;
  std::string gamma = "inf";
  std::uint32_t n = 1;
  std::size_t grid = 101;
  std::uint32_t alpha_cap = 64;
  std::string out;
};

int cmd_identities(const IdentitiesOptions& opts, std::ostream& out, std::ostream& err);
int cmd_converge(const ConvergeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_build(const BuildOptions& opts, std::ostream& out, std::ostream& err);

/// Full command line: parses flags and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bernapprox::cli
