#pragma once

#include <string>
#include <vector>

#include <CLI11.hpp>

namespace prodform::cli {

enum ExitCode : int {
  kOk = 0,
  kToleranceFailure = 1,
  kUsageError = 2,
  kNumericalFailure = 3,
};

/// Thrown by subcommands for failures that should map to kNumericalFailure.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  std::vector<std::string> argv;  // as typed, for the manifest
  int jobs = 1;
  int digits = 0;  // 0: chosen per subcommand and recorded in the manifest
};

void add_search(CLI::App& app, Context& ctx, int& status);
void add_verify(CLI::App& app, Context& ctx, int& status);
void add_bench(CLI::App& app, Context& ctx, int& status);
void add_threshold(CLI::App& app, Context& ctx, int& status);

}  // namespace prodform::cli
