#include <fstream>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "prodform/parallel.hpp"

namespace {

using namespace prodform::cli;

int run(std::vector<std::string> args) {
  if (args.size() >= 2 && args[1] == "rerun") {
    if (args.size() != 3) {
      std::cerr << "usage: prodform rerun MANIFEST\n";
      return kUsageError;
    }
    std::ifstream in(args[2]);
    if (!in) {
      std::cerr << "error: cannot read " << args[2] << "\n";
      return kUsageError;
    }
    const auto j = nlohmann::json::parse(in);
    return run(j.at("argv").get<std::vector<std::string>>());
  }

  CLI::App app{"Search, verify and benchmark product formulas"};
  app.set_version_flag("--version", std::string(PRODFORM_VERSION));
  app.require_subcommand(1);
  Context ctx;
  ctx.argv = args;
  ctx.jobs = prodform::default_jobs();
  app.add_option("--jobs", ctx.jobs, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--digits", ctx.digits, "Working precision: <= 17 double, <= 33 quad, else MPFR (default: per subcommand)")
      ->check(CLI::Range(1, 1000));
  int status = kOk;
  add_search(app, ctx, status);
  add_verify(app, ctx, status);
  add_bench(app, ctx, status);
  add_threshold(app, ctx, status);
  app.footer("Use 'prodform rerun MANIFEST' to repeat a recorded run.");

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(rest));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }
