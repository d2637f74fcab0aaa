#include <filesystem>
#include <iostream>
#include <memory>

#include <fmt/format.h>

#include "commands.hpp"
#include "manifest.hpp"
#include "prodform/formula_io.hpp"
#include "prodform/solver.hpp"

namespace prodform::cli {

namespace {

struct SearchArgs {
  int order = 8;
  int m = 7;
  int restarts = 100;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::string mode = "plain";
  double tolerance = 1e-12;
  double dedup = 0.01;
  int processor_stages = 10;
  std::string kernel;
  bool refine = false;
  std::string out_dir;
  std::string manifest;
};

StageCoefficients polished_stages(const Solution& s, int order, int digits, const std::string& label, bool& ok) {
  const Tier tier = tier_for_digits(digits);
  if (tier == Tier::kDouble) {
    ok = true;
    return StageCoefficients::from_values(s.w, order, label, "generated");
  }
  if (tier == Tier::kQuad) {
    std::vector<Quad> w(s.w.begin(), s.w.end());
    auto p = polish<Quad>(w, order, std::min(digits, 32));
    ok = p.converged;
    return StageCoefficients::from_values(p.w, order, label, "generated");
  }
  MpPrecisionScope scope(digits + 5);
  std::vector<MpReal> w;
  for (double v : s.w) w.emplace_back(v);
  auto p = polish<MpReal>(w, order, digits);
  ok = p.converged;
  return StageCoefficients::from_values(p.w, order, label, "generated");
}

int run_search(const SearchArgs& a, Context ctx) {
  if (ctx.digits == 0) ctx.digits = 17;
  SearchConfig cfg;
  cfg.order = a.order;
  cfg.m = a.m;
  cfg.restarts = a.restarts;
  cfg.init_sigma = a.sigma > 0 ? a.sigma : default_sigma(a.order);
  cfg.mode = parse_mode(a.mode);
  cfg.seed = a.seed;
  cfg.jobs = ctx.jobs;
  cfg.tolerance = a.tolerance;
  cfg.dedup_distance = a.dedup;
  cfg.processor_stages = a.processor_stages;
  if (!a.kernel.empty()) {
    const auto f = resolve_formula(a.kernel);
    cfg.kernel = f.stages().values<double>();
    if (f.kind == FormulaKind::kProcessed) cfg.gamma_seed = f.processed().gamma_values<double>();
  }
  if (cfg.mode != SearchMode::kPlain && (a.refine || ctx.digits > 17))
    throw std::invalid_argument("--refine and --digits > 17 apply to plain searches only");

  auto res = search(cfg);
  if (a.refine)
    for (auto& s : res.solutions) s = refine(s, cfg.order);

  Manifest man;
  man.subcommand = "search";
  man.tier = tier_name(tier_for_digits(ctx.digits));
  man.config = {{"order", cfg.order},           {"m", cfg.m},
                {"restarts", cfg.restarts},     {"init_sigma", cfg.init_sigma},
                {"mode", mode_name(cfg.mode)},  {"seed", cfg.seed},
                {"tolerance", cfg.tolerance},   {"dedup_distance", cfg.dedup_distance},
                {"max_iterations", cfg.max_iterations}, {"fd_step", cfg.fd_step},
                {"processor_stages", cfg.processor_stages}, {"kernel", a.kernel},
                {"refine", a.refine}};
  if (!a.kernel.empty()) man.inputs.push_back(a.kernel);

  std::cout << fmt::format("# order {} m {} mode {} restarts {} converged {} verified {} distinct {}\n", cfg.order,
                           cfg.m, mode_name(cfg.mode), res.restarts, res.converged, res.verified,
                           res.solutions.size());
  std::cout << "label,restart,residual_norm,next_order_residual_norm,max_abs_w\n";
  if (!a.out_dir.empty()) std::filesystem::create_directories(a.out_dir);
  int failed_polish = 0;
  for (std::size_t i = 0; i < res.solutions.size(); ++i) {
    const auto& s = res.solutions[i];
    const std::string label = fmt::format("s{}m{}_{:03d}", cfg.order, s.w.size() - 1, i + 1);
    double maxw = 0.0;
    for (double v : s.w) maxw = std::max(maxw, std::abs(v));
    std::cout << fmt::format("{},{},{:.3e},{:.6e},{:.6f}\n", label, s.restart, s.residual_norm,
                             s.next_order_residual_norm, maxw);
    if (a.out_dir.empty()) continue;
    FormulaFile f;
    if (cfg.mode == SearchMode::kJointProcessed) {
      ProcessedFormula p;
      p.kernel = StageCoefficients::from_values(s.w, cfg.order, label, "generated");
      for (double g : s.gammas) p.gammas.push_back(format_real(g));
      p.order = cfg.order;
      f = FormulaFile::from_processed(p);
    } else {
      bool ok = true;
      const auto st = polished_stages(s, cfg.order, ctx.digits, label, ok);
      if (!ok) ++failed_polish;
      f = FormulaFile::from_stages(st, cfg.mode == SearchMode::kKernel ? FormulaKind::kKernel : FormulaKind::kPlain);
    }
    f.label = label;
    f.source = "generated";
    const auto path = (std::filesystem::path(a.out_dir) / (label + ".json")).string();
    save_formula_file(f, path);
    man.outputs.push_back(path);
  }
  if (!a.out_dir.empty() || !a.manifest.empty())
    write_manifest(man, ctx, "", a.manifest.empty() ? (std::filesystem::path(a.out_dir) / "manifest.json").string()
                                                    : a.manifest);
  if (failed_polish > 0) {
    std::cerr << failed_polish << " solution(s) did not reach the requested precision\n";
    return kNumericalFailure;
  }
  if (res.solutions.empty()) {
    std::cerr << "no solution found\n";
    return kNumericalFailure;
  }
  return kOk;
}

}  // namespace

void add_search(CLI::App& app, Context& ctx, int& status) {
  auto a = std::make_shared<SearchArgs>();
  auto* sub = app.add_subcommand("search", "Solve order conditions from random starting points");
  sub->add_option("--order", a->order, "Target order (4, 6, 8, 10)")->check(CLI::IsMember({4, 6, 8, 10}));
  sub->add_option("--m", a->m, "Number of free weights w_1..w_m (joint mode: kernel m)")->check(CLI::PositiveNumber);
  sub->add_option("--restarts", a->restarts, "Random starting vectors")->check(CLI::NonNegativeNumber);
  sub->add_option("--sigma", a->sigma, "Std. deviation of starting weights (0: per-order default)");
  sub->add_option("--seed", a->seed, "Base seed");
  sub->add_option("--mode", a->mode, "plain, kernel or joint")->check(CLI::IsMember({"plain", "kernel", "joint", "processed"}));
  sub->add_option("--tolerance", a->tolerance, "Acceptance bound relative to max(1, max|w|)^k");
  sub->add_option("--dedup", a->dedup, "Deduplication distance");
  sub->add_option("--processor-stages", a->processor_stages, "Processor length G (joint mode)");
  sub->add_option("--kernel", a->kernel, "Fixed kernel formula for joint mode (catalog:LABEL or file)");
  sub->add_flag("--refine", a->refine, "Minimise the next-order residual within the solution set");
  sub->add_option("--out", a->out_dir, "Directory for solution files and manifest");
  sub->add_option("--manifest", a->manifest, "Manifest path (default OUT/manifest.json)");
  sub->callback([a, &ctx, &status] { status = run_search(*a, ctx); });
}

}  // namespace prodform::cli
