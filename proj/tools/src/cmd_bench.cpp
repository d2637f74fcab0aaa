#include <iostream>
#include <memory>

#include <fmt/format.h>

#include "commands.hpp"
#include "manifest.hpp"
#include "prodform/error_benchmark.hpp"
#include "prodform/fermions.hpp"

namespace prodform::cli {

namespace {

struct BenchArgs {
  std::vector<std::string> formulas;
  int samples = 100;
  int dim = 6;
  std::uint64_t seed = 1;
  double t_min = 0.0;
  double t_max = 0.0;
  int points = 5;
  bool no_spectral = false;
  bool no_eigen = false;
  bool no_basis = false;
  double slope_tolerance = 0.2;
  bool fermionic = false;
  int d = 6;
  int eta = -1;
  std::string out;
  std::string manifest;
};

BenchFormula bench_formula(const std::string& spec) {
  if (spec.rfind("catalog:", 0) == 0) return BenchFormula::from_catalog(catalog_entry(spec.substr(8)));
  return BenchFormula::from_file(resolve_formula(spec));
}

void report(const ConstantEstimate& e, const std::string& label, const char* name) {
  std::cerr << fmt::format("{} {}: {:.3e} (median slope {:.2f}, {} usable, {} ambiguous, {} below floor){}\n", label,
                           name, e.value, e.median_slope, e.usable, e.ambiguous, e.degenerate,
                           e.accepted ? "" : " rejected: " + e.diagnostic);
}

/// Explicit --digits wins; otherwise doubles up to order 6 and quad above.
Tier bench_tier(const Context& ctx, int order) {
  if (ctx.digits > 0) return tier_for_digits(ctx.digits) == Tier::kDouble ? Tier::kDouble : Tier::kQuad;
  return order <= 6 ? Tier::kDouble : Tier::kQuad;
}

int run_bench(const BenchArgs& a, const Context& ctx) {
  if (tier_for_digits(ctx.digits) == Tier::kMulti)
    std::cerr << "note: benchmarks run in quad precision at most\n";
  Manifest man;
  man.subcommand = "bench";
  man.tier = ctx.digits > 0 ? tier_name(bench_tier(ctx, 0)) : "per-formula";
  nlohmann::json tiers = nlohmann::json::object();
  man.inputs = a.formulas;
  if (!a.out.empty()) man.outputs.push_back(a.out);
  std::string csv;
  bool all_accepted = true;

  if (a.fermionic) {
    FermionOptions o;
    o.spec = {a.d, a.eta >= 0 ? a.eta : a.d / 2, a.samples, a.seed};
    if (a.t_min > 0) o.s_grid = geometric_grid(a.t_min, a.t_max > 0 ? a.t_max : a.t_min, a.points);
    o.s_grid = o.s_grid.empty() ? default_scaled_grid() : o.s_grid;
    o.spectral = !a.no_spectral;
    o.eigen = !a.no_eigen;
    o.jobs = ctx.jobs;
    o.slope_tolerance = a.slope_tolerance;
    man.config = {{"fermionic", true},      {"d", o.spec.d},         {"eta", o.spec.eta},
                  {"samples", o.spec.count}, {"seed", o.spec.seed},   {"s_grid", o.s_grid},
                  {"spectral", o.spectral},  {"eigen", o.eigen},      {"slope_tolerance", o.slope_tolerance},
                  {"ensemble", "tau, nu uniform on [-1, 1], symmetrised; V includes p = q"}};
    bool header = true;
    for (const auto& spec : a.formulas) {
      const auto f = bench_formula(spec);
      o.tier = bench_tier(ctx, f.order);
      tiers[f.label] = tier_name(o.tier);
      const auto fit = fermionic_constants(f, o);
      csv += fermion_fit_to_csv(fit, header);
      header = false;
      if (o.spectral) report(fit.xi, fit.label, "xi"), all_accepted &= fit.xi.accepted;
      if (o.eigen) report(fit.omega, fit.label, "omega"), all_accepted &= fit.omega.accepted;
    }
  } else {
    BenchOptions o;
    o.pairs = {a.dim, a.samples, a.seed};
    if (a.t_min > 0) o.t_grid = geometric_grid(a.t_min, a.t_max > 0 ? a.t_max : a.t_min, a.points);
    o.t_grid = o.t_grid.empty() ? default_t_grid() : o.t_grid;
    o.spectral = !a.no_spectral;
    o.eigen = !a.no_eigen;
    o.basis = !a.no_basis;
    o.jobs = ctx.jobs;
    o.slope_tolerance = a.slope_tolerance;
    man.config = {{"fermionic", false},        {"dim", a.dim},          {"samples", a.samples},
                  {"seed", a.seed},            {"t_grid", o.t_grid},    {"spectral", o.spectral},
                  {"eigen", o.eigen},          {"basis", o.basis},      {"slope_tolerance", o.slope_tolerance},
                  {"ensemble", kEnsembleName}};
    bool header = true;
    for (const auto& spec : a.formulas) {
      const auto f = bench_formula(spec);
      o.tier = bench_tier(ctx, f.order);
      tiers[f.label] = tier_name(o.tier);
      const auto fit = fit_constants(f, o);
      csv += fit_to_csv(fit, header);
      header = false;
      if (o.spectral) report(fit.chi, fit.label, "chi"), all_accepted &= fit.chi.accepted;
      if (o.eigen) report(fit.zeta, fit.label, "zeta"), all_accepted &= fit.zeta.accepted;
    }
  }
  man.config["tiers"] = tiers;
  man.config["floors"] = {{"double", error_floor(Tier::kDouble)}, {"quad", error_floor(Tier::kQuad)}};
  write_output(a.out, csv);
  write_manifest(man, ctx, a.out, a.manifest);
  return all_accepted ? kOk : kToleranceFailure;
}

}  // namespace

void add_bench(CLI::App& app, Context& ctx, int& status) {
  auto a = std::make_shared<BenchArgs>();
  auto* sub = app.add_subcommand("bench", "Error constants on random Hermitian pairs or fermionic Hamiltonians");
  sub->add_option("--formula", a->formulas, "catalog:LABEL or formula file (repeatable)")->required();
  sub->add_option("--samples", a->samples, "Random instances")->check(CLI::PositiveNumber);
  sub->add_option("--dim", a->dim, "Matrix dimension of the random pairs")->check(CLI::Range(2, 64));
  sub->add_option("--seed", a->seed, "Ensemble seed");
  sub->add_option("--tmin", a->t_min, "Smallest step (scaled step with --fermionic)");
  sub->add_option("--tmax", a->t_max, "Largest step");
  sub->add_option("--points", a->points, "Geometric grid points")->check(CLI::Range(1, 200));
  sub->add_flag("--no-spectral", a->no_spectral, "Skip the spectral-norm error");
  sub->add_flag("--no-eigen", a->no_eigen, "Skip the eigenvalue error");
  sub->add_flag("--no-basis", a->no_basis, "Skip the basis error");
  sub->add_option("--slope-tolerance", a->slope_tolerance, "Allowed deviation of per-sample slopes from k+1");
  sub->add_flag("--fermionic", a->fermionic, "Use interacting-electron Hamiltonians H = T + V");
  sub->add_option("--d", a->d, "Orbitals (fermionic)")->check(CLI::Range(1, 12));
  sub->add_option("--eta", a->eta, "Electrons (fermionic, default d/2)");
  sub->add_option("--out", a->out, "CSV path (default stdout)");
  sub->add_option("--manifest", a->manifest, "Manifest path (default OUT.manifest.json)");
  sub->callback([a, &ctx, &status] { status = run_bench(*a, ctx); });
}

}  // namespace prodform::cli
