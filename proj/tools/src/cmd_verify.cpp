#include <cmath>
#include <iostream>
#include <memory>

#include <fmt/format.h>

#include "commands.hpp"
#include "manifest.hpp"
#include "prodform/verify.hpp"

namespace prodform::cli {

namespace {

struct VerifyArgs {
  std::string formula;
  int order = 0;
  bool conjugated = false;
  double tolerance = 0.0;
  std::string out;
  std::string manifest;
};

int run_verify(const VerifyArgs& a, Context ctx) {
  if (ctx.digits == 0) ctx.digits = 30;
  const FormulaFile f = resolve_formula(a.formula);
  const int order = a.order > 0 ? a.order : f.order;
  const double tol = a.tolerance > 0 ? a.tolerance : std::pow(10.0, -2.0 * ctx.digits / 3.0);
  const auto rep = verify_formula(f, order, a.conjugated ? VerifyMode::kConjugated : VerifyMode::kFull, ctx.digits);

  std::string text = fmt::format("# {} order {} mode {} tier {} digits {} tolerance {:.1e}\n", rep.label, order,
                                 rep.mode == VerifyMode::kConjugated ? "conjugated" : "full", tier_name(rep.tier),
                                 ctx.digits, tol);
  text += "degree,max_abs,l2\n";
  for (const auto& d : rep.degrees) text += fmt::format("{},{:.3e},{:.3e}\n", d.degree, d.max_abs, d.l2);
  const bool pass = rep.passes(tol);
  text += fmt::format("{} max_abs {:.3e}\n", pass ? "PASS" : "FAIL", rep.max_abs);
  write_output(a.out, text);

  Manifest man;
  man.subcommand = "verify";
  man.tier = tier_name(rep.tier);
  man.config = {{"formula", a.formula}, {"order", order}, {"conjugated", a.conjugated}, {"tolerance", tol}};
  man.inputs.push_back(a.formula);
  if (!a.out.empty()) man.outputs.push_back(a.out);
  write_manifest(man, ctx, a.out, a.manifest);
  return pass ? kOk : kToleranceFailure;
}

}  // namespace

void add_verify(CLI::App& app, Context& ctx, int& status) {
  auto a = std::make_shared<VerifyArgs>();
  auto* sub = app.add_subcommand("verify", "Per-degree order-condition residuals of a formula");
  sub->add_option("--formula", a->formula, "catalog:LABEL or a formula file")->required();
  sub->add_option("--order", a->order, "Order to check (default: the formula's)")->check(CLI::Range(1, 12));
  sub->add_flag("--conjugated", a->conjugated, "Check the kernel modulo conjugation (processor-free)");
  sub->add_option("--tolerance", a->tolerance, "Max-abs bound (default 10^(-2 digits / 3))");
  sub->add_option("--out", a->out, "Report path (default stdout)");
  sub->add_option("--manifest", a->manifest, "Manifest path (default OUT.manifest.json)");
  sub->callback([a, &ctx, &status] { status = run_verify(*a, ctx); });
}

}  // namespace prodform::cli
