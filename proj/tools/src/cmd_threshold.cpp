#include <iostream>
#include <memory>
#include <sstream>

#include <fmt/format.h>

#include "commands.hpp"
#include "manifest.hpp"
#include "prodform/catalog.hpp"
#include "prodform/fermions.hpp"
#include "prodform/thresholds.hpp"

namespace prodform::cli {

namespace {

struct ThresholdArgs {
  std::string low;
  std::string high;
  std::string constant = "zeta";
  std::vector<std::string> curves;
  std::vector<int> stages;
  std::vector<double> norms;  // tau_norm, nu_norm, eta
  std::string out;
  std::string manifest;
};

/// "M,k,c" or "catalog:LABEL" (published chi, zeta or fermionic omega).
FormulaCost parse_cost(const std::string& text, const std::string& constant) {
  if (text.rfind("catalog:", 0) == 0) {
    const auto& e = catalog_entry(text.substr(8));
    std::optional<double> c;
    if (constant == "chi") c = e.published.chi;
    else if (constant == "zeta") c = e.published.zeta;
    else if (constant == "omega") c = e.fermionic.omega_d6;
    if (!c) throw std::invalid_argument(fmt::format("{} has no published {}", e.label, constant));
    return {e.M, e.order, *c};
  }
  FormulaCost f;
  char comma1 = 0, comma2 = 0;
  std::istringstream in(text);
  if (!(in >> f.stages >> comma1 >> f.order >> comma2 >> f.constant) || comma1 != ',' || comma2 != ',' ||
      !(in >> std::ws).eof())
    throw std::invalid_argument("expected M,k,constant or catalog:LABEL, got '" + text + "'");
  return f;
}

int run_threshold(const ThresholdArgs& a, const Context& ctx) {
  Manifest man;
  man.subcommand = "threshold";
  man.tier = "double";
  std::optional<NormEstimate> norm;
  if (!a.norms.empty()) {
    if (a.norms.size() != 3) throw std::invalid_argument("--norms takes tau_norm nu_norm eta");
    norm = NormEstimate{a.norms[0], a.norms[1], static_cast<int>(a.norms[2])};
  }
  std::string text;
  if (!a.curves.empty()) {
    if (a.curves.size() != 2 || a.stages.size() != 2)
      throw std::invalid_argument("--curves needs two files and --stages M1 M2");
    const auto c1 = read_curve_csv(a.curves[0]);
    const auto c2 = read_curve_csv(a.curves[1]);
    EmpiricalThreshold r;
    try {
      r = norm ? fermionic_empirical_threshold(c1, a.stages[0], c2, a.stages[1], *norm)
               : empirical_threshold(c1, a.stages[0], c2, a.stages[1]);
    } catch (const std::runtime_error& e) {
      throw NumericalFailure(e.what());
    }
    text = "mode,t_over_eps,t1,t2,r1,r2\n";
    text += fmt::format("empirical,{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}\n", r.t_over_eps, r.t1, r.t2, r.r1, r.r2);
    man.inputs = a.curves;
    man.config = {{"mode", "empirical"}, {"stages", a.stages}};
  } else {
    if (a.low.empty() || a.high.empty()) throw std::invalid_argument("give --low and --high, or --curves");
    const FormulaCost lo = parse_cost(a.low, a.constant);
    const FormulaCost hi = parse_cost(a.high, a.constant);
    const double thr = norm ? fermionic_threshold(lo, hi, *norm) : asymptotic_threshold(lo, hi);
    const double lhs = norm ? thr * norm->threshold_factor() : thr;
    text = "mode,t_over_eps,metric_low,metric_high,step_low,step_high\n";
    text += fmt::format("asymptotic,{:.6e},{:.6f},{:.6f},{:.6e},{:.6e}\n", thr, lo.metric(), hi.metric(),
                        asymptotic_step(lo, lhs), asymptotic_step(hi, lhs));
    man.config = {{"mode", "asymptotic"},
                  {"low", {{"spec", a.low}, {"stages", lo.stages}, {"order", lo.order}, {"constant", lo.constant}}},
                  {"high", {{"spec", a.high}, {"stages", hi.stages}, {"order", hi.order}, {"constant", hi.constant}}},
                  {"constant_kind", a.constant}};
  }
  if (norm) man.config["norms"] = {{"tau_norm", norm->tau_norm}, {"nu_norm", norm->nu_norm}, {"eta", norm->eta}};
  if (!a.out.empty()) man.outputs.push_back(a.out);
  write_output(a.out, text);
  write_manifest(man, ctx, a.out, a.manifest);
  return kOk;
}

}  // namespace

void add_threshold(CLI::App& app, Context& ctx, int& status) {
  auto a = std::make_shared<ThresholdArgs>();
  auto* sub = app.add_subcommand("threshold", "T/epsilon above which the higher-order formula is cheaper");
  sub->add_option("--low", a->low, "Lower-order formula: M,k,constant or catalog:LABEL");
  sub->add_option("--high", a->high, "Higher-order formula: M,k,constant or catalog:LABEL");
  sub->add_option("--constant", a->constant, "Published constant used for catalog labels")
      ->check(CLI::IsMember({"chi", "zeta", "omega"}));
  sub->add_option("--curves", a->curves, "Two t,error CSV files (low, high)")->expected(2);
  sub->add_option("--stages", a->stages, "Stage counts M1 M2 for --curves")->expected(2);
  sub->add_option("--norms", a->norms, "tau_norm nu_norm eta: fermionic threshold in T/epsilon")->expected(3);
  sub->add_option("--out", a->out, "Report path (default stdout)");
  sub->add_option("--manifest", a->manifest, "Manifest path (default OUT.manifest.json)");
  sub->callback([a, &ctx, &status] { status = run_threshold(*a, ctx); });
}

}  // namespace prodform::cli
