#include "prodform/verify.hpp"

#include <stdexcept>

#include "prodform/word_series.hpp"

namespace prodform {

namespace {

template <class T>
std::vector<T> residual_for(const FormulaFile& f, int order, VerifyMode mode) {
  if (mode == VerifyMode::kConjugated) return kernel_residual(expand<T>(f.stages()), order);
  if (f.kind == FormulaKind::kProcessed) return residual(expand_processed<T>(f.processed()), order);
  return residual(expand<T>(f.stages()), order);
}

}  // namespace

VerifyReport verify_formula(const FormulaFile& f, int order, VerifyMode mode, int digits) {
  if (order < 1 || order > 12) throw std::invalid_argument("verify: order must be in [1, 12]");
  VerifyReport rep;
  rep.label = f.label;
  rep.order = order;
  rep.mode = f.kind == FormulaKind::kKernel ? VerifyMode::kConjugated : mode;
  rep.tier = tier_for_digits(digits);
  rep.digits = digits;
  switch (rep.tier) {
    case Tier::kDouble:
      rep.degrees = residual_by_degree(residual_for<double>(f, order, rep.mode), order);
      break;
    case Tier::kQuad:
      rep.degrees = residual_by_degree(residual_for<Quad>(f, order, rep.mode), order);
      break;
    case Tier::kMulti: {
      MpPrecisionScope scope(digits);
      rep.degrees = residual_by_degree(residual_for<MpReal>(f, order, rep.mode), order);
      break;
    }
  }
  for (const auto& d : rep.degrees) rep.max_abs = std::max(rep.max_abs, d.max_abs);
  return rep;
}

}  // namespace prodform
