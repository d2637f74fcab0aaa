#pragma once

// Order verification of formula files on the word-series engine, reported
// per word length.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "prodform/formula_io.hpp"
#include "prodform/real.hpp"

namespace prodform {

enum class VerifyMode {
  kFull,       ///< the whole formula (P K P^{-1} for processed files)
  kConjugated  ///< the kernel modulo conjugation: zero iff some processor completes it
};

struct DegreeResidual {
  int degree = 0;
  double max_abs = 0.0;
  double l2 = 0.0;
};

struct VerifyReport {
  std::string label;
  int order = 0;
  VerifyMode mode = VerifyMode::kFull;
  Tier tier = Tier::kQuad;
  int digits = 0;
  std::vector<DegreeResidual> degrees;  ///< lengths 1..order
  double max_abs = 0.0;

  bool passes(double tolerance) const { return max_abs < tolerance; }
};

/// Evaluates the residual in the tier selected by `digits` (see tier_for_digits).
/// Kernel-only files are always checked in conjugated mode.
VerifyReport verify_formula(const FormulaFile& f, int order, VerifyMode mode, int digits);

/// Residual coefficients (indexed by word code - 1) grouped by word length.
template <class T>
std::vector<DegreeResidual> residual_by_degree(const std::vector<T>& r, int order) {
  std::vector<DegreeResidual> out;
  for (int len = 1; len <= order; ++len) {
    DegreeResidual d;
    d.degree = len;
    double s = 0.0;
    const std::size_t lo = std::size_t{1} << len;
    for (std::size_t c = lo; c < 2 * lo && c - 1 < r.size(); ++c) {
      const double v = std::abs(to_double(r[c - 1]));
      d.max_abs = std::max(d.max_abs, v);
      s += v * v;
    }
    d.l2 = std::sqrt(s);
    out.push_back(d);
  }
  return out;
}

}  // namespace prodform
