#pragma once

// Order-condition polynomials of symmetric compositions.
//
// With log S2(wt) = w a_1 t + w^3 a_3 t^3 + ..., the composition
// S(m) = S2(w_m) ... S2(w_0) ... S2(w_m) has
//   log S(m) = A1 a_1 + A3 a_3 + A5 a_5 + B5 [a_1,a_1,a_3] + A7 a_7
//            + B7 [a_1,a_1,a_5] + C7 [a_3,a_3,a_1] + D7 [a_1,a_1,a_1,a_1,a_3]
//            + A9 a_9 + B9 [a_1,a_1,a_7] + C9_1 [a_1,a_3,a_5] + C9_2 [a_3,a_1,a_5]
//            + C9_3 [a_5,a_1,a_3] + D9_1 [a_1,a_1,a_1,a_1,a_5]
//            + D9_2 [a_3,a_1,a_1,a_1,a_3] + D9_3 [a_1,a_3,a_1,a_1,a_3]
//            + E9 [a_1 x6, a_3] + O(t^11)
// where [x,y,...,z] = [x,[y,[...,z]]].  The three C9 brackets satisfy a Jacobi
// relation, so only C9_1 and C9_3 are independent and C9_2 is kept equal to
// their sum.  The values follow from the stage recursion S(m+1) =
// S2(w_{m+1}) S(m) S2(w_{m+1}).

#include <string>
#include <utility>
#include <vector>

#include "prodform/formulas.hpp"
#include "prodform/word_series.hpp"

namespace prodform {

enum class ConditionKind { kPlain, kKernel };

template <class T>
struct RecursionState {
  T A1{}, A3{}, A5{}, B5{};
  T A7{}, B7{}, C7{}, D7{};
  T A9{}, B9{}, C9_1{}, C9_2{}, C9_3{}, D9_1{}, D9_2{}, D9_3{}, E9{};
};

/// Runs the stage recursion over w_0..w_m.
template <class T>
RecursionState<T> run_recursion(const std::vector<T>& weights) {
  if (weights.empty()) throw std::invalid_argument("run_recursion: empty weight vector");
  RecursionState<T> s;
  const T& w0 = weights[0];
  s.A1 = w0;
  s.A3 = ipow(w0, 3);
  s.A5 = ipow(w0, 5);
  s.A7 = ipow(w0, 7);
  s.A9 = ipow(w0, 9);
  for (std::size_t j = 1; j < weights.size(); ++j) {
    const T& w = weights[j];
    RecursionState<T> n;
#include "prodform/detail/order_recursions.inc"
    s = n;
  }
  return s;
}

template <class T>
struct ConditionSet {
  int order = 6;
  ConditionKind kind = ConditionKind::kPlain;
  RecursionState<T> values;

  /// Named values that exist at this order.
  std::vector<std::pair<std::string, T>> named() const {
    const auto& v = values;
    std::vector<std::pair<std::string, T>> out{{"A1", v.A1}, {"A3", v.A3}};
    if (order >= 6) out.insert(out.end(), {{"A5", v.A5}, {"B5", v.B5}});
    if (order >= 8) out.insert(out.end(), {{"A7", v.A7}, {"B7", v.B7}, {"C7", v.C7}, {"D7", v.D7}});
    if (order >= 10)
      out.insert(out.end(), {{"A9", v.A9},
                             {"B9", v.B9},
                             {"C9_1", v.C9_1},
                             {"C9_2", v.C9_2},
                             {"C9_3", v.C9_3},
                             {"D9_1", v.D9_1},
                             {"D9_2", v.D9_2},
                             {"D9_3", v.D9_3},
                             {"E9", v.E9}});
    return out;
  }

  /// Independent conditions (A1 - 1, then every other value except C9_2).
  std::vector<T> independent(bool include_a1 = true) const {
    std::vector<T> out;
    for (const auto& [name, value] : named()) {
      if (name == "C9_2") continue;
      if (name == "A1") {
        if (include_a1) out.push_back(value - T(1));
        continue;
      }
      out.push_back(value);
    }
    return out;
  }
};

/// Number of independent plain conditions of order k after w_0 elimination.
int plain_condition_count(int k);

template <class T>
ConditionSet<T> eval_conditions(const std::vector<T>& w, int order) {
  if (order != 4 && order != 6 && order != 8 && order != 10)
    throw std::invalid_argument("order conditions are available for k in {4, 6, 8, 10}");
  return ConditionSet<T>{order, ConditionKind::kPlain, run_recursion(w)};
}

template <class T>
ConditionSet<T> eval_order6(const StageCoefficients& f) {
  return eval_conditions(f.values<T>(), 6);
}

template <class T>
ConditionSet<T> eval_order10(const StageCoefficients& f) {
  return eval_conditions(f.values<T>(), 10);
}

/// Recursion residual for w_1..w_m with w_0 eliminated (A1 = 1 identically).
template <class T>
std::vector<T> recursion_residual(const std::vector<T>& tail, int order) {
  return eval_conditions(with_central_weight(tail), order).independent(false);
}

/// Condition vector for a plain composition: recursion values for k = 4, 6
/// and 10, the word-series residual for k = 8.
template <class T>
std::vector<T> condition_vector(const StageCoefficients& f, int k) {
  if (k == 8) return residual(expand<T>(f), k);
  return eval_conditions(f.values<T>(), k).independent(true);
}

/// Conjugation-reduced residual of a kernel: zero iff some processor makes
/// the kernel an order-k formula.
template <class T>
std::vector<T> kernel_condition_vector(const StageCoefficients& f, int k) {
  if (k != 4 && k != 6 && k != 8 && k != 10) throw std::invalid_argument("unsupported kernel order");
  return kernel_residual(expand<T>(f), k);
}

/// Word-series residual of the full processed formula P K P^{-1}.
template <class T>
std::vector<T> condition_vector(const ProcessedFormula& f, int k) {
  if (k != 4 && k != 6 && k != 8 && k != 10) throw std::invalid_argument("unsupported order");
  return residual(expand_processed<T>(f), k);
}

}  // namespace prodform
