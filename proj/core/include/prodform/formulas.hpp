#pragma once

// Product-formula representations: symmetric compositions of S2 stages,
// processed formulas P K P^{-1}, the Suzuki recursions, and expansion into
// merged exponential sequences.

#include <optional>
#include <string>
#include <vector>

#include "prodform/real.hpp"
#include "prodform/sequence.hpp"

namespace prodform {

enum class FormulaKind { kPlain, kKernel, kProcessed };

const char* kind_name(FormulaKind kind);
FormulaKind parse_kind(const std::string& text);

/// Weights w_0..w_m of the palindromic composition
/// S2(w_m t) ... S2(w_1 t) S2(w_0 t) S2(w_1 t) ... S2(w_m t).
/// Values are kept as decimal text so no precision is lost until a scalar type
/// is chosen.
struct StageCoefficients {
  std::string label;
  int order = 2;
  std::vector<std::string> w;  // w_0 first
  std::string source;

  int m() const { return static_cast<int>(w.size()) - 1; }
  int stages() const { return 2 * m() + 1; }

  template <class T>
  std::vector<T> values() const {
    std::vector<T> out;
    out.reserve(w.size());
    for (const auto& s : w) out.push_back(parse_real<T>(s));
    return out;
  }

  template <class T>
  static StageCoefficients from_values(const std::vector<T>& w, int order, std::string label,
                                       std::string source = {}) {
    StageCoefficients s;
    s.label = std::move(label);
    s.order = order;
    s.source = std::move(source);
    for (const T& v : w) s.w.push_back(format_real(v));
    return s;
  }
};

/// Processed formula P K P^{-1} with P = Q(t) Q(-t) and
/// Q(tau) = S2(tau g_G) ... S2(tau g_1).  `gammas` holds all G values.
struct ProcessedFormula {
  StageCoefficients kernel;
  std::vector<std::string> gammas;
  int order = 2;

  template <class T>
  std::vector<T> gamma_values() const {
    std::vector<T> out;
    for (const auto& s : gammas) out.push_back(parse_real<T>(s));
    return out;
  }
};

/// w_0 = 1 - 2 (w_1 + ... + w_m).
template <class T>
T central_weight(const std::vector<T>& tail) {
  T s(0);
  for (const T& v : tail) s += v;
  return T(1) - T(2) * s;
}

/// Full weight vector from w_1..w_m.
template <class T>
std::vector<T> with_central_weight(const std::vector<T>& tail) {
  std::vector<T> w;
  w.reserve(tail.size() + 1);
  w.push_back(central_weight(tail));
  w.insert(w.end(), tail.begin(), tail.end());
  return w;
}

/// Expansion of a palindromic composition given by its weights (w_0 first).
template <class T>
ExponentialSequence<T> expand_weights(const std::vector<T>& w, const T& t_scale, int num_terms = 2) {
  if (w.empty()) throw std::invalid_argument("expand: empty weight vector");
  ExponentialSequence<T> seq(num_terms);
  const std::size_t m = w.size() - 1;
  for (std::size_t j = m; j >= 1; --j) seq.push_s2(w[j] * t_scale);
  seq.push_s2(w[0] * t_scale);
  for (std::size_t j = 1; j <= m; ++j) seq.push_s2(w[j] * t_scale);
  return seq;
}

template <class T>
ExponentialSequence<T> expand(const StageCoefficients& f, const T& t_scale = T(1), int num_terms = 2) {
  return expand_weights(f.values<T>(), t_scale, num_terms);
}

/// Expansion of an explicit list of stage weights, applied left to right.
template <class T>
ExponentialSequence<T> expand_stage_list(const std::vector<T>& stages, const T& t_scale = T(1),
                                         int num_terms = 2) {
  ExponentialSequence<T> seq(num_terms);
  for (const T& c : stages) seq.push_s2(c * t_scale);
  return seq;
}

/// The processor factor P(t) = Q(t) Q(-t).
template <class T>
ExponentialSequence<T> processor_sequence(const std::vector<T>& gammas, const T& t_scale, int num_terms = 2) {
  ExponentialSequence<T> seq(num_terms);
  for (int sign : {1, -1}) {
    const T tau = sign > 0 ? t_scale : T(-t_scale);
    for (std::size_t i = gammas.size(); i-- > 0;) seq.push_s2(gammas[i] * tau);
  }
  return seq;
}

/// P K^n P^{-1} with the kernel given by its weights.
template <class T>
ExponentialSequence<T> expand_processed_weights(const std::vector<T>& kernel_w, const std::vector<T>& gammas,
                                                const T& t_scale, int num_terms = 2, int repetitions = 1) {
  ExponentialSequence<T> p = processor_sequence(gammas, t_scale, num_terms);
  ExponentialSequence<T> k = expand_weights(kernel_w, t_scale, num_terms);
  ExponentialSequence<T> seq(num_terms);
  seq.append(p);
  for (int r = 0; r < repetitions; ++r) seq.append(k);
  seq.append(p.inverse());
  return seq;
}

template <class T>
ExponentialSequence<T> expand_processed(const ProcessedFormula& f, const T& t_scale = T(1), int num_terms = 2,
                                        int repetitions = 1) {
  return expand_processed_weights(f.kernel.values<T>(), f.gamma_values<T>(), t_scale, num_terms, repetitions);
}

/// Stage list (left to right) of Suzuki's first recursion of order 2 kappa:
/// S_{2k} = S_{2k-2}(s t)^1 S_{2k-2}((1-2s) t) S_{2k-2}(s t),
/// s = 1/(2 - 2^{1/(2k-1)}).
template <class T>
std::vector<T> suzuki_first_stages(int kappa) {
  using std::pow;
  if (kappa < 1) throw std::invalid_argument("suzuki_first: kappa must be >= 1");
  std::vector<T> st{T(1)};
  for (int k = 2; k <= kappa; ++k) {
    const T s = T(1) / (T(2) - pow(T(2), T(1) / T(2 * k - 1)));
    std::vector<T> next;
    for (const T& f : {s, T(1) - T(2) * s, s})
      for (const T& c : st) next.push_back(f * c);
    st = std::move(next);
  }
  return st;
}

/// Suzuki's second recursion: factors u, u, 1-4u, u, u with
/// u = 1/(4 - 4^{1/(2k-1)}).
template <class T>
std::vector<T> suzuki_second_stages(int kappa) {
  using std::pow;
  if (kappa < 1) throw std::invalid_argument("suzuki_second: kappa must be >= 1");
  std::vector<T> st{T(1)};
  for (int k = 2; k <= kappa; ++k) {
    const T u = T(1) / (T(4) - pow(T(4), T(1) / T(2 * k - 1)));
    std::vector<T> next;
    for (const T& f : {u, u, T(1) - T(4) * u, u, u})
      for (const T& c : st) next.push_back(f * c);
    st = std::move(next);
  }
  return st;
}

template <class T>
ExponentialSequence<T> suzuki_first(int kappa, int num_terms = 2) {
  return expand_stage_list(suzuki_first_stages<T>(kappa), T(1), num_terms);
}

template <class T>
ExponentialSequence<T> suzuki_second(int kappa, int num_terms = 2) {
  return expand_stage_list(suzuki_second_stages<T>(kappa), T(1), num_terms);
}

/// Folds a palindromic stage list of odd length into weights w_0..w_m.
template <class T>
std::vector<T> stages_to_weights(const std::vector<T>& stages) {
  if (stages.size() % 2 == 0) throw std::invalid_argument("stages_to_weights: need an odd stage count");
  const std::size_t m = stages.size() / 2;
  std::vector<T> w;
  for (std::size_t j = 0; j <= m; ++j) w.push_back(stages[m + j]);
  return w;
}

}  // namespace prodform
