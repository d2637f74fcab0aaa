#pragma once

// Restart-based nonlinear least squares for new product formulas.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "prodform/dense.hpp"
#include "prodform/formulas.hpp"
#include "prodform/order_conditions.hpp"
#include "prodform/word_series.hpp"

namespace prodform {

template <class T>
using ResidualFn = std::function<std::vector<T>(const std::vector<T>&)>;

template <class T>
struct LmOptions {
  int max_iterations = 400;
  T initial_lambda = T(1e-3);
  T lambda_up = T(2);
  T lambda_down = T(3);
  T max_lambda = T(1e16);
  T fd_step = T(1e-7);     ///< relative forward-difference step
  T tolerance = T(1e-14);  ///< stop once ||r|| drops below this
  T step_tolerance = T(0);
};

template <class T>
struct LmResult {
  std::vector<T> x;
  std::vector<T> r;
  T norm{};
  int iterations = 0;
  bool converged = false;
};

template <class T>
bool all_finite(const std::vector<T>& v) {
  using std::isfinite;
  for (const T& x : v)
    if (!isfinite(x)) return false;
  return true;
}

/// Forward-difference Jacobian, rows = residuals, cols = unknowns.
template <class T>
DenseMatrix<T> fd_jacobian(const ResidualFn<T>& f, const std::vector<T>& x, const std::vector<T>& r0, const T& step) {
  using std::abs;
  DenseMatrix<T> j(r0.size(), x.size());
  std::vector<T> xp = x;
  for (std::size_t c = 0; c < x.size(); ++c) {
    T h = step * (abs(x[c]) > T(1) ? abs(x[c]) : T(1));
    xp[c] = x[c] + h;
    h = xp[c] - x[c];
    auto rp = f(xp);
    for (std::size_t i = 0; i < r0.size(); ++i) j(i, c) = (rp[i] - r0[i]) / h;
    xp[c] = x[c];
  }
  return j;
}

/// Levenberg-Marquardt with Marquardt diagonal scaling and x2 / /3 damping updates.
template <class T>
LmResult<T> levenberg_marquardt(const ResidualFn<T>& f, std::vector<T> x, const LmOptions<T>& opt) {
  LmResult<T> res;
  std::vector<T> r = f(x);
  if (!all_finite(r)) {
    res.x = x;
    res.r = r;
    res.norm = T(INFINITY);
    return res;
  }
  T cost = dot(r, r);
  T lambda = opt.initial_lambda;
  const std::size_t n = x.size();
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (sqrt_of(cost) < opt.tolerance) {
      res.converged = true;
      break;
    }
    if (n == 0) break;
    auto jac = fd_jacobian(f, x, r, opt.fd_step);
    DenseMatrix<T> a(n, n);
    std::vector<T> g(n, T(0));
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p; q < n; ++q) {
        T s(0);
        for (std::size_t i = 0; i < r.size(); ++i) s += jac(i, p) * jac(i, q);
        a(p, q) = s;
        a(q, p) = s;
      }
      for (std::size_t i = 0; i < r.size(); ++i) g[p] += jac(i, p) * r[i];
    }
    T diag_floor(0);
    for (std::size_t p = 0; p < n; ++p) diag_floor += a(p, p);
    diag_floor = diag_floor / T(n) * T(1e-12);
    bool accepted = false;
    bool tiny_step = false;
    while (lambda <= opt.max_lambda) {
      DenseMatrix<T> damped = a;
      for (std::size_t p = 0; p < n; ++p) damped(p, p) += lambda * (a(p, p) + diag_floor);
      std::vector<T> rhs(n);
      for (std::size_t p = 0; p < n; ++p) rhs[p] = -g[p];
      std::vector<T> delta;
      try {
        delta = solve_linear(damped, rhs);
      } catch (const std::runtime_error&) {
        lambda *= opt.lambda_up;
        continue;
      }
      std::vector<T> xn = x;
      for (std::size_t p = 0; p < n; ++p) xn[p] += delta[p];
      auto rn = f(xn);
      if (all_finite(rn)) {
        T cn = dot(rn, rn);
        if (cn < cost) {
          if (opt.step_tolerance > T(0) && norm2(delta) <= opt.step_tolerance * (norm2(x) + opt.step_tolerance))
            tiny_step = true;
          x = std::move(xn);
          r = std::move(rn);
          cost = cn;
          lambda /= opt.lambda_down;
          accepted = true;
          break;
        }
      }
      lambda *= opt.lambda_up;
    }
    if (!accepted || tiny_step) {
      ++it;
      break;
    }
  }
  res.x = std::move(x);
  res.r = std::move(r);
  res.norm = sqrt_of(cost);
  res.iterations = it;
  if (res.norm < opt.tolerance) res.converged = true;
  return res;
}

enum class SearchMode { kPlain, kKernel, kJointProcessed };

const char* mode_name(SearchMode mode);
SearchMode parse_mode(const std::string& text);

/// Default standard deviation of the random initial weights for an order.
double default_sigma(int order);

struct SearchConfig {
  int order = 8;
  int m = 7;
  int restarts = 100;
  double init_sigma = 0.6;
  SearchMode mode = SearchMode::kPlain;
  std::uint64_t seed = 1;
  int jobs = 1;
  double tolerance = 1e-12;       ///< acceptance bound on the condition-vector norm
  double dedup_distance = 0.01;   ///< Euclidean distance in (w, gamma) space
  int max_iterations = 400;
  double fd_step = 1e-7;
  // joint mode
  int processor_stages = 10;                  ///< G, including the implied last gamma
  std::optional<std::vector<double>> kernel;  ///< fixed kernel weights w_0..w_m
  std::optional<std::vector<double>> gamma_seed;
  double gamma_seed_sigma = 0.0;              ///< perturbation applied to gamma_seed
};

struct Solution {
  std::vector<double> w;       ///< w_0..w_m
  std::vector<double> gammas;  ///< g_1..g_G (joint mode only)
  double residual_norm = 0.0;
  double next_order_residual_norm = 0.0;
  int restart = -1;
};

struct SearchResult {
  std::vector<Solution> solutions;
  int restarts = 0;
  int converged = 0;  ///< restarts whose LM residual met the tolerance before verification
  int verified = 0;   ///< converged restarts that passed the independent check
};

/// Internal residual used during plain search: the recursion polynomials for
/// every supported order (w_0 eliminated).
template <class T>
ResidualFn<T> plain_recursion_residual(int order) {
  return [order](const std::vector<T>& tail) { return recursion_residual(tail, order); };
}

/// Word-series residual of a plain composition given w_1..w_m.
template <class T>
ResidualFn<T> plain_word_residual(int order) {
  return [order](const std::vector<T>& tail) {
    return residual(expand_weights(with_central_weight(tail), T(1)), order);
  };
}

/// Conjugation-reduced residual of a kernel given w_0..w_m.
template <class T>
ResidualFn<T> kernel_word_residual(int order) {
  auto proj = std::make_shared<KernelProjector<T>>(order);
  return [proj](const std::vector<T>& w) { return proj->reduce(formula_series(expand_weights(w, T(1)), proj->order_cap())); };
}

/// Residual of P K P^{-1}.  Unknowns are w_1..w_m (unless the kernel is fixed)
/// followed by g_1..g_{G-1}; g_G = -(g_1 + ... + g_{G-1}).
template <class T>
ResidualFn<T> processed_word_residual(int order, int m, int processor_stages,
                                      std::optional<std::vector<T>> fixed_kernel) {
  return [=](const std::vector<T>& x) {
    std::vector<T> kernel;
    std::size_t off = 0;
    if (fixed_kernel) {
      kernel = *fixed_kernel;
    } else {
      std::vector<T> tail(x.begin(), x.begin() + m);
      kernel = with_central_weight(tail);
      off = static_cast<std::size_t>(m);
    }
    std::vector<T> g(x.begin() + static_cast<std::ptrdiff_t>(off), x.end());
    T s(0);
    for (const T& v : g) s += v;
    g.push_back(-s);
    if (static_cast<int>(g.size()) != processor_stages) throw std::invalid_argument("processor length mismatch");
    return residual(expand_processed_weights(kernel, g, T(1)), order);
  };
}

/// Runs `cfg.restarts` independent LM solves and returns the verified,
/// deduplicated solutions in restart order.  Results do not depend on `jobs`.
SearchResult search(const SearchConfig& cfg);
SearchResult joint_processed_search(const SearchConfig& cfg);

/// Euclidean norm of the order-(k+1) word-series residual: the leading error.
double next_order_norm(const std::vector<double>& w, int order);

/// Moves a plain order-k solution along its solution manifold to reduce the
/// leading error; stops when an accepted step improves by less than 0.1%.
Solution refine(const Solution& sol, int order, int max_steps = 200);

/// Removes solutions within `distance` of an earlier one.
std::vector<Solution> deduplicate(const std::vector<Solution>& sols, double distance);

template <class T>
struct PolishResult {
  std::vector<T> w;       ///< w_0..w_m
  std::vector<T> gammas;  ///< full processor (processed polish only)
  T residual_norm{};
  int iterations = 0;
  bool converged = false;
};

/// Options for a high-precision Newton/LM polish in `digits` digits.
template <class T>
LmOptions<T> polish_options(int digits) {
  using std::pow;
  LmOptions<T> o;
  o.max_iterations = 60;
  o.initial_lambda = T(1e-6);
  o.fd_step = pow(T(10), T(-digits) / T(2));
  o.tolerance = pow(T(10), T(-digits));
  o.step_tolerance = pow(T(10), T(-digits) + T(2));
  return o;
}

/// Polishes a plain order-k composition (w_0 re-derived from w_1..w_m).
template <class T>
PolishResult<T> polish(const std::vector<T>& w, int order, int digits) {
  std::vector<T> tail(w.begin() + 1, w.end());
  ResidualFn<T> f = (order == 8) ? plain_word_residual<T>(order) : plain_recursion_residual<T>(order);
  PolishResult<T> out;
  if (tail.empty()) {
    out.w = with_central_weight(tail);
    out.residual_norm = norm2(f(tail));
    out.converged = true;
    return out;
  }
  auto res = levenberg_marquardt(f, tail, polish_options<T>(digits));
  out.w = with_central_weight(res.x);
  out.residual_norm = res.norm;
  out.iterations = res.iterations;
  out.converged = res.norm < pow_of(T(10), 2 - digits);
  return out;
}

/// Polishes the processor of a processed formula with the kernel held fixed.
template <class T>
PolishResult<T> polish_processor(const std::vector<T>& kernel, const std::vector<T>& gammas, int order, int digits) {
  std::vector<T> head(gammas.begin(), gammas.end() - 1);
  auto f = processed_word_residual<T>(order, static_cast<int>(kernel.size()) - 1, static_cast<int>(gammas.size()),
                                      kernel);
  auto res = levenberg_marquardt(f, head, polish_options<T>(digits));
  PolishResult<T> out;
  out.w = kernel;
  out.gammas = res.x;
  T s(0);
  for (const T& v : res.x) s += v;
  out.gammas.push_back(-s);
  out.residual_norm = res.norm;
  out.iterations = res.iterations;
  out.converged = res.norm < pow_of(T(10), 2 - digits);
  return out;
}

}  // namespace prodform
