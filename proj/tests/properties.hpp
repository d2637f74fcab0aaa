#pragma once

// Property checks shared by the unit tests and the acceptance binary.  Each
// returns the worst violation it saw so callers can print it.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "prodform/catalog.hpp"
#include "prodform/error_benchmark.hpp"
#include "prodform/fermions.hpp"
#include "prodform/word_series.hpp"

namespace prodform::props {

struct Outcome {
  bool ok = true;
  double worst = 0.0;
  std::string detail;
};

inline WordPoly<double> random_poly(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> nd;
  WordPoly<double> p(k);
  for (std::uint32_t c = 1; c <= word_count(k); ++c) p.at_code(c) = nd(rng);
  return p;
}

inline double max_abs_diff(const WordPoly<double>& a, const WordPoly<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

/// (ab)c = a(bc) on random truncated series.
inline Outcome word_series_associativity(int trials = 20, int k = 6) {
  std::mt19937_64 rng(11);
  Outcome o;
  for (int i = 0; i < trials; ++i) {
    const auto a = random_poly(rng, k), b = random_poly(rng, k), c = random_poly(rng, k);
    o.worst = std::max(o.worst, max_abs_diff((a * b) * c, a * (b * c)));
  }
  o.ok = o.worst < 1e-9;
  return o;
}

/// A formula times its reversed, negated sequence is the identity series.
inline Outcome word_series_inverse(int k = 8) {
  Outcome o;
  for (const char* label : {"S4m1", "Y6m3a", "KL8s15", "YP8m8"}) {
    const auto seq = catalog_entry(label).sequence<double>();
    const auto p = formula_series(seq, k) * formula_series(seq.inverse(), k);
    o.worst = std::max(o.worst, max_abs_diff(p, WordPoly<double>::identity(k)));
  }
  o.ok = o.worst < 1e-11;
  return o;
}

/// The logarithm of a palindromic composition has no even-degree terms.
inline Outcome palindrome_even_cancellation(int k = 8) {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(-0.6, 0.6);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> w(4);
    for (auto& v : w) v = ud(rng);
    const auto z = log_series(formula_series(expand_weights(w, 1.0), k));
    for (int deg = 2; deg <= k; deg += 2)
      for (double v : z.homogeneous(deg)) o.worst = std::max(o.worst, std::abs(v));
  }
  o.ok = o.worst < 1e-10;
  return o;
}

/// ||U~^dagger U~ - I|| for catalog formulas on random pairs.
inline Outcome unitarity(int samples = 20) {
  Outcome o;
  for (const char* label : {"S4m1", "KL8s15", "YP8m8", "Y10m16"}) {
    const auto seq = catalog_entry(label).sequence<double>();
    for (int s = 0; s < samples; ++s) {
      const auto p = random_pair<double>({6, samples, 3}, s);
      const auto u = apply_formula(seq, p.a, p.b, 0.37);
      o.worst = std::max(o.worst, (u.adjoint() * u - CMatrix<double>::identity(6)).max_abs());
    }
  }
  o.ok = o.worst < 1e-12;
  return o;
}

/// The eigenvalue error of P K P^{-1} equals that of the kernel K.
inline Outcome similarity_invariance(int samples = 20) {
  Outcome o;
  for (const char* label : {"YP8m8", "YP8m8L"}) {
    const auto& e = catalog_entry(label);
    const auto full = e.sequence<Quad>();
    const auto kernel = e.kernel_sequence<Quad>();
    for (int s = 0; s < samples; ++s) {
      const auto p = random_pair<Quad>({6, samples, 4}, s);
      const PairSystem<Quad> sys(p.a, p.b);
      for (double t : {0.05, 0.2}) {
        const auto a = sys.eigen_analysis(full, Quad(t));
        const auto b = sys.eigen_analysis(kernel, Quad(t));
        if (!a.paired || !b.paired) continue;
        const double ea = to_double(a.eigen_error), eb = to_double(b.eigen_error);
        o.worst = std::max(o.worst, std::abs(ea - eb) / std::max(ea, 1e-300));
      }
    }
  }
  o.ok = o.worst < 1e-6;
  return o;
}

/// ||U~^r - U^r|| <= 2 ||V - I|| + r ||D - U|| for r <= 100.
inline Outcome long_product_bound(int instances = 100) {
  Outcome o;
  double worst_slack = -1e300;
  const auto seq = catalog_entry("S4m1").sequence<double>();
  for (int s = 0; s < instances; ++s) {
    const auto p = random_pair<double>({6, instances, 9}, s);
    const PairSystem<double> sys(p.a, p.b);
    const double t = 0.1 + 0.4 * (s % 5) / 4.0;
    const auto an = sys.eigen_analysis(seq, t);
    if (!an.paired) continue;
    const auto& v = sys.h_eigen().vectors;
    const auto ut = v.adjoint() * sys.apply(seq, t) * v;
    double du = 0.0;
    for (std::size_t j = 0; j < 6; ++j) du = std::max(du, abs(an.d[j] - an.u[j]));
    const double vi = an.basis_error;
    CMatrix<double> utr = CMatrix<double>::identity(6);
    std::vector<Cx<double>> ur(6, Cx<double>(1.0));
    for (int r = 1; r <= 100; ++r) {
      utr = utr * ut;
      for (std::size_t j = 0; j < 6; ++j) ur[j] = ur[j] * an.u[j];
      CMatrix<double> diff = utr;
      for (std::size_t j = 0; j < 6; ++j) diff(j, j) -= ur[j];
      const double lhs = spectral_norm(diff);
      const double rhs = 2 * vi + r * du;
      worst_slack = std::max(worst_slack, lhs - rhs);
    }
  }
  o.worst = worst_slack;
  o.ok = worst_slack <= 1e-12;
  return o;
}

/// Sector matrices agree with the projected full Fock-space construction.
inline Outcome full_fock_oracle(int max_d = 6) {
  Outcome o;
  for (int d = 1; d <= max_d; ++d)
    for (int eta = 0; eta <= d; ++eta) {
      const auto h = FermionicHamiltonian::random(d, eta, 21, 100 * d + eta);
      const auto a = build_matrices<double>(h);
      const auto b = build_matrices_full_fock<double>(h);
      o.worst = std::max(o.worst, std::max((a.t - b.t).max_abs(), (a.v - b.v).max_abs()));
    }
  o.ok = o.worst == 0.0;
  return o;
}

}  // namespace prodform::props
