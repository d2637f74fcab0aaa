#pragma once

// Interacting-electron Hamiltonians H = T + V on the eta-electron sector,
//   T = sum_pq tau_pq a+_p a_q,   V = sum_pq nu_pq n_p n_q,
// their norm quantities, and the normalised error constants xi and omega.

#include <cstdint>
#include <string>
#include <vector>

#include "prodform/dense.hpp"
#include "prodform/error_benchmark.hpp"
#include "prodform/linalg.hpp"
#include "prodform/thresholds.hpp"

namespace prodform {

struct FermionicHamiltonian {
  int d = 0;
  int eta = 0;
  DenseMatrix<double> tau;  ///< d x d, symmetric
  DenseMatrix<double> nu;   ///< d x d, symmetric; the diagonal (p = q) is included

  /// Checks shapes, symmetry and 0 <= eta <= d.
  void validate() const;

  /// Entries uniform on [-1, 1], then symmetrised by averaging with the transpose.
  /// Sample `index` depends only on (seed, index).
  static FermionicHamiltonian random(int d, int eta, std::uint64_t seed, int index);
};

/// Bitstrings of weight eta over d orbitals in increasing numeric order; bit p is orbital p.
std::vector<std::uint32_t> sector_basis(int d, int eta);

std::size_t binomial(int n, int k);

template <class T>
struct SectorMatrices {
  CMatrix<T> t;
  CMatrix<T> v;
};

/// T and V restricted to the eta-electron sector.  Hopping p <- q carries the
/// sign (-1)^(number of occupied orbitals strictly between p and q).
template <class T>
SectorMatrices<T> build_matrices(const FermionicHamiltonian& h);

/// Reference construction: Jordan-Wigner operators on the full 2^d Fock space,
/// projected onto the sector.  Exponential in d; meant for tests.
template <class T>
SectorMatrices<T> build_matrices_full_fock(const FermionicHamiltonian& h);

struct NormEstimate {
  double tau_norm = 0.0;  ///< max_p sum_q |tau_pq|
  double nu_norm = 0.0;   ///< max_p of the sum of the eta largest |nu_pq| over q
  int eta = 0;

  double scale() const { return tau_norm + nu_norm; }
  /// tau_norm nu_norm eta / (tau_norm + nu_norm); multiplies T/epsilon in the threshold.
  double threshold_factor() const;
  /// (tau_norm + nu_norm)^{k-1} tau_norm nu_norm eta
  double bound_factor(int order) const;
};

NormEstimate norms(const FermionicHamiltonian& h);

/// Plane-wave scaling estimates for (tau_norm, nu_norm) at eta electrons,
/// N orbitals and volume Omega.
struct ScalingNorms {
  double tau_norm = 0.0;
  double nu_norm = 0.0;
};
ScalingNorms scaling_norms(double eta, double n_orbitals, double volume);

struct FermionSpec {
  int d = 6;
  int eta = 3;
  int count = 100;
  std::uint64_t seed = 1;
};

struct FermionOptions {
  FermionSpec spec;
  /// Grid in the scaled variable s = t (tau_norm + nu_norm); empty selects default_scaled_grid().
  std::vector<double> s_grid;
  Tier tier = Tier::kQuad;
  bool spectral = true;
  bool eigen = true;
  int jobs = 1;
  double slope_tolerance = 0.2;
  double max_slope_failure_fraction = 0.1;
};

std::vector<double> default_scaled_grid();

struct FermionSample {
  int sample = 0;
  NormEstimate norms;
  std::vector<double> spectral;  ///< raw errors on the t = s / scale grid
  std::vector<double> eigen;     ///< NaN where pairing failed
};

struct FermionFit {
  std::string label;
  int order = 2;
  int stages = 1;
  FermionSpec spec;
  std::string tier;
  std::vector<double> s_grid;
  std::vector<FermionSample> samples;
  ConstantEstimate xi;     ///< spectral, normalised by the bound factor
  ConstantEstimate omega;  ///< eigenvalue, normalised by the bound factor
  double metric_xi() const;
  double metric_omega() const;
};

/// Per-sample errors divided by the bound factor; each curve has the constant
/// (xi or omega) as its t^{k+1} prefactor in the scaled variable.
std::vector<std::vector<double>> normalised_curves(const FermionFit& fit, bool eigen, double floor);

FermionFit fermionic_constants(const BenchFormula& f, const FermionOptions& opt);

/// Geometric-mean normalised per-step error e(s) = s g(s), whose threshold s / e(s) is the
/// left-hand side tau_norm nu_norm eta / (tau_norm + nu_norm) * T/epsilon.
ErrorCurve normalised_mean_curve(const FermionFit& fit, bool eigen);

/// Asymptotic T/epsilon threshold from omega constants, with the norm factor divided out.
double fermionic_threshold(const FormulaCost& low, const FormulaCost& high, const NormEstimate& n);

/// Non-asymptotic variant on normalised curves in the scaled variable.
EmpiricalThreshold fermionic_empirical_threshold(const ErrorCurve& low, int m_low, const ErrorCurve& high, int m_high,
                                                 const NormEstimate& n);

/// CSV in the benchmark schema with the norm columns appended.
std::string fermion_fit_to_csv(const FermionFit& fit, bool header = true);

}  // namespace prodform
