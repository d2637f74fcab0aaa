#pragma once

// Error measurements of product formulas on random Hermitian pairs:
// spectral-norm error, eigenvalue error, basis error, slopes and the leading
// constants chi (spectral) and zeta (eigenvalue).

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "prodform/catalog.hpp"
#include "prodform/formula_io.hpp"
#include "prodform/linalg.hpp"
#include "prodform/real.hpp"
#include "prodform/sequence.hpp"

namespace prodform {

/// Ensemble tag written into CSV metadata.
inline constexpr const char* kEnsembleName = "ginibre-hermitized-unit-spectral-norm";

struct RandomPairSpec {
  int n = 6;
  int count = 100;
  std::uint64_t seed = 1;
};

template <class T>
struct HermitianPair {
  CMatrix<T> a;
  CMatrix<T> b;
};

/// (G + G^dagger)/2 for a complex Ginibre G, scaled to unit spectral norm.
template <class T>
CMatrix<T> random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix<T> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = nd(rng);
      const double im = nd(rng);
      g(i, j) = Cx<T>(T(re), T(im));
    }
  CMatrix<T> h = g + g.adjoint();
  h *= T(0.5);
  const auto e = hermitian_eigen(h);
  using std::abs;
  const T norm = std::max(T(abs(e.values.front())), T(abs(e.values.back())));
  h *= T(1) / norm;
  return h;
}

/// Sample `index` of the ensemble; independent of how samples are scheduled.
template <class T>
HermitianPair<T> random_pair(const RandomPairSpec& spec, int index) {
  if (spec.n < 2) throw std::invalid_argument("random pairs need n >= 2");
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  HermitianPair<T> p;
  p.a = random_hermitian<T>(rng, spec.n);
  p.b = random_hermitian<T>(rng, spec.n);
  return p;
}

template <class T>
struct EigenAnalysis {
  bool paired = false;         ///< false when the overlap matrix is not a near-permutation
  T eigen_error{};             ///< max |lambda~_j - lambda_j|
  T basis_error{};             ///< ||V - I|| after phase alignment
  CMatrix<T> v;                ///< eigenvectors of U~ in the eigenbasis of H, paired and phase-aligned
  std::vector<Cx<T>> d;        ///< eigenvalues of U~, paired with u
  std::vector<Cx<T>> u;        ///< eigenvalues of the exact evolution
};

/// Minimum overlap accepted when pairing eigenvectors.
inline constexpr double kPairingThreshold = 0.9;

/// A Hermitian pair with its eigendecompositions cached, so every evaluation
/// of a formula is a chain of diagonal phases and basis changes.
template <class T>
class PairSystem {
 public:
  PairSystem(const CMatrix<T>& a, const CMatrix<T>& b) : a_(a), b_(b) {
    if (a.size() != b.size()) throw std::invalid_argument("PairSystem: dimension mismatch");
    ea_ = hermitian_eigen(a);
    eb_ = hermitian_eigen(b);
    eh_ = hermitian_eigen(a + b);
    w_ab_ = ea_.vectors.adjoint() * eb_.vectors;
    w_ba_ = w_ab_.adjoint();
  }

  std::size_t dim() const { return a_.size(); }
  const HermitianEigen<T>& h_eigen() const { return eh_; }

  /// Ordered product of exp(-i c t A) (term 0) and exp(-i c t B) (term 1).
  CMatrix<T> apply(const ExponentialSequence<T>& seq, const T& t) const {
    if (seq.num_terms() != 2) throw std::invalid_argument("apply_formula: two-term sequences only");
    const std::size_t n = dim();
    if (seq.entries().empty()) return CMatrix<T>::identity(n);
    int cur = seq.entries().front().term;
    CMatrix<T> m = cur == 0 ? ea_.vectors : eb_.vectors;
    std::vector<Cx<T>> ph(n);
    for (const auto& e : seq.entries()) {
      if (e.term != cur) {
        m = m * (cur == 0 ? w_ab_ : w_ba_);
        cur = e.term;
      }
      const auto& lam = cur == 0 ? ea_.values : eb_.values;
      for (std::size_t j = 0; j < n; ++j) ph[j] = expi(T(-e.coeff * t * lam[j]));
      m.scale_columns(ph);
    }
    return m * (cur == 0 ? ea_.vectors : eb_.vectors).adjoint();
  }

  CMatrix<T> exact(const T& t) const {
    const std::size_t n = dim();
    std::vector<Cx<T>> ph(n);
    for (std::size_t j = 0; j < n; ++j) ph[j] = expi(T(-t * eh_.values[j]));
    CMatrix<T> m = eh_.vectors;
    m.scale_columns(ph);
    return m * eh_.vectors.adjoint();
  }

  T spectral_error(const ExponentialSequence<T>& seq, const T& t) const {
    return spectral_norm(apply(seq, t) - exact(t));
  }

  /// Diagonalises U~ in the eigenbasis of H through a Cayley transform and
  /// pairs its eigenvectors with the exact ones by maximal overlap.
  EigenAnalysis<T> eigen_analysis(const ExponentialSequence<T>& seq, const T& t) const {
    using std::abs;
    using std::atan2;
    const std::size_t n = dim();
    const T pi = boost_pi();
    const T two_pi = T(2) * pi;
    EigenAnalysis<T> out;
    CMatrix<T> ut = eh_.vectors.adjoint() * apply(seq, t) * eh_.vectors;
    // exact eigenphases -t lambda_j in [0, 2 pi)
    std::vector<T> phases(n);
    for (std::size_t j = 0; j < n; ++j) phases[j] = wrap(T(-t * eh_.values[j]), two_pi);
    std::vector<T> sorted = phases;
    std::sort(sorted.begin(), sorted.end());
    T best_gap(-1), mid(0);
    for (std::size_t j = 0; j < n; ++j) {
      const T lo = sorted[j];
      const T hi = j + 1 < n ? sorted[j + 1] : T(sorted[0] + two_pi);
      if (hi - lo > best_gap) {
        best_gap = hi - lo;
        mid = T((lo + hi) / T(2));
      }
    }
    // rotate so that the largest gap sits at -1, away from the Cayley pole
    const Cx<T> rot = expi(T(pi - mid));
    CMatrix<T> r = ut;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) = r(i, j) * rot;
    const CMatrix<T> id = CMatrix<T>::identity(n);
    CMatrix<T> k = right_divide(id - r, id + r);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) k(i, j) = Cx<T>(-k(i, j).im, k(i, j).re);  // times i
    const auto ek = hermitian_eigen(k);
    // overlap |<e_j | v_i>| = |V_ji|; greedy assignment on the global maximum
    std::vector<int> pair_of(n, -1);
    std::vector<char> row_used(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
      T best(-1);
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (pair_of[i] >= 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (row_used[j]) continue;
          const T ov = abs(ek.vectors(j, i));
          if (ov > best) {
            best = ov;
            bi = i;
            bj = j;
          }
        }
      }
      if (best < T(kPairingThreshold)) return out;
      pair_of[bi] = static_cast<int>(bj);
      row_used[bj] = 1;
    }
    out.v = CMatrix<T>(n);
    out.d.resize(n);
    out.u.resize(n);
    T eig(0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = static_cast<std::size_t>(pair_of[i]);
      // column j of V is the eigenvector paired with e_j, phase-aligned
      const Cx<T> dj = ek.vectors(j, i);
      const Cx<T> phase = conj(dj) * (T(1) / abs(dj));
      Cx<T> num;
      for (std::size_t p = 0; p < n; ++p) {
        out.v(p, j) = ek.vectors(p, i) * phase;
      }
      // Rayleigh quotient v^dagger U~ v
      for (std::size_t p = 0; p < n; ++p) {
        Cx<T> s;
        for (std::size_t q = 0; q < n; ++q) s += ut(p, q) * out.v(q, j);
        num += conj(out.v(p, j)) * s;
      }
      out.d[j] = num;
      out.u[j] = expi(T(-t * eh_.values[j]));
      eig = std::max(eig, abs(out.d[j] - out.u[j]));
    }
    out.paired = true;
    out.eigen_error = eig;
    out.basis_error = spectral_norm(out.v - id);
    return out;
  }

 private:
  static T boost_pi() {
    using std::acos;
    return T(acos(T(-1)));
  }
  static T wrap(T x, const T& period) {
    using std::floor;
    x -= period * T(floor(x / period));
    return x;
  }

  CMatrix<T> a_, b_;
  HermitianEigen<T> ea_, eb_, eh_;
  CMatrix<T> w_ab_, w_ba_;
};

template <class T>
CMatrix<T> apply_formula(const ExponentialSequence<T>& seq, const CMatrix<T>& a, const CMatrix<T>& b, const T& t) {
  return PairSystem<T>(a, b).apply(seq, t);
}

template <class T>
T spectral_error(const ExponentialSequence<T>& seq, const CMatrix<T>& a, const CMatrix<T>& b, const T& t) {
  return PairSystem<T>(a, b).spectral_error(seq, t);
}

/// Empty when eigenvector pairing is ambiguous.
template <class T>
std::optional<T> eigenvalue_error(const ExponentialSequence<T>& seq, const CMatrix<T>& a, const CMatrix<T>& b,
                                  const T& t) {
  auto r = PairSystem<T>(a, b).eigen_analysis(seq, t);
  if (!r.paired) return std::nullopt;
  return r.eigen_error;
}

template <class T>
std::optional<T> basis_error(const ExponentialSequence<T>& seq, const CMatrix<T>& a, const CMatrix<T>& b, const T& t) {
  auto r = PairSystem<T>(a, b).eigen_analysis(seq, t);
  if (!r.paired) return std::nullopt;
  return r.basis_error;
}

/// A formula prepared for benchmarking.  Processed formulas are measured
/// with their processor, so the basis error is that of P K P^{-1}.
struct BenchFormula {
  std::string label;
  int order = 2;
  int stages = 1;  ///< M, the stage count used in the cost metric
  std::function<ExponentialSequence<double>()> full_d;
  std::function<ExponentialSequence<Quad>()> full_q;

  static BenchFormula from_catalog(const CatalogEntry& e);
  static BenchFormula from_file(const FormulaFile& f);
};

struct BenchOptions {
  RandomPairSpec pairs;
  std::vector<double> t_grid;  ///< empty selects default_t_grid()
  Tier tier = Tier::kQuad;     ///< kDouble or kQuad; higher requests run in Quad
  bool spectral = true;
  bool eigen = true;
  bool basis = true;
  int jobs = 1;
  double slope_tolerance = 0.2;
  double max_slope_failure_fraction = 0.1;
};

/// Geometric grid with `points` values over [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int points);
std::vector<double> default_t_grid();

struct SamplePoint {
  int sample = 0;
  double t = 0.0;
  double spectral = std::numeric_limits<double>::quiet_NaN();
  double eigen = std::numeric_limits<double>::quiet_NaN();  ///< NaN when pairing failed
  double basis = std::numeric_limits<double>::quiet_NaN();
};

struct ConstantEstimate {
  double value = 0.0;         ///< geometric mean over usable samples
  double median_slope = 0.0;  ///< median over samples of the per-sample median adjacent slope
  int usable = 0;             ///< samples entering the mean
  int degenerate = 0;         ///< zero error at every t
  int ambiguous = 0;          ///< pairing failures
  int slope_failures = 0;     ///< samples whose slope misses k+1 by more than the tolerance
  bool accepted = false;
  std::string diagnostic;
};

struct ErrorFit {
  std::string label;
  int order = 2;
  int stages = 1;
  std::string tier;
  std::vector<double> t_grid;
  std::vector<SamplePoint> points;
  ConstantEstimate chi;    ///< spectral
  ConstantEstimate zeta;   ///< eigenvalue
  double mu = 0.0;         ///< basis-error prefactor
  double nu_exponent = 0.0;  ///< basis error ~ mu t^{k + nu}, reported clamped to [0, 1]
  double nu_raw = 0.0;
  double metric_chi() const;
  double metric_zeta() const;
};

/// Noise floor of a tier: errors below it are not used for constants or slopes.
double error_floor(Tier tier);

/// M c^{1/k}.
double metric(int stages, double constant, int order);

/// Geometric mean of the positive entries; 0 when there are none.
double geometric_mean(const std::vector<double>& values);

double median(std::vector<double> values);

/// Runs the ensemble and estimates chi, zeta and the basis-error exponent.
ErrorFit fit_constants(const BenchFormula& f, const BenchOptions& opt);

/// Per-sample errors only (no fitting), e.g. for threshold curves.
std::vector<SamplePoint> measure(const BenchFormula& f, const BenchOptions& opt);

/// Geometric mean over samples at each t; `excluded[i]` counts samples without a value there.
struct MeanCurve {
  std::vector<double> t;
  std::vector<double> err;
  std::vector<int> excluded;
};

MeanCurve mean_curve(const std::vector<SamplePoint>& pts, const std::vector<double>& t_grid, bool eigen);

/// Estimates one constant from per-sample error curves over the grid.
ConstantEstimate estimate_constant(const std::vector<std::vector<double>>& curves, const std::vector<double>& t_grid,
                                   int order, double floor, double slope_tolerance, double max_failure_fraction);

/// CSV with one row per (sample, t) followed by a summary row.
std::string fit_to_csv(const ErrorFit& fit, bool header = true);

}  // namespace prodform
