#include "prodform/fermions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "prodform/parallel.hpp"

namespace prodform {

void FermionicHamiltonian::validate() const {
  if (d < 1 || d > 16) throw std::invalid_argument("fermions: d must be in [1, 16]");
  if (eta < 0 || eta > d) throw std::invalid_argument("fermions: eta must be in [0, d]");
  for (const auto* m : {&tau, &nu}) {
    if (m->rows() != static_cast<std::size_t>(d) || m->cols() != static_cast<std::size_t>(d))
      throw std::invalid_argument("fermions: coefficient matrices must be d x d");
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q)
        if ((*m)(p, q) != (*m)(q, p)) throw std::invalid_argument("fermions: coefficient matrices must be symmetric");
  }
}

FermionicHamiltonian FermionicHamiltonian::random(int d, int eta, std::uint64_t seed, int index) {
  FermionicHamiltonian h;
  h.d = d;
  h.eta = eta;
  if (d < 1 || d > 16) throw std::invalid_argument("fermions: d must be in [1, 16]");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto* m : {&h.tau, &h.nu}) {
    DenseMatrix<double> raw(d, d);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) raw(p, q) = u(rng);
    *m = DenseMatrix<double>(d, d);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) (*m)(p, q) = 0.5 * (raw(p, q) + raw(q, p));
  }
  h.validate();
  return h;
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

std::vector<std::uint32_t> sector_basis(int d, int eta) {
  if (eta < 0 || eta > d) throw std::invalid_argument("fermions: eta must be in [0, d]");
  std::vector<std::uint32_t> b;
  for (std::uint32_t s = 0; s < (1u << d); ++s)
    if (std::popcount(s) == eta) b.push_back(s);
  return b;
}

namespace {

int sign_between(std::uint32_t state, int p, int q) {
  const int lo = std::min(p, q), hi = std::max(p, q);
  if (hi - lo < 2) return 1;
  const std::uint32_t mask = ((1u << hi) - 1u) & ~((1u << (lo + 1)) - 1u);
  return std::popcount(state & mask) % 2 ? -1 : 1;
}

template <class T>
SectorMatrices<T> to_sector(const DenseMatrix<double>& t, const DenseMatrix<double>& v) {
  const std::size_t n = t.rows();
  SectorMatrices<T> out{CMatrix<T>(n), CMatrix<T>(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.t(i, j) = Cx<T>(T(t(i, j)));
      out.v(i, j) = Cx<T>(T(v(i, j)));
    }
  return out;
}

DenseMatrix<double> matmul(const DenseMatrix<double>& a, const DenseMatrix<double>& b) {
  const std::size_t n = a.rows();
  DenseMatrix<double> c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double x = a(i, k);
      if (x == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += x * b(k, j);
    }
  return c;
}

}  // namespace

template <class T>
SectorMatrices<T> build_matrices(const FermionicHamiltonian& h) {
  h.validate();
  const auto basis = sector_basis(h.d, h.eta);
  const std::size_t n = basis.size();
  std::vector<std::size_t> index(1u << h.d, n);
  for (std::size_t i = 0; i < n; ++i) index[basis[i]] = i;
  DenseMatrix<double> t(n, n), v(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::uint32_t s = basis[col];
    double diag_v = 0.0;
    for (int p = 0; p < h.d; ++p) {
      if (!(s >> p & 1u)) continue;
      t(col, col) += h.tau(p, p);
      for (int q = 0; q < h.d; ++q)
        if (s >> q & 1u) diag_v += h.nu(p, q);
    }
    v(col, col) = diag_v;
    // a+_p a_q with q occupied, p empty
    for (int q = 0; q < h.d; ++q) {
      if (!(s >> q & 1u)) continue;
      for (int p = 0; p < h.d; ++p) {
        if (p == q || (s >> p & 1u)) continue;
        const std::uint32_t s2 = (s ^ (1u << q)) | (1u << p);
        t(index[s2], col) += sign_between(s, p, q) * h.tau(p, q);
      }
    }
  }
  return to_sector<T>(t, v);
}

template <class T>
SectorMatrices<T> build_matrices_full_fock(const FermionicHamiltonian& h) {
  h.validate();
  const std::size_t dim = std::size_t{1} << h.d;
  // a_p = Z_0 ... Z_{p-1} sigma^-_p
  std::vector<DenseMatrix<double>> ann(h.d, DenseMatrix<double>(dim, dim));
  std::vector<DenseMatrix<double>> cre(h.d, DenseMatrix<double>(dim, dim));
  for (int p = 0; p < h.d; ++p)
    for (std::size_t s = 0; s < dim; ++s) {
      if (!(s >> p & 1u)) continue;
      const double z = std::popcount(s & ((std::size_t{1} << p) - 1)) % 2 ? -1.0 : 1.0;
      ann[p](s ^ (std::size_t{1} << p), s) = z;
      cre[p](s, s ^ (std::size_t{1} << p)) = z;
    }
  DenseMatrix<double> t(dim, dim), v(dim, dim);
  std::vector<DenseMatrix<double>> num(h.d);
  for (int p = 0; p < h.d; ++p) num[p] = matmul(cre[p], ann[p]);
  for (int p = 0; p < h.d; ++p)
    for (int q = 0; q < h.d; ++q) {
      const auto hop = matmul(cre[p], ann[q]);
      const auto nn = matmul(num[p], num[q]);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
          t(i, j) += h.tau(p, q) * hop(i, j);
          v(i, j) += h.nu(p, q) * nn(i, j);
        }
    }
  const auto basis = sector_basis(h.d, h.eta);
  const std::size_t n = basis.size();
  DenseMatrix<double> ts(n, n), vs(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ts(i, j) = t(basis[i], basis[j]);
      vs(i, j) = v(basis[i], basis[j]);
    }
  return to_sector<T>(ts, vs);
}

template SectorMatrices<double> build_matrices<double>(const FermionicHamiltonian&);
template SectorMatrices<Quad> build_matrices<Quad>(const FermionicHamiltonian&);
template SectorMatrices<double> build_matrices_full_fock<double>(const FermionicHamiltonian&);
template SectorMatrices<Quad> build_matrices_full_fock<Quad>(const FermionicHamiltonian&);

double NormEstimate::threshold_factor() const {
  const double s = scale();
  return s > 0.0 ? tau_norm * nu_norm * eta / s : 0.0;
}

double NormEstimate::bound_factor(int order) const {
  return std::pow(scale(), order - 1) * tau_norm * nu_norm * eta;
}

NormEstimate norms(const FermionicHamiltonian& h) {
  h.validate();
  NormEstimate n;
  n.eta = h.eta;
  for (int p = 0; p < h.d; ++p) {
    double row = 0.0;
    std::vector<double> a;
    for (int q = 0; q < h.d; ++q) {
      row += std::abs(h.tau(p, q));
      a.push_back(std::abs(h.nu(p, q)));
    }
    std::sort(a.begin(), a.end(), std::greater<>());
    double top = 0.0;
    for (int i = 0; i < h.eta; ++i) top += a[static_cast<std::size_t>(i)];
    n.tau_norm = std::max(n.tau_norm, row);
    n.nu_norm = std::max(n.nu_norm, top);
  }
  return n;
}

ScalingNorms scaling_norms(double eta, double n_orbitals, double volume) {
  if (!(eta > 0) || !(n_orbitals > 0) || !(volume > 0)) throw std::invalid_argument("scaling_norms: arguments must be positive");
  using std::numbers::pi;
  ScalingNorms s;
  s.tau_norm = 3.0 * pi * pi * std::pow(n_orbitals / volume, 2.0 / 3.0) / 2.0;
  s.nu_norm = std::cbrt(pi) * std::pow(0.75, 2.0 / 3.0) * std::pow(eta, 2.0 / 3.0) * std::cbrt(n_orbitals / volume);
  return s;
}

std::vector<double> default_scaled_grid() { return geometric_grid(0.04, 0.2, 5); }

double FermionFit::metric_xi() const { return xi.value > 0 ? metric(stages, xi.value, order) : 0.0; }
double FermionFit::metric_omega() const { return omega.value > 0 ? metric(stages, omega.value, order) : 0.0; }

namespace {

template <class T>
void measure_fermion_sample(const FermionOptions& opt, const std::vector<double>& s_grid, int index,
                            const ExponentialSequence<T>& seq, FermionSample& out) {
  const auto h = FermionicHamiltonian::random(opt.spec.d, opt.spec.eta, opt.spec.seed, index);
  const auto m = build_matrices<T>(h);
  const PairSystem<T> sys(m.t, m.v);
  out.sample = index;
  out.norms = norms(h);
  const double scale = out.norms.scale();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.spectral.assign(s_grid.size(), nan);
  out.eigen.assign(s_grid.size(), nan);
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const T t(s_grid[i] / scale);
    if (opt.spectral) out.spectral[i] = to_double(sys.spectral_error(seq, t));
    if (opt.eigen) {
      const auto r = sys.eigen_analysis(seq, t);
      if (r.paired) out.eigen[i] = to_double(r.eigen_error);
    }
  }
}

}  // namespace

std::vector<std::vector<double>> normalised_curves(const FermionFit& fit, bool eigen, double floor) {
  std::vector<std::vector<double>> curves;
  for (const auto& s : fit.samples) {
    const auto& raw = eigen ? s.eigen : s.spectral;
    // err(t) / t^{k+1} / bound = err s^{-(k+1)} scale^2 / (tau nu eta); the curve keeps the s^{k+1} factor
    const double f = s.norms.scale() * s.norms.scale() / (s.norms.tau_norm * s.norms.nu_norm * s.norms.eta);
    std::vector<double> c(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!std::isfinite(raw[i]))
        c[i] = raw[i];
      else
        c[i] = raw[i] > floor ? raw[i] * f : 0.0;
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

FermionFit fermionic_constants(const BenchFormula& f, const FermionOptions& opt) {
  if (opt.spec.count < 1) throw std::invalid_argument("fermionic benchmark needs at least one sample");
  if (opt.spec.eta < 1 || opt.spec.eta > opt.spec.d) throw std::invalid_argument("fermions: eta must be in [1, d]");
  FermionFit fit;
  fit.label = f.label;
  fit.order = f.order;
  fit.stages = f.stages;
  fit.spec = opt.spec;
  fit.tier = opt.tier == Tier::kDouble ? "double" : "quad";
  fit.s_grid = opt.s_grid.empty() ? default_scaled_grid() : opt.s_grid;
  fit.samples.resize(static_cast<std::size_t>(opt.spec.count));
  if (opt.tier == Tier::kDouble) {
    const auto seq = f.full_d();
    run_parallel(opt.spec.count, opt.jobs,
                 [&](int s) { measure_fermion_sample<double>(opt, fit.s_grid, s, seq, fit.samples[s]); });
  } else {
    const auto seq = f.full_q();
    run_parallel(opt.spec.count, opt.jobs,
                 [&](int s) { measure_fermion_sample<Quad>(opt, fit.s_grid, s, seq, fit.samples[s]); });
  }
  const double floor = error_floor(opt.tier == Tier::kDouble ? Tier::kDouble : Tier::kQuad);
  if (opt.spectral)
    fit.xi = estimate_constant(normalised_curves(fit, false, floor), fit.s_grid, f.order, 0.0, opt.slope_tolerance,
                               opt.max_slope_failure_fraction);
  if (opt.eigen)
    fit.omega = estimate_constant(normalised_curves(fit, true, floor), fit.s_grid, f.order, 0.0, opt.slope_tolerance,
                                  opt.max_slope_failure_fraction);
  return fit;
}

ErrorCurve normalised_mean_curve(const FermionFit& fit, bool eigen) {
  const auto curves = normalised_curves(fit, eigen, 0.0);
  std::vector<double> err;
  for (std::size_t i = 0; i < fit.s_grid.size(); ++i) {
    std::vector<double> v;
    for (const auto& c : curves) v.push_back(c[i]);
    err.push_back(geometric_mean(v));
  }
  return ErrorCurve(fit.s_grid, err);
}

double fermionic_threshold(const FormulaCost& low, const FormulaCost& high, const NormEstimate& n) {
  const double f = n.threshold_factor();
  if (!(f > 0.0)) throw std::invalid_argument("fermionic_threshold: norm factor must be positive");
  return asymptotic_threshold(low, high) / f;
}

EmpiricalThreshold fermionic_empirical_threshold(const ErrorCurve& low, int m_low, const ErrorCurve& high, int m_high,
                                                 const NormEstimate& n) {
  const double f = n.threshold_factor();
  if (!(f > 0.0)) throw std::invalid_argument("fermionic_threshold: norm factor must be positive");
  EmpiricalThreshold r = empirical_threshold(low, m_low, high, m_high);
  const double scale = n.scale();
  r.t_over_eps /= f;
  r.t1 /= scale;
  r.t2 /= scale;
  r.r1 = r.t_over_eps / r.t1;
  r.r2 = r.t_over_eps / r.t2;
  return r;
}

std::string fermion_fit_to_csv(const FermionFit& fit, bool header) {
  std::ostringstream os;
  auto num = [](double v) { return std::isfinite(v) ? fmt::format("{:.6e}", v) : std::string(); };
  if (header)
    os << "row,label,sample,t,spectral_error,eigen_error,basis_error,chi,zeta,slope_spectral,slope_eigen,m_chi,m_zeta,"
          "nu_exponent,ensemble,tier,s,tau_norm,nu_norm,eta,d,xi,omega,m_xi,m_omega\n";
  for (const auto& s : fit.samples)
    for (std::size_t i = 0; i < fit.s_grid.size(); ++i) {
      const double t = fit.s_grid[i] / s.norms.scale();
      os << "point," << fit.label << ',' << s.sample << ',' << num(t) << ',' << num(s.spectral[i]) << ','
         << num(s.eigen[i]) << ",,,,,,,,,fermionic-uniform,," << num(fit.s_grid[i]) << ',' << num(s.norms.tau_norm)
         << ',' << num(s.norms.nu_norm) << ',' << s.norms.eta << ',' << fit.spec.d << ",,,,\n";
    }
  os << "summary," << fit.label << ",,,,,,,," << num(fit.xi.median_slope) << ',' << num(fit.omega.median_slope)
     << ",,,,fermionic-uniform," << fit.tier << ",,,," << fit.spec.eta << ',' << fit.spec.d << ',' << num(fit.xi.value) << ','
     << num(fit.omega.value) << ',' << num(fit.metric_xi()) << ',' << num(fit.metric_omega()) << '\n';
  return os.str();
}

}  // namespace prodform
