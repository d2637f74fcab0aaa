#include "prodform/error_benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "prodform/parallel.hpp"

namespace prodform {

BenchFormula BenchFormula::from_catalog(const CatalogEntry& e) {
  if (!e.has_coefficients()) throw std::runtime_error("catalog entry " + e.label + " carries constants only");
  BenchFormula f;
  f.label = e.label;
  f.order = e.order;
  f.stages = e.M;
  const CatalogEntry* p = &e;
  f.full_d = [p] { return p->sequence<double>(); };
  f.full_q = [p] { return p->sequence<Quad>(); };
  return f;
}

BenchFormula BenchFormula::from_file(const FormulaFile& file) {
  BenchFormula f;
  f.label = file.label;
  f.order = file.order;
  const StageCoefficients k = file.stages();
  f.stages = k.stages();
  if (file.kind == FormulaKind::kProcessed) {
    const ProcessedFormula pf = file.processed();
    f.full_d = [pf] { return expand_processed<double>(pf); };
    f.full_q = [pf] { return expand_processed<Quad>(pf); };
  } else {
    f.full_d = [k] { return expand<double>(k); };
    f.full_q = [k] { return expand<Quad>(k); };
  }
  return f;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("geometric_grid: bad range");
  std::vector<double> g;
  if (points == 1) return {lo};
  const double r = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g.push_back(lo * std::exp(r * i));
  g.back() = hi;
  return g;
}

std::vector<double> default_t_grid() { return geometric_grid(0.02, 0.1, 5); }

double error_floor(Tier tier) { return tier == Tier::kDouble ? 1e-12 : 1e-28; }

double metric(int stages, double constant, int order) {
  if (order <= 0) throw std::invalid_argument("metric: order must be positive");
  return stages * std::pow(constant, 1.0 / order);
}

double geometric_mean(const std::vector<double>& values) {
  double s = 0.0;
  int n = 0;
  for (double v : values)
    if (v > 0.0 && std::isfinite(v)) {
      s += std::log(v);
      ++n;
    }
  return n == 0 ? 0.0 : std::exp(s / n);
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double ErrorFit::metric_chi() const { return chi.value > 0 ? metric(stages, chi.value, order) : 0.0; }
double ErrorFit::metric_zeta() const { return zeta.value > 0 ? metric(stages, zeta.value, order) : 0.0; }

namespace {

template <class T>
void measure_sample(const BenchOptions& opt, const std::vector<double>& grid, int sample,
                    const ExponentialSequence<T>& seq, std::vector<SamplePoint>& out) {
  const auto pair = random_pair<T>(opt.pairs, sample);
  const PairSystem<T> sys(pair.a, pair.b);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SamplePoint& p = out[i];
    p.sample = sample;
    p.t = grid[i];
    const T t(grid[i]);
    if (opt.spectral) p.spectral = to_double(sys.spectral_error(seq, t));
    if (opt.eigen || opt.basis) {
      const auto r = sys.eigen_analysis(seq, t);
      if (r.paired) {
        if (opt.eigen) p.eigen = to_double(r.eigen_error);
        if (opt.basis) p.basis = to_double(r.basis_error);
      }
    }
  }
}

std::vector<std::vector<double>> curves_of(const std::vector<SamplePoint>& pts, std::size_t grid_size,
                                           double SamplePoint::*field) {
  std::vector<std::vector<double>> c(pts.size() / grid_size, std::vector<double>(grid_size));
  for (std::size_t i = 0; i < pts.size(); ++i) c[i / grid_size][i % grid_size] = pts[i].*field;
  return c;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  return d == 0.0 ? std::numeric_limits<double>::quiet_NaN() : (n * sxy - sx * sy) / d;
}

}  // namespace

std::vector<SamplePoint> measure(const BenchFormula& f, const BenchOptions& opt) {
  if (opt.pairs.count < 1) throw std::invalid_argument("benchmark needs at least one sample");
  const auto grid = opt.t_grid.empty() ? default_t_grid() : opt.t_grid;
  const std::size_t g = grid.size();
  std::vector<SamplePoint> pts(static_cast<std::size_t>(opt.pairs.count) * g);
  if (opt.tier == Tier::kDouble) {
    const auto seq = f.full_d();
    run_parallel(opt.pairs.count, opt.jobs, [&](int s) {
      std::vector<SamplePoint> local(g);
      measure_sample<double>(opt, grid, s, seq, local);
      std::copy(local.begin(), local.end(), pts.begin() + static_cast<std::ptrdiff_t>(s * g));
    });
  } else {
    const auto seq = f.full_q();
    run_parallel(opt.pairs.count, opt.jobs, [&](int s) {
      std::vector<SamplePoint> local(g);
      measure_sample<Quad>(opt, grid, s, seq, local);
      std::copy(local.begin(), local.end(), pts.begin() + static_cast<std::ptrdiff_t>(s * g));
    });
  }
  return pts;
}

MeanCurve mean_curve(const std::vector<SamplePoint>& pts, const std::vector<double>& t_grid, bool eigen) {
  MeanCurve c;
  c.t = t_grid;
  const std::size_t g = t_grid.size();
  if (g == 0 || pts.size() % g != 0) throw std::invalid_argument("mean_curve: points do not match the grid");
  for (std::size_t i = 0; i < g; ++i) {
    std::vector<double> v;
    int excluded = 0;
    for (std::size_t j = i; j < pts.size(); j += g) {
      const double e = eigen ? pts[j].eigen : pts[j].spectral;
      if (std::isfinite(e) && e > 0.0)
        v.push_back(e);
      else
        ++excluded;
    }
    c.err.push_back(geometric_mean(v));
    c.excluded.push_back(excluded);
  }
  return c;
}

ConstantEstimate estimate_constant(const std::vector<std::vector<double>>& curves, const std::vector<double>& t_grid,
                                   int order, double floor, double slope_tolerance, double max_failure_fraction) {
  ConstantEstimate est;
  std::vector<double> constants, slopes;
  int with_slope = 0;
  for (const auto& c : curves) {
    bool any_finite = false;
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!std::isfinite(c[i])) continue;
      any_finite = true;
      if (c[i] > floor) usable.push_back(i);
    }
    if (!any_finite) {
      ++est.ambiguous;
      continue;
    }
    if (usable.empty()) {
      ++est.degenerate;
      continue;
    }
    const std::size_t i0 = usable.front();
    constants.push_back(c[i0] / std::pow(t_grid[i0], order + 1));
    std::vector<double> adj;
    for (std::size_t j = 0; j + 1 < usable.size(); ++j) {
      const std::size_t a = usable[j], b = usable[j + 1];
      if (b != a + 1) continue;
      adj.push_back(std::log(c[b] / c[a]) / std::log(t_grid[b] / t_grid[a]));
    }
    if (!adj.empty()) {
      const double s = median(adj);
      slopes.push_back(s);
      ++with_slope;
      if (std::abs(s - (order + 1)) > slope_tolerance) ++est.slope_failures;
    }
  }
  est.usable = static_cast<int>(constants.size());
  est.value = geometric_mean(constants);
  est.median_slope = slopes.empty() ? std::numeric_limits<double>::quiet_NaN() : median(slopes);
  if (est.usable == 0) {
    est.diagnostic = "no sample above the error floor";
  } else if (with_slope > 0 && est.slope_failures > max_failure_fraction * with_slope) {
    est.diagnostic = fmt::format("{} of {} samples miss slope {} by more than {}", est.slope_failures, with_slope,
                                 order + 1, slope_tolerance);
  } else {
    est.accepted = true;
  }
  return est;
}

ErrorFit fit_constants(const BenchFormula& f, const BenchOptions& opt) {
  ErrorFit fit;
  fit.label = f.label;
  fit.order = f.order;
  fit.stages = f.stages;
  fit.tier = opt.tier == Tier::kDouble ? "double" : "quad";
  fit.t_grid = opt.t_grid.empty() ? default_t_grid() : opt.t_grid;
  BenchOptions o = opt;
  o.t_grid = fit.t_grid;
  fit.points = measure(f, o);
  const std::size_t g = fit.t_grid.size();
  const double floor = error_floor(opt.tier);
  if (opt.spectral)
    fit.chi = estimate_constant(curves_of(fit.points, g, &SamplePoint::spectral), fit.t_grid, f.order, floor,
                                opt.slope_tolerance, opt.max_slope_failure_fraction);
  if (opt.eigen)
    fit.zeta = estimate_constant(curves_of(fit.points, g, &SamplePoint::eigen), fit.t_grid, f.order, floor,
                                 opt.slope_tolerance, opt.max_slope_failure_fraction);
  if (opt.basis) {
    std::vector<double> slopes;
    const auto curves = curves_of(fit.points, g, &SamplePoint::basis);
    for (const auto& c : curves) {
      std::vector<double> x, y;
      for (std::size_t i = 0; i < g; ++i)
        if (std::isfinite(c[i]) && c[i] > floor) {
          x.push_back(std::log(fit.t_grid[i]));
          y.push_back(std::log(c[i]));
        }
      if (x.size() >= 2) slopes.push_back(least_squares_slope(x, y));
    }
    if (!slopes.empty()) {
      fit.nu_raw = median(slopes) - f.order;
      fit.nu_exponent = std::clamp(fit.nu_raw, 0.0, 1.0);
      std::vector<double> mus;
      for (const auto& c : curves)
        for (std::size_t i = 0; i < g; ++i)
          if (std::isfinite(c[i]) && c[i] > floor) {
            mus.push_back(c[i] / std::pow(fit.t_grid[i], f.order + fit.nu_exponent));
            break;
          }
      fit.mu = geometric_mean(mus);
    }
  }
  return fit;
}

std::string fit_to_csv(const ErrorFit& fit, bool header) {
  std::ostringstream os;
  auto num = [](double v) { return std::isfinite(v) ? fmt::format("{:.6e}", v) : std::string(); };
  if (header) os << "row,label,sample,t,spectral_error,eigen_error,basis_error,chi,zeta,slope_spectral,slope_eigen,m_chi,m_zeta,nu_exponent,ensemble,tier\n";
  for (const auto& p : fit.points)
    os << "point," << fit.label << ',' << p.sample << ',' << num(p.t) << ',' << num(p.spectral) << ','
       << num(p.eigen) << ',' << num(p.basis) << ",,,,,,,,,\n";
  os << "summary," << fit.label << ",,,,,," << num(fit.chi.value) << ',' << num(fit.zeta.value) << ','
     << num(fit.chi.median_slope) << ',' << num(fit.zeta.median_slope) << ',' << num(fit.metric_chi()) << ','
     << num(fit.metric_zeta()) << ',' << num(fit.nu_exponent) << ',' << kEnsembleName << ',' << fit.tier << '\n';
  return os.str();
}

}  // namespace prodform
