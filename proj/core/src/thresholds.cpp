#include "prodform/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace prodform {

double FormulaCost::metric() const { return stages * std::pow(constant, 1.0 / order); }

double asymptotic_threshold_from_metrics(double metric_low, int order_low, double metric_high, int order_high) {
  if (order_low == order_high) throw std::invalid_argument("asymptotic_threshold: orders must differ");
  if (!(metric_low > 0.0) || !(metric_high > 0.0)) throw std::invalid_argument("asymptotic_threshold: metrics must be positive");
  const double e = 1.0 / (1.0 / order_low - 1.0 / order_high);
  return std::pow(metric_high / metric_low, e);
}

double asymptotic_threshold(const FormulaCost& low, const FormulaCost& high) {
  if (!(low.constant > 0.0) || !(high.constant > 0.0)) throw std::invalid_argument("asymptotic_threshold: constants must be positive");
  return asymptotic_threshold_from_metrics(low.metric(), low.order, high.metric(), high.order);
}

double asymptotic_step(const FormulaCost& f, double t_over_eps) {
  return std::pow(f.constant * t_over_eps, -1.0 / f.order);
}

ErrorCurve::ErrorCurve(std::vector<double> t, std::vector<double> err) : t_(std::move(t)), err_(std::move(err)) {
  if (t_.size() != err_.size() || t_.size() < 2) throw std::invalid_argument("ErrorCurve: need at least two samples");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!(t_[i] > 0.0) || !(err_[i] > 0.0)) throw std::invalid_argument("ErrorCurve: samples must be positive");
    if (i > 0 && !(t_[i] > t_[i - 1])) throw std::invalid_argument("ErrorCurve: t must increase");
  }
}

ErrorCurve ErrorCurve::power_law(double constant, int order, const std::vector<double>& t) {
  std::vector<double> e;
  for (double x : t) e.push_back(constant * std::pow(x, order + 1));
  return ErrorCurve(t, e);
}

double ErrorCurve::operator()(double t) const {
  if (t < t_.front() * (1 - 1e-12) || t > t_.back() * (1 + 1e-12)) throw std::out_of_range("ErrorCurve: t outside the sampled range");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - t_.begin());
  hi = std::clamp<std::size_t>(hi, 1, t_.size() - 1);
  const std::size_t lo = hi - 1;
  const double u = (std::log(t) - std::log(t_[lo])) / (std::log(t_[hi]) - std::log(t_[lo]));
  return std::exp(std::log(err_[lo]) + u * (std::log(err_[hi]) - std::log(err_[lo])));
}

EmpiricalThreshold empirical_threshold(const ErrorCurve& f1, int stages1, const ErrorCurve& f2, int stages2,
                                       double rel_tol) {
  if (stages1 < 1 || stages2 < 1) throw std::invalid_argument("empirical_threshold: stage counts must be positive");
  const double ratio = static_cast<double>(stages2) / stages1;
  // t1 range where both curves are defined
  const double lo = std::max(f1.t_min(), f2.t_min() / ratio);
  const double hi = std::min(f1.t_max(), f2.t_max() / ratio);
  if (!(lo < hi)) throw std::runtime_error("empirical_threshold: curves do not overlap");
  auto g = [&](double t1) { return std::log(f1(t1)) - std::log(f2(t1 * ratio) / ratio); };
  double a = std::log(lo), b = std::log(hi);
  double ga = g(lo), gb = g(hi);
  if (ga == 0.0) b = a;
  else if (gb == 0.0) a = b;
  else if ((ga > 0) == (gb > 0)) throw std::runtime_error("empirical_threshold: no crossing in the sampled range");
  while (b - a > rel_tol) {
    const double m = 0.5 * (a + b);
    const double gm = g(std::exp(m));
    if ((gm > 0) == (ga > 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  EmpiricalThreshold r;
  r.t1 = std::exp(0.5 * (a + b));
  r.t2 = r.t1 * ratio;
  r.t_over_eps = r.t1 / f1(r.t1);
  r.r1 = r.t_over_eps / r.t1;
  r.r2 = r.t_over_eps / r.t2;
  return r;
}

ErrorCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> t, e;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (!(ss >> a >> b)) continue;  // header or malformed row
    t.push_back(a);
    e.push_back(b);
  }
  return ErrorCurve(t, e);
}

}  // namespace prodform
