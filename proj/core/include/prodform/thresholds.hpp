#pragma once

// T/epsilon thresholds above which a higher-order formula is cheaper: the
// asymptotic closed form and the solve on sampled error curves.

#include <string>
#include <vector>

namespace prodform {

/// Cost model of one formula: M stages, order k, error constant c (chi or
/// zeta) so that the per-step error is c t^{k+1}.
struct FormulaCost {
  int stages = 1;
  int order = 2;
  double constant = 0.0;

  double metric() const;  ///< M c^{1/k}
};

/// (M2 c2^{1/k2} / (M1 c1^{1/k1}))^{1 / (1/k1 - 1/k2)}.
double asymptotic_threshold(const FormulaCost& low, const FormulaCost& high);

/// The same closed form from the metric values M c^{1/k}.
double asymptotic_threshold_from_metrics(double metric_low, int order_low, double metric_high, int order_high);

/// Step size of a formula at a given T/epsilon under the power law:
/// T/eps = t / (c t^{k+1})  =>  t = (c T/eps)^{-1/k}.
double asymptotic_step(const FormulaCost& f, double t_over_eps);

/// Sampled per-step error f(t), increasing in t, interpolated log-log linearly.
class ErrorCurve {
 public:
  ErrorCurve() = default;
  ErrorCurve(std::vector<double> t, std::vector<double> err);

  /// c t^{k+1} sampled on `t`.
  static ErrorCurve power_law(double constant, int order, const std::vector<double>& t);

  double operator()(double t) const;  ///< throws std::out_of_range outside [t_min, t_max]
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }
  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& err() const { return err_; }

 private:
  std::vector<double> t_, err_;
};

struct EmpiricalThreshold {
  double t_over_eps = 0.0;  ///< T/epsilon = t1 / f1(t1)
  double t1 = 0.0;          ///< step of the lower-order formula
  double t2 = 0.0;          ///< step of the higher-order formula, t1 M2 / M1
  double r1 = 0.0;          ///< steps at the threshold with epsilon = 1
  double r2 = 0.0;
};

/// Solves f1(t1) = f2(t1 M2/M1) M1/M2 by bisection on log t1 to 1e-6 relative.
/// Throws std::runtime_error when the curves do not cross in the sampled range.
EmpiricalThreshold empirical_threshold(const ErrorCurve& f1, int stages1, const ErrorCurve& f2, int stages2,
                                       double rel_tol = 1e-6);

/// Reads "t,error" rows (header optional) into a curve.
ErrorCurve read_curve_csv(const std::string& path);

}  // namespace prodform
