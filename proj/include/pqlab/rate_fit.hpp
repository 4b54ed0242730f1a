#pragma once

#include <utility>
#include <vector>

namespace pqlab {

/// Verdict of a log-log exponent fit: value(ε) ≈ C ε^slope |log ε|^k.
struct RateFit {
  double slope = 0.0;
  bool log_corrected = false;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> samples;  // (ε, value)
};

/// Least-squares slope of log|value| against log ε. With `with_log`, the
/// factor |log ε|^log_power is divided out first (log_power = -1 fits a
/// 1/|log ε| correction). Needs at least 4 samples over at least 1.5 decades.
RateFit fit_rate(const std::vector<std::pair<double, double>>& samples, bool with_log,
                 double log_power = 1.0);

/// |fitted / predicted - 1|, or |fitted| when the predicted exponent is 0.
double relative_slope_error(const RateFit& fit, double predicted);

}  // namespace pqlab
