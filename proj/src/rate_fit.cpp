#include "pqlab/rate_fit.hpp"

#include <algorithm>
#include <cmath>

#include "pqlab/error.hpp"

namespace pqlab {

RateFit fit_rate(const std::vector<std::pair<double, double>>& samples, bool with_log,
                 double log_power) {
  require(samples.size() >= 4, ErrorKind::InsufficientSamples, "rate fit needs >= 4 samples");
  double lo = samples.front().first;
  double hi = lo;
  for (const auto& [eps, value] : samples) {
    require(eps > 0.0 && std::isfinite(eps), ErrorKind::InsufficientSamples,
            "rate fit needs positive eps");
    require(value != 0.0 && std::isfinite(value), ErrorKind::DegenerateFit,
            "rate fit needs finite nonzero values");
    require(!with_log || eps != 1.0, ErrorKind::DegenerateFit, "log correction undefined at eps=1");
    lo = std::min(lo, eps);
    hi = std::max(hi, eps);
  }
  require(std::log10(hi / lo) >= 1.5 - 1e-12, ErrorKind::InsufficientSamples,
          "rate fit needs samples spanning >= 1.5 decades");

  const std::size_t n = samples.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [eps, value] = samples[i];
    x[i] = std::log(eps);
    y[i] = std::log(std::abs(value));
    if (with_log) y[i] -= log_power * std::log(std::abs(std::log(eps)));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, ErrorKind::DegenerateFit, "zero variance in log eps");

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.log_corrected = with_log;
  fit.samples = samples;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    const double intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (intercept + fit.slope * x[i]);
      ss_res += e * e;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

double relative_slope_error(const RateFit& fit, double predicted) {
  if (predicted == 0.0) return std::abs(fit.slope);
  return std::abs(fit.slope / predicted - 1.0);
}

}  // namespace pqlab
