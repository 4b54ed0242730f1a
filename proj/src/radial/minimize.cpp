#include <algorithm>
#include <cmath>
#include <utility>

#include "pqlab/error.hpp"
#include "pqlab/radial.hpp"
#include "pqlab/simd.hpp"

namespace pqlab::radial {

StiffnessPreconditioner::StiffnessPreconditioner(const RadialMesh& mesh,
                                                 std::vector<std::uint8_t> fixed)
    : fixed_(std::move(fixed)) {
  const std::size_t n = mesh.size();
  if (fixed_.empty()) fixed_.assign(n, 0);
  require(fixed_.size() == n, ErrorKind::Precondition, "fixed mask does not match the mesh");
  fixed_.back() = 1;
  lower_.assign(n, 0.0);
  diag_.assign(n, 0.0);
  upper_.assign(n, 0.0);
  const auto w = mesh.cell_weights();
  const auto inv_h = mesh.inverse_widths();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = w[i] * inv_h[i] * inv_h[i];
    diag_[i] += a;
    diag_[i + 1] += a;
    if (!fixed_[i] && !fixed_[i + 1]) {
      upper_[i] = -a;
      lower_[i + 1] = -a;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed_[i]) diag_[i] = 1.0;
  }
  // Forward elimination once; apply() only substitutes.
  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower_[i] / diag_[i - 1];
    diag_[i] -= m * upper_[i - 1];
    lower_[i] = m;
  }
}

void StiffnessPreconditioner::apply(std::span<const double> g, std::span<double> z) const {
  const std::size_t n = diag_.size();
  for (std::size_t i = 0; i < n; ++i) z[i] = fixed_[i] ? 0.0 : g[i];
  for (std::size_t i = 1; i < n; ++i) z[i] -= lower_[i] * z[i - 1];
  z[n - 1] /= diag_[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) z[i] = (z[i] - upper_[i] * z[i + 1]) / diag_[i];
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed_[i]) z[i] = 0.0;
  }
}

namespace {

double masked_sup(const StiffnessPreconditioner& pre, std::span<double> g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (pre.is_fixed(i)) g[i] = 0.0;
  }
  return simd::max_abs(g);
}

}  // namespace

MinimizeResult minimize(const ValueGradient& objective, std::vector<double> x0,
                        const StiffnessPreconditioner& preconditioner,
                        const MinimizeOptions& options, const IterateHook& hook) {
  const StepPolicy& policy = options.policy;
  const std::size_t n = x0.size();
  MinimizeResult out;
  out.x = std::move(x0);

  std::vector<double> g(n), z(n), d(n), trial(n), g_new(n), z_new(n);
  std::vector<double> history;

  double f = 0.0;
  double gsup = 0.0;
  auto evaluate_at_x = [&] {
    std::fill(g.begin(), g.end(), 0.0);
    f = objective(out.x, g);
    gsup = masked_sup(preconditioner, g);
    preconditioner.apply(g, z);
    for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];
  };
  auto value_at = [&](double alpha) {
    trial = out.x;
    simd::axpy(alpha, d, trial);
    return objective(trial, {});
  };

  evaluate_at_x();
  history.push_back(f);
  double alpha_prev = policy.initial_step;
  bool steepest = true;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (!std::isfinite(f)) break;
    if (gsup <= options.gradient_tolerance) {
      out.converged = true;
      break;
    }
    double slope = simd::dot(g, d);
    if (!(slope < 0.0)) {
      for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];
      slope = simd::dot(g, d);
      steepest = true;
      if (!(slope < 0.0)) {
        out.converged = true;  // no descent direction left at working precision
        break;
      }
    }

    double alpha = it == 0 ? policy.initial_step : std::min(2.0 * alpha_prev, 1e12);
    double f_trial = value_at(alpha);
    bool accepted = false;
    bool first = true;
    for (int k = 0; k <= policy.max_backtracks; ++k) {
      if (std::isfinite(f_trial) && f_trial <= f + policy.armijo * alpha * slope) {
        accepted = true;
        break;
      }
      first = false;
      double next = policy.backtrack * alpha;
      const double curvature = f_trial - f - slope * alpha;
      if (std::isfinite(f_trial) && curvature > 0.0) {
        next = std::clamp(-slope * alpha * alpha / (2.0 * curvature), 0.1 * alpha,
                          policy.backtrack * alpha);
      }
      alpha = next;
      f_trial = value_at(alpha);
    }
    if (!accepted) {
      if (!steepest) {
        for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];
        steepest = true;
        --it;
        continue;
      }
      out.converged = true;  // the line search cannot improve f any further
      break;
    }
    if (first) {
      // Expand while the value keeps dropping.
      for (int k = 0; k < 8; ++k) {
        const double f_more = value_at(2.0 * alpha);
        if (!(std::isfinite(f_more) && f_more < f_trial)) break;
        alpha *= 2.0;
        f_trial = f_more;
      }
    }
    alpha_prev = alpha;
    simd::axpy(alpha, d, out.x);

    std::fill(g_new.begin(), g_new.end(), 0.0);
    const double f_new = objective(out.x, g_new);
    const double gsup_new = masked_sup(preconditioner, g_new);
    preconditioner.apply(g_new, z_new);

    double beta = 0.0;
    const double denom = simd::dot(g, z);
    if (policy.conjugate && denom > 0.0) {
      beta = std::max(0.0, (simd::dot(g_new, z_new) - simd::dot(g, z_new)) / denom);
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = -z_new[i] + beta * d[i];
    steepest = beta == 0.0;
    std::swap(g, g_new);
    std::swap(z, z_new);
    f = f_new;
    gsup = gsup_new;
    history.push_back(f);

    if (hook) {
      const HookAction action = hook(it + 1, out.x, f, gsup);
      if (action == HookAction::Stop) {
        out.stopped = true;
        ++it;
        break;
      }
      if (action == HookAction::Restart) {
        evaluate_at_x();
        steepest = true;
        alpha_prev = policy.initial_step;
      }
    }

    const int window = options.stall_window;
    if (options.stall_tolerance > 0.0 && static_cast<int>(history.size()) > window) {
      const double before = history[history.size() - 1 - window];
      if (before - f <= options.stall_tolerance * std::abs(f)) {
        out.converged = true;
        ++it;
        break;
      }
    }
  }
  out.value = f;
  out.gradient_sup = gsup;
  out.iterations = it;
  return out;
}

}  // namespace pqlab::radial
