#include "pqlab/mountain_pass.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <algorithm>

#include "pqlab/error.hpp"
#include "pqlab/radial.hpp"

namespace pqlab::mountain_pass {

namespace {

constexpr int kGridPoints = 1000;
constexpr double kGridDecades = 6.0;

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

double resolve_sobolev(int N, double p, std::optional<double> S) {
  if (S) {
    require(*S > 0.0 && std::isfinite(*S), ErrorKind::OutOfRange, "S must be positive");
    return *S;
  }
  return cached_sobolev(N, p);
}

}  // namespace

FiberingValue fibering_profile(const FiberingCoefficients& c, double t) {
  require(t >= 0.0, ErrorKind::OutOfRange, "fibering parameter must be >= 0");
  if (t == 0.0) return {0.0, 0.0};
  const double tp = std::pow(t, c.p);
  const double tq = std::pow(t, c.q);
  const double ts = std::pow(t, c.s);
  const double tc = std::pow(t, c.pstar);
  const double phi = tp / c.p * c.A + c.nu * tq / c.q * c.B - c.b * ts * c.C - tc / c.pstar;
  const double dphi = (tp * c.A + c.nu * tq * c.B - c.s * c.b * ts * c.C - tc) / t;
  return {phi, dphi};
}

FiberingMax fibering_max(const FiberingCoefficients& c) {
  require(c.A > 0.0 && c.C > 0.0 && c.B >= 0.0, ErrorKind::Precondition,
          "fibering coefficients need A, C > 0 and B >= 0");
  const double scale = std::pow(c.A, 1.0 / (c.pstar - c.p));
  auto grid = [&](int k) {
    return scale * std::pow(10.0, -kGridDecades + 2.0 * kGridDecades * k / (kGridPoints - 1));
  };

  FiberingMax best{0.0, -std::numeric_limits<double>::infinity()};
  bool found = false;
  double t_prev = grid(0);
  double d_prev = fibering_profile(c, t_prev).dphi;
  for (int k = 1; k < kGridPoints; ++k) {
    const double t = grid(k);
    const double d = fibering_profile(c, t).dphi;
    if (d_prev > 0.0 && d <= 0.0) {
      double lo = t_prev;
      double hi = t;
      for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (fibering_profile(c, mid).dphi > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double da = std::abs(fibering_profile(c, lo).dphi);
      const double db = std::abs(fibering_profile(c, hi).dphi);
      const double root = da <= db ? lo : hi;
      const double phi = fibering_profile(c, root).phi;
      if (phi > best.phi_max) best = {root, phi};
      found = true;
    }
    t_prev = t;
    d_prev = d;
  }
  if (!found) fail(ErrorKind::BracketFailure, "no sign change of the fibering derivative");
  return best;
}

double limit_root(double S, int N, double p) {
  require(S > 0.0 && std::isfinite(S), ErrorKind::OutOfRange, "limit_root needs S > 0");
  require(p > 1.0 && p < N, ErrorKind::OutOfRange, "limit_root needs 1 < p < N");
  return std::pow(S, (N - p) / (p * p));
}

double cached_sobolev(int N, double p) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, double> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(N, p);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, radial::sobolev_bubble_estimate(N, p)).first;
  return it->second;
}

FiberingCoefficients fibering_coefficients(const core::ProblemSpec& spec,
                                           const bubble::BubbleParams& params) {
  require(params.normalized(), ErrorKind::Precondition, "level bound needs a normalized bubble");
  require(params.N == spec.N && params.p == spec.p, ErrorKind::Precondition,
          "bubble and spec disagree on (N, p)");
  require(params.support() <= spec.rho * (1.0 + 1e-12), ErrorKind::Precondition,
          "bubble support must lie in B_rho");
  FiberingCoefficients c;
  c.A = bubble::grad_norm_p(params);
  c.B = spec.nu == 0.0 ? 0.0 : bubble::grad_norm_q(params, spec.q);
  c.C = bubble::power_integral(params, spec.s);
  c.p = spec.p;
  c.q = spec.q;
  c.s = spec.s;
  c.pstar = spec.critical();
  c.b = spec.b / spec.s;
  c.nu = spec.nu;
  return c;
}

LevelEstimate level_upper_bound(const core::ProblemSpec& spec, const bubble::BubbleParams& params,
                                std::optional<double> S) {
  const core::ProblemSpec checked = core::validate_spec(spec);
  const double s_value = resolve_sobolev(checked.N, checked.p, S);
  LevelEstimate out;
  out.coefficients = fibering_coefficients(checked, params);
  const FiberingMax fm = fibering_max(out.coefficients);
  out.t_max = fm.t_max;
  out.phi_max = fm.phi_max;
  out.c_star = core::threshold_energy(s_value, checked.N, checked.p);
  out.margin = out.c_star - out.phi_max;
  out.eps = params.eps;
  out.delta = params.delta;
  return out;
}

std::vector<double> default_eps_schedule() {
  return {1e-1, std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3};
}

std::vector<std::pair<double, double>> kappa_schedule(const std::vector<double>& eps,
                                                      double kappa) {
  std::vector<std::pair<double, double>> out;
  out.reserve(eps.size());
  for (double e : eps) out.emplace_back(e, kappa == 0.0 ? 1.0 : std::pow(e, kappa));
  return out;
}

SweepResult epsilon_sweep(const core::ProblemSpec& spec,
                          const std::vector<std::pair<double, double>>& schedule,
                          std::optional<double> S) {
  require(!schedule.empty(), ErrorKind::Precondition, "sweep schedule is empty");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    require(schedule[i].first / schedule[i].second <
                schedule[i - 1].first / schedule[i - 1].second,
            ErrorKind::Precondition, "sweep schedule must have decreasing eps/delta");
  }
  const core::ProblemSpec checked = core::validate_spec(spec);
  const double s_value = resolve_sobolev(checked.N, checked.p, S);
  SweepResult out;
  for (const auto& [eps, delta] : schedule) {
    const bubble::BubbleParams params = bubble::normalize(bubble::make_bubble(
        checked.N, checked.p, eps, delta, bubble::CutoffProfile(checked.rho)));
    SweepRow row;
    row.level = level_upper_bound(checked, params, s_value);
    std::tie(row.quotient_gradq, row.quotient_scale) =
        bubble::quotient_ratios(params, checked.s, checked.q, checked.nu);
    if (!out.first_flag && row.level.margin > 0.0) out.first_flag = out.rows.size();
    out.rows.push_back(row);
  }
  return out;
}

QuotientDecay quotient_decay(const core::ProblemSpec& spec, double kappa,
                             const std::vector<double>& eps) {
  const core::ProblemSpec checked = core::validate_spec(spec);
  QuotientDecay out;
  out.predicted = bubble::quotient_rates(checked.N, checked.p, checked.q, checked.s, kappa);
  std::vector<std::pair<double, double>> first, second;
  for (const auto& [e, delta] : kappa_schedule(eps, kappa)) {
    const bubble::BubbleParams params = bubble::normalize(
        bubble::make_bubble(checked.N, checked.p, e, delta, bubble::CutoffProfile(checked.rho)));
    const auto [a, b] = bubble::quotient_ratios(params, checked.s, checked.q, 1.0);
    first.emplace_back(e, a);
    second.emplace_back(e, b);
  }
  out.first = fit_rate(first, out.predicted.first_log);
  out.second = fit_rate(second, false);
  out.first_error = relative_slope_error(out.first, out.predicted.first);
  out.second_error = relative_slope_error(out.second, out.predicted.second);
  return out;
}

PerturbedPrediction perturbed_prediction(int N, double p, double s) {
  const double boundary = core::s_regime_boundary(N, p);
  if (near(s, boundary)) {
    return {(N - p * p) / (p * (p - 1.0)), true, bubble::Regime::Boundary};
  }
  if (s > boundary) {
    return {((N - p) * (p - 1.0) * s - (N * p - 2.0 * N + p) * p) / (p * (p - 1.0)), false,
            bubble::Regime::Above};
  }
  return {(N - p) * (p - s) / (p * (p - 1.0)), false, bubble::Regime::Below};
}

PerturbedCheck perturbed_threshold_check(const core::ProblemSpec& spec,
                                         const std::vector<double>& eps_schedule,
                                         std::optional<double> S) {
  core::ProblemSpec checked = core::validate_spec(spec);
  checked.nu = 0.0;
  const double s_value = resolve_sobolev(checked.N, checked.p, S);
  PerturbedCheck out;
  out.predicted = perturbed_prediction(checked.N, checked.p, checked.s);
  std::vector<std::pair<double, double>> samples;
  for (double eps : eps_schedule) {
    const bubble::BubbleParams params = bubble::normalize(
        bubble::make_bubble(checked.N, checked.p, eps, 1.0, bubble::CutoffProfile(checked.rho)));
    PerturbedRow row;
    row.eps = eps;
    row.quotient = bubble::quotient_ratios(params, checked.s, checked.q, 0.0).second;
    row.level = level_upper_bound(checked, params, s_value);
    samples.emplace_back(eps, row.quotient);
    out.rows.push_back(row);
  }
  out.fit = fit_rate(samples, out.predicted.inverse_log, -1.0);
  out.relative_error = relative_slope_error(out.fit, out.predicted.exponent);
  return out;
}

double nu_transfer(const LevelEstimate& level_at_nu0, double gamma_max_gradq, double q) {
  require(level_at_nu0.margin > 0.0, ErrorKind::Precondition,
          "nu transfer needs a positive margin");
  require(gamma_max_gradq >= 0.0 && q > 1.0, ErrorKind::OutOfRange,
          "nu transfer needs gamma >= 0 and q > 1");
  if (gamma_max_gradq == 0.0) return std::numeric_limits<double>::infinity();
  return q * level_at_nu0.margin / gamma_max_gradq;
}

}  // namespace pqlab::mountain_pass
