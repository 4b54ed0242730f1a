#include "pqlab/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pqlab/core.hpp"
#include "pqlab/error.hpp"
#include "pqlab/quadrature.hpp"

namespace pqlab::bubble {

namespace {

constexpr int kGaussOrder = 20;
constexpr double kGrowth = 1.25;
constexpr int kBandCells = 4;
constexpr double kInnerFraction = 1e-4;
constexpr double kQuadratureTolerance = 1e-11;
constexpr int kEdgeLevels = 24;

// Smoothstep polynomials S(x) on [0, 1] and S'(x).
RadialValue smoothstep5(double x) {
  return {x * x * x * (10.0 + x * (-15.0 + 6.0 * x)), 30.0 * x * x * (1.0 - x) * (1.0 - x)};
}

RadialValue smoothstep7(double x) {
  const double x2 = x * x;
  const double x4 = x2 * x2;
  const double value = x4 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
  const double slope = 140.0 * x2 * x * (1.0 - x) * (1.0 - x) * (1.0 - x);
  return {value, slope};
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

std::vector<double> edges_for(const BubbleParams& params, double growth, int band_cells) {
  const double top = params.support();
  const double knee = params.cutoff.has_band() ? 0.5 * top : top;
  const double inner = std::min(params.eps, knee) * kInnerFraction;
  auto edges =
      quad::graded_edges(inner, knee, top, growth, params.cutoff.has_band() ? band_cells : 0);
  if (params.cutoff.has_band()) {
    // |u'|^m vanishes like (top - r)^{2m} at the support edge; dyadic cells
    // toward it keep the Gauss rule accurate for small m.
    const double width = top - edges[edges.size() - 2];
    edges.pop_back();
    for (int k = 1; k <= kEdgeLevels; ++k) edges.push_back(top - width * std::ldexp(1.0, -k));
    edges.push_back(top);
  }
  return edges;
}

// ∫ integrand(u, u') |S^{N-1}| r^{N-1} dr over the support, checked against a
// refined rule.
template <class F>
double integrate(const BubbleParams& params, F&& integrand) {
  auto evaluate = [&](double growth, int band_cells) {
    const auto edges = edges_for(params, growth, band_cells);
    const quad::RadialRule rule = quad::radial_rule(params.N, edges, kGaussOrder);
    std::vector<double> values(rule.radii.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = integrand(eval_bubble(params, rule.radii[i]));
    }
    return rule.integrate(values);
  };
  const double coarse = evaluate(kGrowth, kBandCells);
  const double fine = evaluate(std::sqrt(kGrowth), 2 * kBandCells);
  if (!std::isfinite(fine) || std::abs(fine - coarse) > kQuadratureTolerance * std::abs(fine)) {
    fail(ErrorKind::QuadratureFailure,
         "bubble quadrature did not settle (eps=" + std::to_string(params.eps) +
             ", delta=" + std::to_string(params.delta) + ")");
  }
  return fine;
}

const BubbleParams& require_normalized(const BubbleParams& params) {
  require(params.normalized(), ErrorKind::Precondition, "bubble params are not normalized");
  return params;
}

}  // namespace

CutoffProfile::CutoffProfile(double rho, CutoffKind kind) : rho_(rho), kind_(kind) {
  require(std::isfinite(rho) && rho > 0.0, ErrorKind::OutOfRange, "cutoff radius must be > 0");
  require(kind != CutoffKind::Custom, ErrorKind::Precondition,
          "custom cutoff needs an evaluator");
}

CutoffProfile::CutoffProfile(double rho, Evaluator evaluator)
    : rho_(rho), kind_(CutoffKind::Custom), custom_(std::move(evaluator)) {
  require(std::isfinite(rho) && rho > 0.0, ErrorKind::OutOfRange, "cutoff radius must be > 0");
  require(static_cast<bool>(custom_), ErrorKind::Precondition, "empty cutoff evaluator");
}

RadialValue CutoffProfile::operator()(double r) const {
  const double x = r / rho_;
  if (kind_ == CutoffKind::Truncation) return {x < 1.0 ? 1.0 : 0.0, 0.0};
  if (x <= 0.5) return {1.0, 0.0};
  if (x >= 1.0) return {0.0, 0.0};
  if (kind_ == CutoffKind::Custom) {
    const RadialValue v = custom_(x);
    return {v.value, v.derivative / rho_};
  }
  // Transition variable on [ρ/2, ρ] mapped to [0, 1].
  const double t = 2.0 * x - 1.0;
  const RadialValue step = kind_ == CutoffKind::Smoothstep7 ? smoothstep7(t) : smoothstep5(t);
  return {1.0 - step.value, -step.derivative * 2.0 / rho_};
}

BubbleParams make_bubble(int N, double p, double eps, double delta, CutoffProfile cutoff) {
  require(N >= 2 && N <= 10, ErrorKind::OutOfRange, "bubble needs 2 <= N <= 10");
  require(p > 1.0 && p < N, ErrorKind::OutOfRange, "bubble needs 1 < p < N");
  require(std::isfinite(eps) && eps > 0.0, ErrorKind::OutOfRange, "bubble needs eps > 0");
  require(std::isfinite(delta) && delta > 0.0 && delta <= 1.0, ErrorKind::OutOfRange,
          "bubble needs delta in (0, 1]");
  BubbleParams params;
  params.N = N;
  params.p = p;
  params.eps = eps;
  params.delta = delta;
  params.cutoff = std::move(cutoff);
  return params;
}

RadialValue eval_bubble(const BubbleParams& params, double r) {
  require(r >= 0.0, ErrorKind::OutOfRange, "bubble radius must be >= 0");
  const RadialValue psi = params.cutoff(r / params.delta);
  if (psi.value == 0.0 && psi.derivative == 0.0) return {0.0, 0.0};
  const int N = params.N;
  const double p = params.p;
  const double conj = p / (p - 1.0);
  const double base = std::pow(params.eps, conj) + std::pow(r, conj);
  const double core = std::pow(base, -(N - p) / p);
  const double core_slope =
      -(N - p) / (p - 1.0) * std::pow(r, 1.0 / (p - 1.0)) * std::pow(base, -N / p);
  return {psi.value * core, psi.derivative / params.delta * core + psi.value * core_slope};
}

RadialValue eval_normalized(const BubbleParams& params, double r) {
  const double norm = *require_normalized(params).norm_pstar;
  const RadialValue u = eval_bubble(params, r);
  return {u.value / norm, u.derivative / norm};
}

BubbleParams normalize(BubbleParams params) {
  if (params.normalized()) return params;
  const double pstar = core::critical_exponent(params.N, params.p);
  params.norm_pstar = std::pow(raw_power_integral(params, pstar), 1.0 / pstar);
  return params;
}

double raw_power_integral(const BubbleParams& params, double k) {
  require(k > 0.0, ErrorKind::OutOfRange, "power must be > 0");
  return integrate(params, [k](RadialValue u) { return std::pow(std::abs(u.value), k); });
}

double raw_gradient_integral(const BubbleParams& params, double m) {
  require(m > 0.0, ErrorKind::OutOfRange, "gradient power must be > 0");
  return integrate(params, [m](RadialValue u) { return std::pow(std::abs(u.derivative), m); });
}

double grad_norm_p(const BubbleParams& params) {
  const double norm = *require_normalized(params).norm_pstar;
  return raw_gradient_integral(params, params.p) / std::pow(norm, params.p);
}

double grad_norm_q(const BubbleParams& params, double q) {
  const double norm = *require_normalized(params).norm_pstar;
  require(q > 1.0 && q < params.p, ErrorKind::OutOfRange, "need 1 < q < p");
  return raw_gradient_integral(params, q) / std::pow(norm, q);
}

double power_integral(const BubbleParams& params, double s) {
  const double norm = *require_normalized(params).norm_pstar;
  require(s > 0.0 && s < core::critical_exponent(params.N, params.p), ErrorKind::OutOfRange,
          "need 0 < s < p*");
  return raw_power_integral(params, s) / std::pow(norm, s);
}

std::map<std::string, double> scaling_check(int N, double p, double eps, double delta,
                                            const CutoffProfile& cutoff, double s, double q) {
  const BubbleParams lhs = normalize(make_bubble(N, p, eps, delta, cutoff));
  const BubbleParams rhs = normalize(make_bubble(N, p, eps / delta, 1.0, cutoff));
  auto rel = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
  };

  std::map<std::string, double> out;
  const double amp = std::pow(delta, -(N - p) / (p - 1.0));
  double pointwise = 0.0;
  const int samples = 64;
  for (int i = 0; i <= samples; ++i) {
    const double r = lhs.support() * i / samples;
    const RadialValue a = eval_bubble(lhs, r);
    const RadialValue b = eval_bubble(rhs, r / delta);
    pointwise = std::max(pointwise, rel(a.value, amp * b.value));
    pointwise = std::max(pointwise, rel(a.derivative, amp / delta * b.derivative));
  }
  out["pointwise"] = pointwise;
  out["norm"] = rel(*lhs.norm_pstar, std::pow(delta, -(N - p) / (p * (p - 1.0))) * *rhs.norm_pstar);
  out["power"] = rel(power_integral(lhs, s),
                     std::pow(delta, (N * p - (N - p) * s) / p) * power_integral(rhs, s));
  out["grad_q"] =
      rel(grad_norm_q(lhs, q), std::pow(delta, N * (p - q) / p) * grad_norm_q(rhs, q));
  out["grad_p"] = rel(grad_norm_p(lhs), grad_norm_p(rhs));
  return out;
}

std::pair<double, double> quotient_ratios(const BubbleParams& params, double s, double q,
                                          double nu) {
  require_normalized(params);
  const double C = power_integral(params, s);
  require(std::isfinite(C) && C > 1e-300, ErrorKind::DivisionDegenerate,
          "power integral underflowed");
  const double B = nu == 0.0 ? 0.0 : grad_norm_q(params, q);
  const double ratio = params.eps / params.delta;
  const double alpha = (params.N - params.p) / (params.p - 1.0);
  return {nu * B / C, std::pow(ratio, alpha) / C};
}

PredictedRate gradp_excess_rate(int N, double p) {
  const double alpha = (N - p) / (p - 1.0);
  return {alpha, -alpha, false, Regime::Above};
}

PredictedRate gradq_rate(int N, double p, double q) {
  const double boundary = core::q_regime_boundary(N, p);
  if (near(q, boundary)) {
    return {N * (N - p) / ((N - 1.0) * p), 0.0, true, Regime::Boundary};
  }
  if (q > boundary) return {N * (p - q) / p, 0.0, false, Regime::Above};
  return {(N - p) * q / (p * (p - 1.0)), (N * (p - 1.0) - (N - 1.0) * q) / (p - 1.0), false,
          Regime::Below};
}

PredictedRate power_rate(int N, double p, double s) {
  const double boundary = core::s_regime_boundary(N, p);
  if (near(s, boundary)) return {N / p, 0.0, true, Regime::Boundary};
  if (s > boundary) return {(N * p - (N - p) * s) / p, 0.0, false, Regime::Above};
  return {(N - p) * s / (p * (p - 1.0)), (N * (p - 1.0) - (N - p) * s) / (p - 1.0), false,
          Regime::Below};
}

QuotientRates quotient_rates(int N, double p, double q, double s, double kappa) {
  require(N >= 2 && p > 1.0 && p < N && q > 1.0 && q < p, ErrorKind::OutOfRange,
          "need 1 < q < p < N");
  require(s > core::s_regime_boundary(N, p), ErrorKind::Precondition,
          "quotient rates need s > N(p-1)/(N-p)");
  QuotientRates out;
  const double boundary = core::q_regime_boundary(N, p);
  if (near(q, boundary) || q > boundary) {
    out.first = ((N - p) * s - N * q) / p;
    out.first_log = near(q, boundary);
    out.q_regime = out.first_log ? Regime::Boundary : Regime::Above;
  } else {
    out.first = ((N - p) * (s + q / (p - 1.0)) - N * p) / p +
                kappa * (N * (p - 1.0) - (N - 1.0) * q) / (p - 1.0);
    out.q_regime = Regime::Below;
  }
  out.second = ((N - p) * (p - 1.0) * s - (N * p - 2.0 * N + p) * p) / (p * (p - 1.0)) -
               kappa * (N - p) / (p - 1.0);
  out.vanishing = out.first > 0.0 && out.second > 0.0;
  return out;
}

}  // namespace pqlab::bubble
