#pragma once

// Fibering maps along rays t ↦ t v, mountain-pass level upper bounds
// against the compactness threshold c* = S^{N/p}/N, and ε-sweeps.

#include <optional>
#include <utility>
#include <vector>

#include "pqlab/bubble.hpp"
#include "pqlab/core.hpp"
#include "pqlab/rate_fit.hpp"

namespace pqlab::mountain_pass {

/// φ(t) = (t^p/p) A + (ν t^q/q) B - b t^s C - t^{p*}/p*.
struct FiberingCoefficients {
  double A = 1.0;  // ∫|∇v|^p
  double B = 0.0;  // ∫|∇v|^q
  double C = 1.0;  // ∫v^s
  double p = 2.0;
  double q = 1.5;
  double s = 3.0;
  double pstar = 6.0;
  double b = 0.0;
  double nu = 0.0;
};

struct FiberingValue {
  double phi = 0.0;
  double dphi = 0.0;
};

FiberingValue fibering_profile(const FiberingCoefficients& c, double t);

struct FiberingMax {
  double t_max = 0.0;
  double phi_max = 0.0;
};

/// Global maximizer of φ on t > 0: sign changes of φ' on a 1000-point log
/// grid over [1e-6, 1e6] A^{1/(p*-p)}, refined by bisection.
FiberingMax fibering_max(const FiberingCoefficients& c);

/// t₀ = S^{(N-p)/p²}, the positive root of S t^p = t^{p*}.
double limit_root(double S, int N, double p);

struct LevelEstimate {
  double t_max = 0.0;
  double phi_max = 0.0;
  double c_star = 0.0;
  double margin = 0.0;  // c* - φ_max
  double eps = 0.0;
  double delta = 1.0;
  FiberingCoefficients coefficients{};
};

/// Coefficients of E_ν(t v) for the model problem: the s-term enters with
/// b/s (F(u) = (b/s)|u|^s); the μ-term and the rest of F are dropped, which
/// keeps φ an upper bound of the energy along the ray.
FiberingCoefficients fibering_coefficients(const core::ProblemSpec& spec,
                                           const bubble::BubbleParams& params);

/// Level bound along the ray through the normalized bubble. S defaults to
/// the cached bubble estimate of the best Sobolev constant.
LevelEstimate level_upper_bound(const core::ProblemSpec& spec, const bubble::BubbleParams& params,
                                std::optional<double> S = std::nullopt);

/// Cached sobolev_bubble_estimate(N, p).
double cached_sobolev(int N, double p);

struct SweepRow {
  LevelEstimate level;
  double quotient_gradq = 0.0;  // ν ∫|∇v|^q / ∫v^s
  double quotient_scale = 0.0;  // (ε/δ)^{(N-p)/(p-1)} / ∫v^s
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<std::size_t> first_flag;  // first row with margin > 0
  bool conclusive() const { return first_flag.has_value(); }
};

/// Default ε schedule {1e-1, 10^-1.5, 1e-2, 10^-2.5, 1e-3}.
std::vector<double> default_eps_schedule();

/// (ε, ε^κ) pairs; κ = 0 gives δ = 1.
std::vector<std::pair<double, double>> kappa_schedule(const std::vector<double>& eps, double kappa);

/// Needs a nonempty schedule with ε/δ strictly decreasing.
SweepResult epsilon_sweep(const core::ProblemSpec& spec,
                          const std::vector<std::pair<double, double>>& schedule,
                          std::optional<double> S = std::nullopt);

/// Fitted ε-exponents of the two sweep quotients along δ = ε^κ, next to the
/// closed-form predictions.
struct QuotientDecay {
  bubble::QuotientRates predicted{};
  RateFit first;
  RateFit second;
  double first_error = 0.0;
  double second_error = 0.0;
};

QuotientDecay quotient_decay(const core::ProblemSpec& spec, double kappa,
                             const std::vector<double>& eps);

/// Exponent of ε^{(N-p)/(p-1)} / ∫v_ε^s in its three s-regimes.
struct PerturbedPrediction {
  double exponent = 0.0;
  bool inverse_log = false;  // extra 1/|log ε| factor
  bubble::Regime regime = bubble::Regime::Above;
};

PerturbedPrediction perturbed_prediction(int N, double p, double s);

struct PerturbedRow {
  double eps = 0.0;
  double quotient = 0.0;
  LevelEstimate level;  // with ν = 0
};

struct PerturbedCheck {
  std::vector<PerturbedRow> rows;
  PerturbedPrediction predicted{};
  RateFit fit;
  double relative_error = 0.0;
};

PerturbedCheck perturbed_threshold_check(const core::ProblemSpec& spec,
                                         const std::vector<double>& eps_schedule,
                                         std::optional<double> S = std::nullopt);

/// Largest ν₀ with ν₀ · gamma_max_gradq / q ≤ margin.
double nu_transfer(const LevelEstimate& level_at_nu0, double gamma_max_gradq, double q);

}  // namespace pqlab::mountain_pass
