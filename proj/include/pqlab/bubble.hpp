#pragma once

// Concentrating test functions
//
//   u_{ε,δ}(r) = ψ(r/δ) / (ε^{p/(p-1)} + r^{p/(p-1)})^{(N-p)/p},
//   v_{ε,δ}    = u_{ε,δ} / ||u_{ε,δ}||_{L^{p*}},
//
// their radial quadratures, and the closed-form exponents of the
// asymptotic estimates used to check them. δ = 1 gives u_ε, v_ε.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace pqlab::bubble {

enum class CutoffKind {
  Smoothstep5,  // quintic transition on [ρ/2, ρ], C² at both junctions
  Smoothstep7,  // septic transition, C³
  Truncation,   // ψ = 1 on [0, ρ): used only for whole-space quotients
  Custom,
};

/// Value and radial derivative of a radial function at one radius.
struct RadialValue {
  double value = 0.0;
  double derivative = 0.0;
};

class CutoffProfile {
 public:
  using Evaluator = std::function<RadialValue(double x)>;

  explicit CutoffProfile(double rho = 1.0, CutoffKind kind = CutoffKind::Smoothstep5);

  /// User profile on x = r/ρ; must equal 1 on [0, 1/2] and 0 on [1, ∞).
  CutoffProfile(double rho, Evaluator evaluator);

  double rho() const { return rho_; }
  CutoffKind kind() const { return kind_; }

  /// Whether ψ has a transition band [ρ/2, ρ] (false for Truncation).
  bool has_band() const { return kind_ != CutoffKind::Truncation; }

  RadialValue operator()(double r) const;

 private:
  double rho_;
  CutoffKind kind_;
  Evaluator custom_;
};

struct BubbleParams {
  int N = 3;
  double p = 2.0;
  double eps = 0.1;
  double delta = 1.0;
  CutoffProfile cutoff{};
  std::optional<double> norm_pstar;  // ||u_{ε,δ}||_{p*}, set by normalize()

  double support() const { return cutoff.rho() * delta; }
  bool normalized() const { return norm_pstar.has_value(); }
};

/// Validated construction: 1 < p < N ≤ 10, ε > 0, δ ∈ (0, 1].
BubbleParams make_bubble(int N, double p, double eps, double delta,
                         CutoffProfile cutoff = CutoffProfile{});

/// Unnormalized u_{ε,δ}(r) and its radial derivative.
RadialValue eval_bubble(const BubbleParams& params, double r);

/// v_{ε,δ}(r); needs normalized params.
RadialValue eval_normalized(const BubbleParams& params, double r);

/// Caches ||u_{ε,δ}||_{p*}. Idempotent.
BubbleParams normalize(BubbleParams params);

/// ∫_{R^N} |∇v_{ε,δ}|^p.
double grad_norm_p(const BubbleParams& params);
/// ∫_{R^N} |∇v_{ε,δ}|^q.
double grad_norm_q(const BubbleParams& params, double q);
/// ∫_{R^N} v_{ε,δ}^s.
double power_integral(const BubbleParams& params, double s);

/// ∫_{R^N} |u_{ε,δ}|^k (unnormalized); the building block of the above.
double raw_power_integral(const BubbleParams& params, double k);
double raw_gradient_integral(const BubbleParams& params, double m);

/// Relative residuals of the exact dilation identities between (ε, δ) and
/// (ε/δ, 1): keys "pointwise", "norm", "power", "grad_q", "grad_p".
std::map<std::string, double> scaling_check(int N, double p, double eps, double delta,
                                            const CutoffProfile& cutoff, double s, double q);

/// ν ∫|∇v|^q / ∫v^s and (ε/δ)^{(N-p)/(p-1)} / ∫v^s.
std::pair<double, double> quotient_ratios(const BubbleParams& params, double s, double q,
                                          double nu);

// ---------------------------------------------------------------------------
// Closed-form exponents.

enum class Regime { Above, Boundary, Below };

/// Predicted behaviour Θ(ε^{eps_power} δ^{delta_power} |log(ε/δ)|^{log}).
struct PredictedRate {
  double eps_power = 0.0;
  double delta_power = 0.0;
  bool log_factor = false;
  Regime regime = Regime::Above;

  /// Exponent in ε along δ = ε^κ.
  double along(double kappa) const { return eps_power + kappa * delta_power; }
};

/// ∫|∇v|^p - S = Θ((ε/δ)^{(N-p)/(p-1)}).
PredictedRate gradp_excess_rate(int N, double p);
/// ∫|∇v|^q, three regimes split at q = N(p-1)/(N-1).
PredictedRate gradq_rate(int N, double p, double q);
/// ∫v^s, three regimes split at s = N(p-1)/(N-p).
PredictedRate power_rate(int N, double p, double s);

struct QuotientRates {
  double first = 0.0;   // ε-exponent of ∫|∇v|^q / ∫v^s
  double second = 0.0;  // ε-exponent of (ε/δ)^{(N-p)/(p-1)} / ∫v^s
  bool first_log = false;
  Regime q_regime = Regime::Above;
  bool vanishing = false;  // both exponents positive: the quotients tend to 0
};

/// Exponents of the two quotients along δ = ε^κ; needs s > N(p-1)/(N-p).
QuotientRates quotient_rates(int N, double p, double q, double s, double kappa);

}  // namespace pqlab::bubble
