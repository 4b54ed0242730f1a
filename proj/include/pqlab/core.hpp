#pragma once

// Exponent algebra and the existence/nonexistence hypotheses for the
// critical (p,q)-Laplacian problem
//
//   -Δ_p u - ν Δ_q u = f(u) + |u|^{p*-2} u  in B_R,   u = 0 on ∂B_R,
//
// with the model nonlinearity f(u) = b|u|^{s-2}u + μ|u|^{q-2}u.
// Every classifier is an exact floating-point predicate with strict
// inequalities; boundary tuples are inadmissible.

#include <string_view>

namespace pqlab::core {

struct ProblemSpec {
  int N = 3;
  double p = 2.0;
  double q = 1.5;
  double s = 3.0;
  double b = 1.0;
  double nu = 1.0;
  double mu = 0.0;
  double R = 1.0;
  double rho = 1.0;

  double critical() const;  // p* = Np/(N-p)
};

enum class CaseTag { CaseI, CaseII, PerturbedI, PerturbedII, Inadmissible };

std::string_view to_string(CaseTag tag);

struct ExistenceVerdict {
  bool admissible = false;
  CaseTag case_tag = CaseTag::Inadmissible;
  double threshold_s = 0.0;  // lower bound on s that was applied
};

struct KappaWindow {
  double kappa_lo = 0.0;
  double kappa_hi = 0.0;
  bool feasible = false;

  /// Midpoint of (max(κ̲,0), min(κ̄,1)); only meaningful when feasible.
  double midpoint() const;
};

/// Throws ExponentOrder unless 1 < q < p < N, OutOfRange for the remaining
/// fields (N ≥ 2, 1 < s < p*, b, ν, μ ≥ 0, R > 0, 0 < ρ ≤ R).
ProblemSpec validate_spec(const ProblemSpec& spec);

double critical_exponent(int N, double p);

/// c* = S^{N/p} / N.
double threshold_energy(double S, int N, double p);

// Named exponent thresholds shared by the classifiers and the rate formulas.
double q_regime_boundary(int N, double p);        // N(p-1)/(N-1)
double s_regime_boundary(int N, double p);        // N(p-1)/(N-p)
double case_i_s_threshold(int N, double p);       // N²(p-1)/((N-1)(N-p))
double case_ii_s_threshold(int N, double p, double q);  // Nq/(N-p)
double perturbed_s_threshold(int N, double p);    // (Np-2N+p)p/((N-p)(p-1))

ExistenceVerdict classify_existence_fixed(const ProblemSpec& spec);
ExistenceVerdict classify_existence_combined(const ProblemSpec& spec);
ExistenceVerdict classify_existence_perturbed(const ProblemSpec& spec);

/// N(p-q) μ₁ / (N(p-q) + pq): the largest μ covered by the nonexistence result.
double mu_nonexistence_bound(int N, double p, double q, double mu1);

/// Admissible κ range for δ = ε^κ in the case q < N(p-1)/(N-1).
KappaWindow kappa_window(int N, double p, double q, double s);

}  // namespace pqlab::core
