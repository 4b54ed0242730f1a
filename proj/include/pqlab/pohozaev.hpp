#pragma once

// Pohožaev-type identity for -Δ_p u - Δ_q u = g(u) on B_R, its two building
// blocks (the divergence identity and testing with u), manufactured radial
// solutions, and the nonexistence chain for g(t) = μ|t|^{q-2}t + |t|^{p*-2}t.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pqlab/core.hpp"
#include "pqlab/radial.hpp"

namespace pqlab::pohozaev {

struct AutonomousNonlinearity {
  std::function<double(double)> g;
  std::function<double(double)> G;  // G(0) = 0, G' = g
};

/// A strictly decreasing C² radial profile with u(R) = 0.
struct RadialProfile {
  std::string name;
  double R = 1.0;
  std::function<double(double)> u;
  std::function<double(double)> du;
  std::function<double(double)> d2u;
};

RadialProfile parabola_profile(double R = 1.0);  // 1 - (r/R)²
RadialProfile cosine_profile(double R = 1.0);    // cos(πr / 2R)

struct ManufacturedSolution {
  radial::RadialField u;
  AutonomousNonlinearity nl;
};

/// u is the nodal interpolant of the profile on `mesh`; g(t) = h(u⁻¹(t)) with
/// h = -Δ_p u - Δ_q u, and G(u(r)) = ∫_r^R h |u'| dρ. Throws NonMonotone
/// unless u' < 0 on (0, R] and u(R) = 0.
ManufacturedSolution manufactured_solution(const RadialProfile& profile,
                                           const core::ProblemSpec& spec,
                                           const radial::MeshPtr& mesh);

struct PohozaevReport {
  double gradq_term = 0.0;      // (1/q - 1/p) ∫|∇u|^q
  double potential_term = 0.0;  // ∫[G(u) - u g(u)/p*]
  double boundary_term = 0.0;   // (1/N) ∮[(1-1/p)|∂u/∂ν|^p + (1-1/q)|∂u/∂ν|^q](x·ν)
  double residual = 0.0;        // gradq - potential + boundary
  double scale = 0.0;           // max |term|

  // Raw integrals shared by the three identities.
  double grad_p = 0.0;
  double grad_q = 0.0;
  double G_integral = 0.0;
  double ug_integral = 0.0;
  double normal_derivative = 0.0;

  double relative() const { return scale > 0.0 ? residual / scale : 0.0; }
};

PohozaevReport pohozaev_residual(const radial::RadialField& u, const AutonomousNonlinearity& nl,
                                 const core::ProblemSpec& spec);

/// Identity residual with its scale (largest absolute term).
struct IdentityResidual {
  double residual = 0.0;
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? residual / scale : 0.0; }
};

/// (N/p-1)∫|∇u|^p + (N/q-1)∫|∇u|^q - N∫G(u) + ∮[...](x·ν).
IdentityResidual volume_identity(const PohozaevReport& report, const core::ProblemSpec& spec);
/// ∫|∇u|^p + ∫|∇u|^q - ∫u g(u).
IdentityResidual tested_identity(const PohozaevReport& report);

/// Relative residuals of the two identities, computed from scratch.
double volume_identity_check(const radial::RadialField& u, const AutonomousNonlinearity& nl,
                             const core::ProblemSpec& spec);
double tested_identity_check(const radial::RadialField& u, const AutonomousNonlinearity& nl,
                             const core::ProblemSpec& spec);

/// |volume - (N/p - 1) tested - N · pohozaev| relative to the largest term.
/// The divergence identity carries the boundary integral without the 1/N of
/// the Pohožaev form, so the recombination reproduces N times it.
double recombination_residual(const PohozaevReport& report, const core::ProblemSpec& spec);

/// One-sided second-order u'(R) from the last three nodes.
double boundary_derivative(const radial::RadialField& u);

struct ChainReport {
  double boundary = 0.0;  // left side, ≥ 0 on a ball
  double middle = 0.0;    // (1/q - 1/p*) μ ∫|u|^q - (1/q - 1/p) ∫|∇u|^q
  double right = 0.0;     // (1/q - 1/p)(μ₁ ∫|u|^q - ∫|∇u|^q)
  double scale = 0.0;
  bool middle_below_right = false;  // μ ≤ bound makes middle ≤ right
  bool rayleigh_holds = false;      // right ≤ 1e-8 · scale
  bool pattern_holds = false;       // boundary ≥ 0 and right ≤ 0 (to tolerance)
};

/// The chain evaluated on u for g(t) = μ|t|^{q-2}t + |t|^{p*-2}t.
ChainReport nonexistence_inequality(const radial::RadialField& u, const core::ProblemSpec& spec,
                                    double mu1);

/// Rayleigh inequality μ₁ ∫|u|^q ≤ ∫|∇u|^q + 1e-8 · scale.
bool rayleigh_inequality_holds(const radial::RadialField& u, double q, double mu1);

struct ScanOptions {
  int mesh_n = 256;
  double mesh_grading = 1.0;
  int inits = 10;
  std::uint64_t seed = 1;
  double random_amplitude = 1e-2;
  int jobs = 1;
  int max_iterations = 100000;
  double trivial_norm = 1e-6;
};

struct ScanRow {
  std::size_t spec_index = 0;
  double mu = 0.0;
  double mu1 = 0.0;
  double mu_bound = 0.0;
  bool within_bound = false;
  int init_index = 0;
  std::string init_kind;  // "random" or "bubble"
  bool converged = false;
  bool diverged = false;
  bool trivial = false;
  int iterations = 0;
  double residual = 0.0;
  double final_norm = 0.0;
  int iterates_checked = 0;
  bool rayleigh_ok = true;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  /// Every run within the bound ended trivially or as recorded non-convergence,
  /// and the Rayleigh inequality held on every checked iterate.
  bool passes = true;
};

/// Each spec is read with s = q, b = 0, ν = 1 and its μ. Inits alternate
/// between seeded random nodal noise and scaled bubbles.
ScanResult nonexistence_scan(const std::vector<core::ProblemSpec>& specs,
                             const ScanOptions& options);

}  // namespace pqlab::pohozaev
