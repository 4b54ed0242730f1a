#pragma once

// Radial P1 discretization on the ball B_R ⊂ R^N.
//
// Fields are piecewise linear in r with nodal values u_i = u(r_i) and the
// Dirichlet condition u(R) = 0. Gradient integrals use the exact cell
// weights ∫_cell |S^{N-1}| r^{N-1} dr with the (constant) cell slope;
// potential integrals use Gauss points on the linear interpolant.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "pqlab/core.hpp"

namespace pqlab::radial {

class RadialMesh {
 public:
  static constexpr int kPotentialOrder = 6;

  RadialMesh(int N, std::vector<double> nodes);

  int dimension() const { return N_; }
  double radius() const { return nodes_.back(); }
  std::size_t size() const { return nodes_.size(); }
  std::size_t cells() const { return nodes_.size() - 1; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> cell_weights() const { return cell_weights_; }
  std::span<const double> inverse_widths() const { return inv_h_; }

  /// Barycentric position of Gauss point k inside every cell.
  double gauss_lambda(int k) const { return lambda_[k]; }
  /// Weights of Gauss point k for each cell, r^{N-1}|S^{N-1}| included.
  std::span<const double> gauss_weights(int k) const { return gauss_weights_[k]; }

 private:
  int N_;
  std::vector<double> nodes_;
  std::vector<double> cell_weights_;
  std::vector<double> inv_h_;
  std::vector<double> lambda_;
  std::vector<std::vector<double>> gauss_weights_;
};

using MeshPtr = std::shared_ptr<const RadialMesh>;

/// Nodes r_i = R (i/n)^grading, i = 0..n. Needs R > 0, n ≥ 16, grading ≥ 1.
MeshPtr build_mesh(int N, double R, int n, double grading);

/// Nodes 0, r_min, r_min γ, ..., R with γ close to `ratio`.
MeshPtr build_geometric_mesh(int N, double R, double r_min, double ratio);

class RadialField {
 public:
  explicit RadialField(MeshPtr mesh);
  RadialField(MeshPtr mesh, std::vector<double> values);

  /// Nodal interpolation of a profile; the last value is forced to 0.
  static RadialField interpolate(MeshPtr mesh, const std::function<double(double)>& profile);

  const RadialMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  std::span<const double> values() const { return values_; }

  /// Replaces the nodal values; the Dirichlet value is reset to 0.
  void assign(std::vector<double> values);

  double sup_norm() const;

 private:
  MeshPtr mesh_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Discrete integrals.

/// ∫ |∇u|^m dx.
double gradient_integral(const RadialField& u, double m);
/// ∫ |u|^k dx.
double power_integral(const RadialField& u, double k);

/// grad += coef · ∂/∂u ∫|∇u|^m, with the regularized modulus (|d|² + η²)^{1/2}.
void add_gradient_integral_derivative(const RadialField& u, double m, double coef,
                                      std::span<double> grad);
/// grad += coef · ∂/∂u ∫|u|^k.
void add_power_integral_derivative(const RadialField& u, double k, double coef,
                                   std::span<double> grad);

/// Regularization of the gradient modulus inside derivative assembly.
inline constexpr double kModulusRegularization = 1e-12;

// ---------------------------------------------------------------------------
// Energy of the model problem.

struct EnergyOptions {
  bool critical_term = true;  // include -(1/p*) ∫|u|^{p*}
};

/// E_ν(u) = ∫ (|∇u|^p/p + ν|∇u|^q/q - F(u) - |u|^{p*}/p*),
/// F(u) = (b/s)|u|^s + (μ/q)|u|^q.
double energy(const core::ProblemSpec& spec, const RadialField& u, EnergyOptions options = {});

/// The weak residual: pairing of E_ν'(u) with each nodal hat function
/// (zero at the Dirichlet node).
RadialField energy_gradient(const core::ProblemSpec& spec, const RadialField& u,
                            EnergyOptions options = {});

// ---------------------------------------------------------------------------
// Preconditioned nonlinear conjugate gradients.

/// Tridiagonal stiffness of ∫|∇u|² on the mesh, used as the descent metric.
/// Nodes flagged in `fixed` (and the Dirichlet node) are held at their values.
class StiffnessPreconditioner {
 public:
  StiffnessPreconditioner(const RadialMesh& mesh, std::vector<std::uint8_t> fixed);

  /// z = K^{-1} g on the free nodes, 0 on fixed nodes.
  void apply(std::span<const double> g, std::span<double> z) const;
  bool is_fixed(std::size_t i) const { return fixed_[i] != 0; }

 private:
  std::vector<double> lower_, diag_, upper_;
  std::vector<std::uint8_t> fixed_;
};

struct StepPolicy {
  bool conjugate = true;     // Polak-Ribière+ directions; false gives steepest descent
  double initial_step = 1.0;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
};

struct MinimizeOptions {
  StepPolicy policy{};
  int max_iterations = 20000;
  double gradient_tolerance = 0.0;   // stop when sup|grad| falls below
  double stall_tolerance = 1e-14;    // relative decrease over `stall_window` iterations
  int stall_window = 10;
};

enum class HookAction { Continue, Restart, Stop };

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  double gradient_sup = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stopped = false;  // the hook asked to stop
};

/// Returns the value at x and fills grad; an empty grad asks for the value only.
using ValueGradient = std::function<double(std::span<const double> x, std::span<double> grad)>;
/// Called after every accepted step; may modify x (then return Restart).
using IterateHook = std::function<HookAction(int iteration, std::vector<double>& x, double value,
                                             double gradient_sup)>;

MinimizeResult minimize(const ValueGradient& objective, std::vector<double> x0,
                        const StiffnessPreconditioner& preconditioner,
                        const MinimizeOptions& options, const IterateHook& hook = {});

// ---------------------------------------------------------------------------
// Rayleigh quotients and first eigenvalues.

struct EigenResult {
  double value = 0.0;
  RadialField field;
  int iterations = 0;
  double residual = 0.0;  // sup|∇Q| at the returned field (normalized ∫|u|^m = 1)
};

struct RayleighOptions {
  int max_iterations = 20000;
  double stall_tolerance = 1e-14;
};

/// min ∫|∇u|^m / ∫|u|^m over nonzero discrete fields: λ₁ for m = p, μ₁ for
/// m = q. Throws NonConvergence at the iteration cap.
EigenResult rayleigh_min(const MeshPtr& mesh, double m, RayleighOptions options = {});

/// Generalized quotient ∫|∇u|^m / (∫|u|^k)^{m/k} minimized over fields that
/// vanish on `fixed` nodes, from `init`.
struct QuotientResult {
  double value = 0.0;
  std::vector<double> values;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

QuotientResult minimize_quotient(const MeshPtr& mesh, double m, double k,
                                 std::vector<std::uint8_t> fixed, std::vector<double> init,
                                 RayleighOptions options = {});

// ---------------------------------------------------------------------------
// Best Sobolev constant.

struct SobolevOptions {
  double R = 1.0;
  double inner_ratio = 1e-8;  // annulus r_in / R for the direct minimization
  double mesh_ratio = 1.03;   // geometric cell ratio of the minimization mesh
  int max_iterations = 40000;
};

struct SobolevEstimate {
  double value = 0.0;         // the bubble estimate, used downstream
  double bubble = 0.0;        // extrapolated whole-space bubble quotient
  double minimization = 0.0;  // constrained minimization on B_R
  int iterations = 0;
};

SobolevEstimate sobolev_constant(int N, double p, SobolevOptions options = {});

/// Bubble-quotient route alone (cheap); R only fixes the truncation radius.
double sobolev_bubble_estimate(int N, double p, double R = 1.0);

// ---------------------------------------------------------------------------
// Descent towards critical points of E_ν.

struct DescentOptions {
  EnergyOptions energy{};
  StepPolicy policy{};
  double tolerance = 1e-8;     // weak-residual sup-norm
  int max_iterations = 100000;
  double zero_floor = 1e-10;   // sup|u| below this with E ≥ 0 snaps to u = 0
  double divergence_bound = 1e8;  // stop once sup|u| or -E exceeds this
  int trace_every = 100;
  /// Observer called on iterates every `trace_every` iterations and at the end.
  std::function<void(int iteration, const RadialField& u)> observer;
};

struct DescentTrace {
  int iteration = 0;
  double energy = 0.0;
  double residual = 0.0;
  double sup_norm = 0.0;
};

struct DescentResult {
  RadialField field;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<DescentTrace> trace;
};

DescentResult descent(const core::ProblemSpec& spec, const RadialField& init,
                      const DescentOptions& options = {});

}  // namespace pqlab::radial
