#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pqlab::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes computed by Newton iteration on P_n; cached per order.
const GaussRule& gauss_legendre(int order);

/// |S^{N-1}| = 2 π^{N/2} / Γ(N/2) for integer 1 ≤ N ≤ 10.
double unit_sphere_measure(int N);

/// Volume of the ball of radius R in R^N.
double ball_volume(int N, double R);

/// A composite radial rule: ∫_0^top f(r) |S^{N-1}| r^{N-1} dr ≈ Σ w_i f(r_i).
/// The sphere factor and r^{N-1} are folded into the weights.
struct RadialRule {
  std::vector<double> radii;
  std::vector<double> weights;

  double integrate(std::span<const double> values) const;
  double integrate(const std::function<double(double)>& f) const;
};

/// Rule on the breakpoints `edges` (ascending, starting at 0), with `order`
/// Gauss points per cell and the radial weight r^{N-1}|S^{N-1}| included.
RadialRule radial_rule(int N, std::span<const double> edges, int order);

/// Breakpoints clustered geometrically toward r = 0 around the scale `inner`,
/// with ratio `growth` between consecutive cells up to `knee`, then `tail_cells`
/// uniform cells on [knee, top].
std::vector<double> graded_edges(double inner, double knee, double top, double growth,
                                 int tail_cells);

}  // namespace pqlab::quad
