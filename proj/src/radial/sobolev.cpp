#include <cmath>
#include <numbers>
#include <string>

#include "pqlab/bubble.hpp"
#include "pqlab/core.hpp"
#include "pqlab/error.hpp"
#include "pqlab/radial.hpp"

namespace pqlab::radial {

namespace {

// Quotient of the whole-space bubble truncated at R with R/ε = ratio.
double truncated_quotient(int N, double p, double R, double ratio) {
  const double ps = core::critical_exponent(N, p);
  const bubble::BubbleParams params = bubble::make_bubble(
      N, p, R / ratio, 1.0, bubble::CutoffProfile(R, bubble::CutoffKind::Truncation));
  const double G = bubble::raw_gradient_integral(params, p);
  const double P = bubble::raw_power_integral(params, ps);
  return G / std::pow(P, p / ps);
}

void check_exponents(int N, double p) {
  require(N >= 2 && N <= 10, ErrorKind::OutOfRange, "dimension must be in [2, 10]");
  require(p > 1.0 && p < N, ErrorKind::ExponentOrder, "sobolev_constant needs 1 < p < N");
}

}  // namespace

double sobolev_bubble_estimate(int N, double p, double R) {
  check_exponents(N, p);
  require(std::isfinite(R) && R > 0.0, ErrorKind::OutOfRange, "radius must be > 0");
  // The truncation error decays like (ε/R)^{(N-p)/(p-1)}; one Richardson step
  // per decade removes it.
  const double alpha = (N - p) / (p - 1.0);
  const double factor = std::pow(10.0, alpha);
  constexpr double kRatios[] = {1e4, 1e5, 1e6, 1e7};
  double q[4];
  for (int i = 0; i < 4; ++i) q[i] = truncated_quotient(N, p, R, kRatios[i]);
  const double e1 = (factor * q[2] - q[1]) / (factor - 1.0);
  const double e2 = (factor * q[3] - q[2]) / (factor - 1.0);
  if (!(std::abs(e2 - e1) <= 1e-8 * std::abs(e2))) {
    fail(ErrorKind::NonConvergence,
         "bubble quotient extrapolation did not settle: " + std::to_string(e1) + " vs " +
             std::to_string(e2));
  }
  return e2;
}

SobolevEstimate sobolev_constant(int N, double p, SobolevOptions options) {
  check_exponents(N, p);
  SobolevEstimate out;
  out.bubble = sobolev_bubble_estimate(N, p, options.R);
  out.value = out.bubble;

  // Direct minimization on the annulus r_in < r < R: the infimum over the
  // annulus is attained and exceeds S by a term that vanishes with r_in / R.
  const double R = options.R;
  const double r_in = R * options.inner_ratio;
  const MeshPtr mesh = build_geometric_mesh(N, R, r_in, options.mesh_ratio);
  std::vector<std::uint8_t> fixed(mesh->size(), 0);
  fixed[0] = 1;
  fixed[1] = 1;
  const double t0 = std::log(r_in);
  const double t1 = std::log(R);
  const double decay = (N - p) / p;
  std::vector<double> init(mesh->size(), 0.0);
  for (std::size_t i = 2; i + 1 < mesh->size(); ++i) {
    const double r = mesh->nodes()[i];
    const double t = (std::log(r) - t0) / (t1 - t0);
    init[i] = std::sin(std::numbers::pi * t) * std::pow(r, -decay);
  }
  RayleighOptions ro;
  ro.max_iterations = options.max_iterations;
  ro.stall_tolerance = 1e-13;
  const QuotientResult q =
      minimize_quotient(mesh, p, core::critical_exponent(N, p), fixed, init, ro);
  if (!q.converged) {
    fail(ErrorKind::NonConvergence, "Sobolev quotient minimization hit the iteration cap");
  }
  out.minimization = q.value;
  out.iterations = q.iterations;
  return out;
}

}  // namespace pqlab::radial
