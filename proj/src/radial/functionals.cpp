#include <cmath>
#include <vector>

#include "pqlab/error.hpp"
#include "pqlab/radial.hpp"
#include "pqlab/simd.hpp"

namespace pqlab::radial {

namespace {

std::vector<double> cell_slopes(const RadialField& u) {
  const RadialMesh& mesh = u.mesh();
  std::vector<double> d(mesh.cells());
  simd::slopes(u.values(), mesh.inverse_widths(), d);
  return d;
}

void check_same_mesh(const RadialField& u, std::span<double> grad) {
  require(grad.size() == u.mesh().size(), ErrorKind::Precondition,
          "gradient buffer does not match the mesh");
}

}  // namespace

double gradient_integral(const RadialField& u, double m) {
  const RadialMesh& mesh = u.mesh();
  std::vector<double> d = cell_slopes(u);
  for (double& x : d) x = std::pow(std::abs(x), m);
  return simd::dot(d, mesh.cell_weights());
}

double power_integral(const RadialField& u, double k) {
  const RadialMesh& mesh = u.mesh();
  std::vector<double> v(mesh.cells());
  double total = 0.0;
  for (int g = 0; g < RadialMesh::kPotentialOrder; ++g) {
    simd::lerp(u.values(), mesh.gauss_lambda(g), v);
    for (double& x : v) x = std::pow(std::abs(x), k);
    total += simd::dot(v, mesh.gauss_weights(g));
  }
  return total;
}

void add_gradient_integral_derivative(const RadialField& u, double m, double coef,
                                      std::span<double> grad) {
  check_same_mesh(u, grad);
  const RadialMesh& mesh = u.mesh();
  const std::vector<double> d = cell_slopes(u);
  const auto w = mesh.cell_weights();
  const auto inv_h = mesh.inverse_widths();
  constexpr double eta2 = kModulusRegularization * kModulusRegularization;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double flux = m * std::pow(d[i] * d[i] + eta2, 0.5 * (m - 2.0)) * d[i];
    const double c = coef * w[i] * flux * inv_h[i];
    grad[i] -= c;
    grad[i + 1] += c;
  }
}

void add_power_integral_derivative(const RadialField& u, double k, double coef,
                                   std::span<double> grad) {
  check_same_mesh(u, grad);
  const RadialMesh& mesh = u.mesh();
  std::vector<double> v(mesh.cells());
  for (int g = 0; g < RadialMesh::kPotentialOrder; ++g) {
    const double lambda = mesh.gauss_lambda(g);
    const auto w = mesh.gauss_weights(g);
    simd::lerp(u.values(), lambda, v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0.0) continue;
      const double a = coef * w[i] * k * std::copysign(std::pow(std::abs(v[i]), k - 1.0), v[i]);
      grad[i] += a * (1.0 - lambda);
      grad[i + 1] += a * lambda;
    }
  }
}

double energy(const core::ProblemSpec& spec, const RadialField& u, EnergyOptions options) {
  double e = gradient_integral(u, spec.p) / spec.p;
  if (spec.nu != 0.0) e += spec.nu * gradient_integral(u, spec.q) / spec.q;
  if (spec.b != 0.0) e -= spec.b * power_integral(u, spec.s) / spec.s;
  if (spec.mu != 0.0) e -= spec.mu * power_integral(u, spec.q) / spec.q;
  if (options.critical_term) {
    const double ps = spec.critical();
    e -= power_integral(u, ps) / ps;
  }
  return e;
}

RadialField energy_gradient(const core::ProblemSpec& spec, const RadialField& u,
                            EnergyOptions options) {
  std::vector<double> g(u.mesh().size(), 0.0);
  add_gradient_integral_derivative(u, spec.p, 1.0 / spec.p, g);
  if (spec.nu != 0.0) add_gradient_integral_derivative(u, spec.q, spec.nu / spec.q, g);
  if (spec.b != 0.0) add_power_integral_derivative(u, spec.s, -spec.b / spec.s, g);
  if (spec.mu != 0.0) add_power_integral_derivative(u, spec.q, -spec.mu / spec.q, g);
  if (options.critical_term) {
    const double ps = spec.critical();
    add_power_integral_derivative(u, ps, -1.0 / ps, g);
  }
  return RadialField(u.mesh_ptr(), std::move(g));
}

}  // namespace pqlab::radial
