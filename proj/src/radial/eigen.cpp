#include <cmath>
#include <utility>

#include "pqlab/error.hpp"
#include "pqlab/radial.hpp"
#include "pqlab/simd.hpp"

namespace pqlab::radial {

QuotientResult minimize_quotient(const MeshPtr& mesh, double m, double k,
                                 std::vector<std::uint8_t> fixed, std::vector<double> init,
                                 RayleighOptions options) {
  require(m > 1.0 && k > 1.0, ErrorKind::OutOfRange, "quotient exponents must exceed 1");
  require(init.size() == mesh->size(), ErrorKind::Precondition, "initial field size mismatch");
  if (fixed.empty()) fixed.assign(mesh->size(), 0);
  for (std::size_t i = 0; i < init.size(); ++i) {
    if (fixed[i]) init[i] = 0.0;
  }
  const StiffnessPreconditioner pre(*mesh, fixed);

  auto normalize = [&](std::vector<double>& x) {
    const double P = power_integral(RadialField(mesh, x), k);
    require(P > 0.0 && std::isfinite(P), ErrorKind::Precondition,
            "quotient needs a nonzero field");
    simd::scale(std::pow(P, -1.0 / k), x);
  };
  normalize(init);

  const ValueGradient objective = [&](std::span<const double> x, std::span<double> grad) {
    const RadialField u(mesh, std::vector<double>(x.begin(), x.end()));
    const double G = gradient_integral(u, m);
    const double P = power_integral(u, k);
    const double denom = std::pow(P, m / k);
    if (!grad.empty()) {
      add_gradient_integral_derivative(u, m, 1.0 / denom, grad);
      add_power_integral_derivative(u, k, -(m / k) * G / (P * denom), grad);
    }
    return G / denom;
  };
  const IterateHook hook = [&](int, std::vector<double>& x, double, double) {
    const double P = power_integral(RadialField(mesh, x), k);
    if (P < 0.25 || P > 4.0) {
      normalize(x);
      return HookAction::Restart;
    }
    return HookAction::Continue;
  };

  MinimizeOptions mo;
  mo.max_iterations = options.max_iterations;
  mo.stall_tolerance = options.stall_tolerance;
  MinimizeResult res = minimize(objective, std::move(init), pre, mo, hook);
  normalize(res.x);
  double total = 0.0;
  for (double v : res.x) total += v;
  if (total < 0.0) simd::scale(-1.0, res.x);

  std::vector<double> g(mesh->size(), 0.0);
  QuotientResult out;
  out.value = objective(res.x, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (pre.is_fixed(i)) g[i] = 0.0;
  }
  out.residual = simd::max_abs(g);
  out.values = std::move(res.x);
  out.iterations = res.iterations;
  out.converged = res.converged;
  return out;
}

EigenResult rayleigh_min(const MeshPtr& mesh, double m, RayleighOptions options) {
  require(mesh != nullptr, ErrorKind::Precondition, "rayleigh_min needs a mesh");
  const double R = mesh->radius();
  std::vector<double> init(mesh->size());
  for (std::size_t i = 0; i < init.size(); ++i) {
    const double x = mesh->nodes()[i] / R;
    init[i] = 1.0 - x * x;
  }
  QuotientResult q = minimize_quotient(mesh, m, m, {}, std::move(init), options);
  if (!q.converged) {
    fail(ErrorKind::NonConvergence,
         "Rayleigh quotient minimization hit the iteration cap (" +
             std::to_string(q.iterations) + ")");
  }
  EigenResult out{q.value, RadialField(mesh, std::move(q.values)), q.iterations, q.residual};
  return out;
}

}  // namespace pqlab::radial
