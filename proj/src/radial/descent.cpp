#include <cmath>
#include <utility>

#include "pqlab/error.hpp"
#include "pqlab/radial.hpp"
#include "pqlab/simd.hpp"

namespace pqlab::radial {

DescentResult descent(const core::ProblemSpec& spec, const RadialField& init,
                      const DescentOptions& options) {
  const core::ProblemSpec checked = core::validate_spec(spec);
  const MeshPtr& mesh = init.mesh_ptr();
  const StiffnessPreconditioner pre(*mesh, {});

  const ValueGradient objective = [&](std::span<const double> x, std::span<double> grad) {
    const RadialField u(mesh, std::vector<double>(x.begin(), x.end()));
    if (!grad.empty()) {
      const RadialField g = energy_gradient(checked, u, options.energy);
      const auto gv = g.values();
      std::copy(gv.begin(), gv.end(), grad.begin());
    }
    return energy(checked, u, options.energy);
  };

  DescentResult out{init, false, false, 0, 0.0, {}};
  auto record = [&](int iteration, const std::vector<double>& x, double value, double residual) {
    const RadialField u(mesh, x);
    out.trace.push_back({iteration, value, residual, u.sup_norm()});
    if (options.observer) options.observer(iteration, u);
  };

  const IterateHook hook = [&](int iteration, std::vector<double>& x, double value,
                               double residual) {
    const double sup = simd::max_abs(x);
    if (!std::isfinite(value) || sup > options.divergence_bound ||
        value < -options.divergence_bound) {
      out.diverged = true;
      record(iteration, x, value, residual);
      return HookAction::Stop;
    }
    if (options.trace_every > 0 && iteration % options.trace_every == 0) {
      record(iteration, x, value, residual);
    }
    if (sup > 0.0 && sup < options.zero_floor && value >= 0.0) {
      std::fill(x.begin(), x.end(), 0.0);
      return HookAction::Restart;
    }
    return HookAction::Continue;
  };

  MinimizeOptions mo;
  mo.policy = options.policy;
  mo.max_iterations = options.max_iterations;
  mo.gradient_tolerance = options.tolerance;
  mo.stall_tolerance = 0.0;

  std::vector<double> x0(init.values().begin(), init.values().end());
  MinimizeResult res = minimize(objective, std::move(x0), pre, mo, hook);

  out.field = RadialField(mesh, res.x);
  out.iterations = res.iterations;
  out.residual = res.gradient_sup;
  out.converged = !out.diverged && res.gradient_sup < options.tolerance;
  if (!out.diverged) record(res.iterations, res.x, res.value, res.gradient_sup);
  return out;
}

}  // namespace pqlab::radial
