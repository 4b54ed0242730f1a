#pragma once

// Shared test procedures built on the library API.

#include <cmath>
#include <random>
#include <vector>

#include "pqlab/radial.hpp"

namespace checks {

/// Random positive, strictly decreasing radial profile vanishing at R:
/// a Σ w_k (1 - (r/R)^{2k}). Slopes stay away from 0 inside the ball, so
/// the |∇u|^q and |u|^q terms are smooth along short lines through u.
inline pqlab::radial::RadialField random_profile_field(const pqlab::radial::MeshPtr& mesh,
                                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double R = mesh->radius();
  const double a = 0.5 + u(rng);
  double w[4];
  for (double& x : w) x = 0.1 + u(rng);
  return pqlab::radial::RadialField::interpolate(mesh, [=](double r) {
    const double x2 = (r / R) * (r / R);
    double v = 0.0;
    double xk = 1.0;
    for (double wk : w) {
      xk *= x2;
      v += wk * (1.0 - xk);
    }
    return a * v;
  });
}

/// Random smooth even direction vanishing at R.
inline pqlab::radial::RadialField random_direction(const pqlab::radial::MeshPtr& mesh,
                                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double R = mesh->radius();
  const double c1 = 0.5 * u(rng);
  const double c2 = 0.5 * u(rng);
  const double c3 = 0.3 * u(rng);
  const double k = 2.0 + 2.0 * (u(rng) + 1.0);
  return pqlab::radial::RadialField::interpolate(mesh, [=](double r) {
    const double x = r / R;
    return (1.0 - x * x) * (c1 + c2 * x * x + c3 * std::cos(k * x));
  });
}

struct GradientCheck {
  double error_coarse = 0.0;
  double error_fine = 0.0;
  double order = 0.0;
};

/// Compares the weak residual paired with a direction d against central
/// differences of the energy at steps h and h/2.
inline GradientCheck gradient_consistency(const pqlab::core::ProblemSpec& spec,
                                          const pqlab::radial::RadialField& u,
                                          const pqlab::radial::RadialField& d, double h) {
  using pqlab::radial::RadialField;
  const auto g = pqlab::radial::energy_gradient(spec, u);
  double exact = 0.0;
  for (std::size_t i = 0; i < g.values().size(); ++i) exact += g.values()[i] * d.values()[i];
  auto central = [&](double step) {
    std::vector<double> plus(u.values().begin(), u.values().end());
    std::vector<double> minus = plus;
    for (std::size_t i = 0; i < plus.size(); ++i) {
      plus[i] += step * d.values()[i];
      minus[i] -= step * d.values()[i];
    }
    const RadialField up(u.mesh_ptr(), plus);
    const RadialField um(u.mesh_ptr(), minus);
    return (pqlab::radial::energy(spec, up) - pqlab::radial::energy(spec, um)) / (2.0 * step);
  };
  GradientCheck out;
  out.error_coarse = std::abs(central(h) - exact);
  out.error_fine = std::abs(central(0.5 * h) - exact);
  out.order = std::log2(out.error_coarse / out.error_fine);
  return out;
}

}  // namespace checks
