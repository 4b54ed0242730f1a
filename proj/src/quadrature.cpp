#include "pqlab/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "pqlab/error.hpp"
#include "pqlab/simd.hpp"

namespace pqlab::quad {

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Re-evaluate the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

// Γ(N/2) for integer N, by the half-integer recursion.
double gamma_half(int N) {
  double g = (N % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  for (int k = (N % 2 == 0) ? 2 : 1; k + 2 <= N; k += 2) g *= 0.5 * k;
  return g;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  require(order >= 1 && order <= 64, ErrorKind::OutOfRange, "Gauss order must be in [1, 64]");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double unit_sphere_measure(int N) {
  require(N >= 1 && N <= 10, ErrorKind::OutOfRange, "unit sphere measure supports 1 <= N <= 10");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / gamma_half(N);
}

double ball_volume(int N, double R) { return unit_sphere_measure(N) * std::pow(R, N) / N; }

double RadialRule::integrate(std::span<const double> values) const {
  return simd::dot(weights, values);
}

double RadialRule::integrate(const std::function<double(double)>& f) const {
  std::vector<double> values(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) values[i] = f(radii[i]);
  return integrate(values);
}

RadialRule radial_rule(int N, std::span<const double> edges, int order) {
  const GaussRule& g = gauss_legendre(order);
  const double sphere = unit_sphere_measure(N);
  RadialRule rule;
  const std::size_t cells = edges.size() - 1;
  rule.radii.reserve(cells * order);
  rule.weights.reserve(cells * order);
  for (std::size_t c = 0; c < cells; ++c) {
    const double a = edges[c];
    const double b = edges[c + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int k = 0; k < order; ++k) {
      const double r = mid + half * g.nodes[k];
      rule.radii.push_back(r);
      rule.weights.push_back(sphere * half * g.weights[k] * std::pow(r, N - 1));
    }
  }
  return rule;
}

std::vector<double> graded_edges(double inner, double knee, double top, double growth,
                                 int tail_cells) {
  require(inner > 0.0 && inner < knee && knee <= top && growth > 1.0 && tail_cells >= 0,
          ErrorKind::OutOfRange, "graded_edges: need 0 < inner < knee <= top, growth > 1");
  std::vector<double> edges{0.0};
  const int geometric = static_cast<int>(std::ceil(std::log(knee / inner) / std::log(growth)));
  const double ratio = std::pow(knee / inner, 1.0 / geometric);
  double r = inner;
  for (int i = 0; i < geometric; ++i) {
    edges.push_back(r);
    r *= ratio;
  }
  edges.push_back(knee);
  if (knee < top) {
    for (int i = 1; i <= tail_cells; ++i) edges.push_back(knee + (top - knee) * i / tail_cells);
    edges.back() = top;
  }
  return edges;
}

}  // namespace pqlab::quad
