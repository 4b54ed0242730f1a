#include <algorithm>
#include <cmath>
#include <utility>

#include "pqlab/error.hpp"
#include "pqlab/quadrature.hpp"
#include "pqlab/radial.hpp"
#include "pqlab/simd.hpp"

namespace pqlab::radial {

RadialMesh::RadialMesh(int N, std::vector<double> nodes) : N_(N), nodes_(std::move(nodes)) {
  require(N >= 2 && N <= 10, ErrorKind::OutOfRange, "mesh dimension must be in [2, 10]");
  require(nodes_.size() >= 3, ErrorKind::OutOfRange, "mesh needs at least two cells");
  require(nodes_.front() == 0.0, ErrorKind::OutOfRange, "mesh must start at r = 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    require(nodes_[i] > nodes_[i - 1], ErrorKind::OutOfRange, "mesh nodes must increase");
  }
  const double sphere = quad::unit_sphere_measure(N);
  const std::size_t n = cells();
  cell_weights_.resize(n);
  inv_h_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = nodes_[i];
    const double b = nodes_[i + 1];
    cell_weights_[i] = sphere * (std::pow(b, N) - std::pow(a, N)) / N;
    inv_h_[i] = 1.0 / (b - a);
  }
  const quad::GaussRule& rule = quad::gauss_legendre(kPotentialOrder);
  lambda_.resize(kPotentialOrder);
  gauss_weights_.assign(kPotentialOrder, std::vector<double>(n));
  for (int k = 0; k < kPotentialOrder; ++k) {
    lambda_[k] = 0.5 * (rule.nodes[k] + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double h = nodes_[i + 1] - nodes_[i];
      const double r = nodes_[i] + lambda_[k] * h;
      gauss_weights_[k][i] = 0.5 * h * rule.weights[k] * sphere * std::pow(r, N - 1);
    }
  }
}

MeshPtr build_mesh(int N, double R, int n, double grading) {
  require(std::isfinite(R) && R > 0.0, ErrorKind::OutOfRange, "mesh radius must be > 0");
  require(n >= 16, ErrorKind::OutOfRange, "mesh needs n >= 16 cells");
  require(std::isfinite(grading) && grading >= 1.0, ErrorKind::OutOfRange,
          "mesh grading must be >= 1");
  std::vector<double> nodes(n + 1);
  for (int i = 0; i <= n; ++i) {
    nodes[i] = R * std::pow(static_cast<double>(i) / n, grading);
  }
  nodes[n] = R;
  return std::make_shared<const RadialMesh>(N, std::move(nodes));
}

MeshPtr build_geometric_mesh(int N, double R, double r_min, double ratio) {
  require(std::isfinite(R) && R > 0.0, ErrorKind::OutOfRange, "mesh radius must be > 0");
  require(r_min > 0.0 && r_min < R, ErrorKind::OutOfRange, "inner radius must be in (0, R)");
  require(ratio > 1.0, ErrorKind::OutOfRange, "geometric ratio must be > 1");
  const int cells = std::max(16, static_cast<int>(std::ceil(std::log(R / r_min) / std::log(ratio))));
  std::vector<double> nodes(cells + 2);
  nodes[0] = 0.0;
  const double step = std::log(R / r_min) / cells;
  for (int i = 0; i <= cells; ++i) nodes[i + 1] = r_min * std::exp(step * i);
  nodes.back() = R;
  return std::make_shared<const RadialMesh>(N, std::move(nodes));
}

RadialField::RadialField(MeshPtr mesh) : mesh_(std::move(mesh)) {
  require(mesh_ != nullptr, ErrorKind::Precondition, "field needs a mesh");
  values_.assign(mesh_->size(), 0.0);
}

RadialField::RadialField(MeshPtr mesh, std::vector<double> values) : mesh_(std::move(mesh)) {
  require(mesh_ != nullptr, ErrorKind::Precondition, "field needs a mesh");
  assign(std::move(values));
}

RadialField RadialField::interpolate(MeshPtr mesh, const std::function<double(double)>& profile) {
  std::vector<double> values(mesh->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = profile(mesh->nodes()[i]);
  return RadialField(std::move(mesh), std::move(values));
}

void RadialField::assign(std::vector<double> values) {
  require(values.size() == mesh_->size(), ErrorKind::Precondition,
          "field size does not match the mesh");
  values.back() = 0.0;
  values_ = std::move(values);
}

double RadialField::sup_norm() const { return simd::max_abs(values_); }

}  // namespace pqlab::radial
