#include <cmath>

#include "pqlab/simd.hpp"

namespace pqlab::simd {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = a * x[i];
}

void slopes_scalar(const double* u, const double* inv_h, double* out, std::size_t cells) {
  for (std::size_t i = 0; i < cells; ++i) out[i] = (u[i + 1] - u[i]) * inv_h[i];
}

void lerp_scalar(const double* u, double t, double* out, std::size_t cells) {
  const double s = 1.0 - t;
  for (std::size_t i = 0; i < cells; ++i) out[i] = s * u[i] + t * u[i + 1];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{dot_scalar,  sum_scalar,    max_abs_scalar, axpy_scalar,
                                 scale_scalar, slopes_scalar, lerp_scalar};
  return table;
}

}  // namespace pqlab::simd
