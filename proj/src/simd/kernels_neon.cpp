#include <arm_neon.h>

#include <cmath>

#include "pqlab/simd.hpp"

namespace pqlab::simd {

namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  const float64x2_t acc = vaddq_f64(acc0, acc1);
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
  }
  const float64x2_t acc = vaddq_f64(acc0, acc1);
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) r += x[i];
  return r;
}

double max_abs_neon(const double* x, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double r = std::fmax(vgetq_lane_f64(m, 0), vgetq_lane_f64(m, 1));
  for (; i < n; ++i) r = std::fmax(r, std::fabs(x[i]));
  return r;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale_neon(double a, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] = a * x[i];
}

void slopes_neon(const double* u, const double* inv_h, double* out, std::size_t cells) {
  std::size_t i = 0;
  for (; i + 2 <= cells; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(u + i + 1), vld1q_f64(u + i));
    vst1q_f64(out + i, vmulq_f64(d, vld1q_f64(inv_h + i)));
  }
  for (; i < cells; ++i) out[i] = (u[i + 1] - u[i]) * inv_h[i];
}

void lerp_neon(const double* u, double t, double* out, std::size_t cells) {
  const double s = 1.0 - t;
  const float64x2_t vs = vdupq_n_f64(s);
  const float64x2_t vt = vdupq_n_f64(t);
  std::size_t i = 0;
  for (; i + 2 <= cells; i += 2) {
    const float64x2_t lo = vmulq_f64(vs, vld1q_f64(u + i));
    const float64x2_t hi = vmulq_f64(vt, vld1q_f64(u + i + 1));
    vst1q_f64(out + i, vaddq_f64(lo, hi));
  }
  for (; i < cells; ++i) out[i] = s * u[i] + t * u[i + 1];
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{dot_neon,  sum_neon,    max_abs_neon, axpy_neon,
                                 scale_neon, slopes_neon, lerp_neon};
  return table;
}

}  // namespace pqlab::simd
