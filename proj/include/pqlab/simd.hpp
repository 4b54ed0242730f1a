#pragma once

// Data-parallel inner loops of the radial quadratures and solvers.
//
// Each kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at first use from the CPU features; PQLAB_ISA=scalar|avx2|neon
// in the environment overrides the choice. Elementwise kernels are bit-exact
// across variants; reductions agree to rounding (different summation order).

#include <cstddef>
#include <span>
#include <string_view>

namespace pqlab::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

bool isa_available(Isa isa);
Isa active_isa();

/// Select a variant explicitly. Throws OutOfRange if it is not available.
void set_isa(Isa isa);

struct KernelTable {
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  void (*scale)(double a, double* x, std::size_t n);
  /// out[i] = (u[i+1] - u[i]) * inv_h[i] for i < cells.
  void (*slopes)(const double* u, const double* inv_h, double* out, std::size_t cells);
  /// out[i] = (1 - t) u[i] + t u[i+1] for i < cells.
  void (*lerp)(const double* u, double t, double* out, std::size_t cells);
};

const KernelTable& scalar_kernels();
const KernelTable& kernels();  // the active variant

#if defined(PQLAB_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(PQLAB_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
double max_abs(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
void slopes(std::span<const double> u, std::span<const double> inv_h, std::span<double> out);
void lerp(std::span<const double> u, double t, std::span<double> out);

}  // namespace pqlab::simd
