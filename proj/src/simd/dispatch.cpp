#include <atomic>
#include <cstdlib>
#include <string>

#include "pqlab/error.hpp"
#include "pqlab/simd.hpp"

namespace pqlab::simd {

namespace {

const KernelTable& table_for(Isa isa) {
  switch (isa) {
#if defined(PQLAB_HAVE_AVX2)
    case Isa::Avx2: return avx2_kernels();
#endif
#if defined(PQLAB_HAVE_NEON)
    case Isa::Neon: return neon_kernels();
#endif
    default: return scalar_kernels();
  }
}

Isa detect() {
  if (const char* env = std::getenv("PQLAB_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
    if (want == "neon" && isa_available(Isa::Neon)) return Isa::Neon;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

std::atomic<const KernelTable*> active_table{nullptr};
std::atomic<Isa> active{Isa::Scalar};

const KernelTable& ensure() {
  const KernelTable* t = active_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    const Isa isa = detect();
    active.store(isa, std::memory_order_relaxed);
    t = &table_for(isa);
    active_table.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(PQLAB_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(PQLAB_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  ensure();
  return active.load(std::memory_order_relaxed);
}

void set_isa(Isa isa) {
  require(isa_available(isa), ErrorKind::OutOfRange,
          "SIMD variant not available: " + std::string(to_string(isa)));
  active.store(isa, std::memory_order_relaxed);
  active_table.store(&table_for(isa), std::memory_order_release);
}

const KernelTable& kernels() { return ensure(); }

double dot(std::span<const double> x, std::span<const double> y) {
  return kernels().dot(x.data(), y.data(), x.size());
}

double sum(std::span<const double> x) { return kernels().sum(x.data(), x.size()); }

double max_abs(std::span<const double> x) { return kernels().max_abs(x.data(), x.size()); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  kernels().axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) { kernels().scale(a, x.data(), x.size()); }

void slopes(std::span<const double> u, std::span<const double> inv_h, std::span<double> out) {
  kernels().slopes(u.data(), inv_h.data(), out.data(), out.size());
}

void lerp(std::span<const double> u, double t, std::span<double> out) {
  kernels().lerp(u.data(), t, out.data(), out.size());
}

}  // namespace pqlab::simd
