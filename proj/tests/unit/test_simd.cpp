#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "pqlab/error.hpp"
#include "pqlab/simd.hpp"

using namespace pqlab;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

void expect_equivalent(const simd::KernelTable& ref, const simd::KernelTable& alt) {
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 17u, 1000u, 1023u}) {
    const auto x = random_vector(n + 1, n + 1);
    const auto y = random_vector(n + 1, n + 100);
    const auto inv = random_vector(n, n + 200);
    const double scale = 1e-13 * (static_cast<double>(n) + 1.0);
    EXPECT_NEAR(ref.dot(x.data(), y.data(), n), alt.dot(x.data(), y.data(), n), scale);
    EXPECT_NEAR(ref.sum(x.data(), n), alt.sum(x.data(), n), scale);
    EXPECT_EQ(ref.max_abs(x.data(), n), alt.max_abs(x.data(), n));

    auto y1 = y, y2 = y;
    ref.axpy(0.3, x.data(), y1.data(), n);
    alt.axpy(0.3, x.data(), y2.data(), n);
    EXPECT_EQ(y1, y2);
    auto x1 = x, x2 = x;
    ref.scale(-1.7, x1.data(), n);
    alt.scale(-1.7, x2.data(), n);
    EXPECT_EQ(x1, x2);
    std::vector<double> o1(n), o2(n);
    ref.slopes(x.data(), inv.data(), o1.data(), n);
    alt.slopes(x.data(), inv.data(), o2.data(), n);
    EXPECT_EQ(o1, o2);
    ref.lerp(x.data(), 0.37, o1.data(), n);
    alt.lerp(x.data(), 0.37, o2.data(), n);
    EXPECT_EQ(o1, o2);
  }
}

}  // namespace

TEST(Simd, ScalarAlwaysAvailable) {
  EXPECT_TRUE(simd::isa_available(simd::Isa::Scalar));
  EXPECT_FALSE(simd::to_string(simd::active_isa()).empty());
}

TEST(Simd, ScalarKernelValues) {
  const std::vector<double> x = {1.0, -2.0, 3.0};
  const std::vector<double> y = {4.0, 5.0, -6.0};
  const auto& k = simd::scalar_kernels();
  EXPECT_EQ(k.dot(x.data(), y.data(), 3), 4.0 - 10.0 - 18.0);
  EXPECT_EQ(k.sum(x.data(), 3), 2.0);
  EXPECT_EQ(k.max_abs(x.data(), 3), 3.0);
}

#if defined(PQLAB_HAVE_AVX2)
TEST(Simd, Avx2MatchesScalar) {
  if (!simd::isa_available(simd::Isa::Avx2)) GTEST_SKIP() << "CPU lacks AVX2";
  expect_equivalent(simd::scalar_kernels(), simd::avx2_kernels());
}
#endif

#if defined(PQLAB_HAVE_NEON)
TEST(Simd, NeonMatchesScalar) {
  expect_equivalent(simd::scalar_kernels(), simd::neon_kernels());
}
#endif

TEST(Simd, SetIsaRoundTrip) {
  const simd::Isa before = simd::active_isa();
  simd::set_isa(simd::Isa::Scalar);
  EXPECT_EQ(simd::active_isa(), simd::Isa::Scalar);
  simd::set_isa(before);
  if (!simd::isa_available(simd::Isa::Neon)) {
    EXPECT_THROW(simd::set_isa(simd::Isa::Neon), Error);
  }
}
