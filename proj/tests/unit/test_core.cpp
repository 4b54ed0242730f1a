#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pqlab/core.hpp"
#include "pqlab/error.hpp"

using namespace pqlab;
using core::CaseTag;
using core::ProblemSpec;

namespace {

ProblemSpec make(int N, double p, double q, double s) {
  ProblemSpec spec;
  spec.N = N;
  spec.p = p;
  spec.q = q;
  spec.s = s;
  return spec;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::ConfigError;
}

}  // namespace

TEST(ValidateSpec, ExponentOrder) {
  EXPECT_EQ(kind_of([] { core::validate_spec(make(3, 2.0, 2.0, 3.0)); }), ErrorKind::ExponentOrder);
  EXPECT_EQ(kind_of([] { core::validate_spec(make(3, 3.0, 1.5, 3.0)); }), ErrorKind::ExponentOrder);
  EXPECT_EQ(kind_of([] { core::validate_spec(make(3, 2.0, 1.0, 3.0)); }), ErrorKind::ExponentOrder);
}

TEST(ValidateSpec, RangeChecks) {
  EXPECT_EQ(kind_of([] { core::validate_spec(make(3, 2.0, 1.5, 6.0)); }), ErrorKind::OutOfRange);
  EXPECT_EQ(kind_of([] { core::validate_spec(make(3, 2.0, 1.5, 1.0)); }), ErrorKind::OutOfRange);
  ProblemSpec spec = make(3, 2.0, 1.5, 3.0);
  spec.rho = 2.0;
  EXPECT_EQ(kind_of([&] { core::validate_spec(spec); }), ErrorKind::OutOfRange);
  spec.rho = 1.0;
  spec.mu = -1.0;
  EXPECT_EQ(kind_of([&] { core::validate_spec(spec); }), ErrorKind::OutOfRange);
  EXPECT_NO_THROW(core::validate_spec(make(3, 2.0, 1.5, 1.2)));
}

TEST(Exponents, CriticalAndThresholds) {
  EXPECT_DOUBLE_EQ(core::critical_exponent(3, 2.0), 6.0);
  EXPECT_DOUBLE_EQ(core::critical_exponent(4, 2.0), 4.0);
  EXPECT_DOUBLE_EQ(core::q_regime_boundary(3, 2.0), 1.5);
  EXPECT_DOUBLE_EQ(core::s_regime_boundary(3, 2.0), 3.0);
  EXPECT_DOUBLE_EQ(core::case_i_s_threshold(3, 2.0), 4.5);
  EXPECT_DOUBLE_EQ(core::case_ii_s_threshold(4, 2.0, 1.5), 3.0);
  EXPECT_DOUBLE_EQ(core::perturbed_s_threshold(3, 2.0), 4.0);
}

TEST(Exponents, ThresholdEnergyClosedForm) {
  const double S = oracle::sobolev_constant(3, 2.0);
  EXPECT_NEAR(S, 3.0 * std::pow(std::numbers::pi / 2.0, 4.0 / 3.0), 1e-12);
  EXPECT_NEAR(core::threshold_energy(S, 3, 2.0), std::pow(S, 1.5) / 3.0, 1e-14);
  EXPECT_EQ(kind_of([] { core::threshold_energy(0.0, 3, 2.0); }), ErrorKind::OutOfRange);
}

TEST(Classify, FixedBoundariesAreStrict) {
  // N = 3, p = 2, q = 1.2 < 3/2: case (i), s > 4.5.
  EXPECT_FALSE(core::classify_existence_fixed(make(3, 2.0, 1.2, 4.5)).admissible);
  const auto v = core::classify_existence_fixed(make(3, 2.0, 1.2, 4.6));
  EXPECT_TRUE(v.admissible);
  EXPECT_EQ(v.case_tag, CaseTag::CaseI);
  // q = 1.8: case (ii), s > Nq/(N-p) = 5.4.
  EXPECT_FALSE(core::classify_existence_fixed(make(3, 2.0, 1.8, 5.4)).admissible);
  EXPECT_EQ(core::classify_existence_fixed(make(3, 2.0, 1.8, 5.5)).case_tag, CaseTag::CaseII);
}

TEST(Classify, CombinedMatchesPiecewiseOnRandomTuples) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const int N = 2 + static_cast<int>(u(rng) * 8);
    const double p = 1.0 + (N - 1.0) * (0.02 + 0.96 * u(rng));
    const double q = 1.0 + (p - 1.0) * (0.02 + 0.96 * u(rng));
    const double ps = N * p / (N - p);
    const double s = 1.0 + (ps - 1.0) * (0.01 + 0.98 * u(rng));
    const auto a = core::classify_existence_fixed(make(N, p, q, s));
    const auto b = core::classify_existence_combined(make(N, p, q, s));
    ASSERT_EQ(a.admissible, b.admissible);
    if (a.admissible) ASSERT_EQ(a.case_tag, b.case_tag);
  }
}

TEST(Classify, PerturbedWholeBandWhenNAtLeastP2) {
  // N ≥ p²: every q < s < p* is admissible.
  for (double s : {1.6, 2.0, 3.0, 3.9}) {
    const auto v = core::classify_existence_perturbed(make(4, 2.0, 1.5, s));
    EXPECT_TRUE(v.admissible) << s;
    EXPECT_EQ(v.case_tag, CaseTag::PerturbedI);
  }
  EXPECT_FALSE(core::classify_existence_perturbed(make(4, 2.0, 1.5, 1.4)).admissible);
}

TEST(Classify, PerturbedBelowP2) {
  // N = 3 < p² = 4: q < s < p, or threshold (Np-2N+p)p/((N-p)(p-1)) = 4 < s < 6.
  EXPECT_TRUE(core::classify_existence_perturbed(make(3, 2.0, 1.5, 1.8)).admissible);
  EXPECT_FALSE(core::classify_existence_perturbed(make(3, 2.0, 1.5, 3.0)).admissible);
  EXPECT_FALSE(core::classify_existence_perturbed(make(3, 2.0, 1.5, 4.0)).admissible);
  EXPECT_TRUE(core::classify_existence_perturbed(make(3, 2.0, 1.5, 4.5)).admissible);
}

TEST(KappaWindow, FeasibilityTracksCaseI) {
  EXPECT_TRUE(core::kappa_window(3, 2.0, 1.2, 5.0).feasible);
  EXPECT_NEAR(core::kappa_window(3, 2.0, 1.2, 5.0).midpoint(), 0.25, 1e-12);
  EXPECT_FALSE(core::kappa_window(3, 2.0, 1.2, 4.0).feasible);
  EXPECT_EQ(kind_of([] { core::kappa_window(3, 2.0, 1.6, 5.0); }), ErrorKind::Precondition);
}

TEST(MuBound, Formula) {
  EXPECT_NEAR(core::mu_nonexistence_bound(3, 2.0, 1.5, 6.0), 3 * 0.5 * 6.0 / (1.5 + 3.0), 1e-14);
}
