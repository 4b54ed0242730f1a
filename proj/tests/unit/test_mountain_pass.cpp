#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "pqlab/error.hpp"
#include "pqlab/mountain_pass.hpp"

using namespace pqlab;
using namespace pqlab::mountain_pass;

namespace {

core::ProblemSpec n4_spec() {
  core::ProblemSpec spec;
  spec.N = 4;
  spec.p = 2.0;
  spec.q = 1.5;
  spec.s = 3.5;
  spec.b = 1.0;
  spec.nu = 1.0;
  return spec;
}

}  // namespace

TEST(Fibering, ProfileDerivativeMatchesDifferences) {
  FiberingCoefficients c{2.0, 0.7, 0.4, 2.0, 1.5, 3.0, 6.0, 0.3, 1.0};
  for (double t : {0.1, 0.7, 1.3}) {
    const double h = 1e-6;
    const double fd = (fibering_profile(c, t + h).phi - fibering_profile(c, t - h).phi) / (2 * h);
    EXPECT_NEAR(fibering_profile(c, t).dphi, fd, 1e-7);
  }
  EXPECT_THROW(fibering_profile(c, -1.0), Error);
}

TEST(Fibering, MaxMatchesGridSearch) {
  for (const auto& c : {FiberingCoefficients{5.4, 1.2, 0.8, 2.0, 1.5, 3.0, 6.0, 0.5, 1.0},
                        FiberingCoefficients{10.3, 0.4, 2.0, 2.0, 1.2, 3.5, 4.0, 0.25, 1.0}}) {
    const auto got = fibering_max(c);
    const auto ref = oracle::grid_search_max(
        [&](double t) {
          return std::pow(t, c.p) / c.p * c.A + c.nu * std::pow(t, c.q) / c.q * c.B -
                 c.b * std::pow(t, c.s) * c.C - std::pow(t, c.pstar) / c.pstar;
        },
        1e-4, 1e2);
    EXPECT_NEAR(got.phi_max, ref.value, 1e-12 * std::abs(ref.value));
    EXPECT_NEAR(got.t_max, ref.t, 1e-6 * ref.t);
  }
}

TEST(Fibering, ClosedFormWithoutLowerOrderTerms) {
  for (int N : {3, 4}) {
    const double ps = 2.0 * N / (N - 2.0);
    const double A = oracle::sobolev_constant(N, 2.0);
    FiberingCoefficients c{A, 0.0, 1.0, 2.0, 1.5, 2.5, ps, 0.0, 0.0};
    const auto m = fibering_max(c);
    EXPECT_NEAR(m.t_max, std::pow(A, 1.0 / (ps - 2.0)), 1e-10 * m.t_max);
    EXPECT_NEAR(m.phi_max, std::pow(A, N / 2.0) / N, 1e-10 * m.phi_max);
    EXPECT_NEAR(m.phi_max, core::threshold_energy(A, N, 2.0), 1e-10 * m.phi_max);
  }
}

TEST(Fibering, LimitRoot) {
  EXPECT_NEAR(limit_root(4.0, 4, 2.0), std::sqrt(4.0), 1e-14);
  EXPECT_THROW(limit_root(-1.0, 4, 2.0), Error);
}

TEST(Level, SweepFlagsPositiveMarginForN4) {
  const auto res = epsilon_sweep(n4_spec(), kappa_schedule(default_eps_schedule(), 0.0));
  ASSERT_TRUE(res.conclusive());
  EXPECT_GT(res.rows[*res.first_flag].level.margin, 0.0);
  EXPECT_GT(res.rows.back().level.margin, 0.0);
  // t_max approaches t0 as the lower-order integrals vanish.
  const double t0 = limit_root(cached_sobolev(4, 2.0), 4, 2.0);
  const auto tail = epsilon_sweep(n4_spec(), kappa_schedule({1e-2, 1e-3, 1e-4, 1e-5}, 0.0));
  double prev = 1e300;
  for (const auto& row : tail.rows) {
    const double gap = std::abs(row.level.t_max / t0 - 1.0);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Level, PureCriticalRayReachesLimitRoot) {
  auto spec = n4_spec();
  spec.b = 0.0;
  spec.nu = 0.0;
  const double t0 = limit_root(cached_sobolev(4, 2.0), 4, 2.0);
  const auto params = bubble::normalize(bubble::make_bubble(4, 2.0, 1e-3, 1.0));
  EXPECT_LT(std::abs(level_upper_bound(spec, params).t_max / t0 - 1.0), 1e-5);
}

TEST(Level, SweepRejectsNonDecreasingSchedule) {
  EXPECT_THROW(epsilon_sweep(n4_spec(), {{1e-3, 1.0}, {1e-2, 1.0}}), Error);
  EXPECT_THROW(epsilon_sweep(n4_spec(), {}), Error);
}

TEST(Level, BubbleMustFitInsideRho) {
  auto spec = n4_spec();
  spec.rho = 0.5;
  const auto params = bubble::normalize(bubble::make_bubble(4, 2.0, 0.01, 1.0));
  EXPECT_THROW(level_upper_bound(spec, params), Error);
}

TEST(Level, QuotientDecayN4) {
  std::vector<double> eps;
  for (int k = 0; k <= 8; ++k) eps.push_back(std::pow(10.0, -6.0 + 0.25 * k));
  const auto d = quotient_decay(n4_spec(), 0.0, eps);
  EXPECT_LT(d.first_error, 0.05);
  EXPECT_LT(d.second_error, 0.05);
}

TEST(Level, PerturbedPredictionRegimes) {
  // N = 3, p = 2: boundary s = 3.
  EXPECT_TRUE(perturbed_prediction(3, 2.0, 3.0).inverse_log);
  EXPECT_NEAR(perturbed_prediction(3, 2.0, 3.0).exponent, -0.5, 1e-14);
  EXPECT_NEAR(perturbed_prediction(3, 2.0, 5.0).exponent, 0.5, 1e-14);
  EXPECT_NEAR(perturbed_prediction(3, 2.0, 2.0).exponent, 0.0, 1e-14);
}

TEST(Level, NuTransfer) {
  LevelEstimate level;
  level.margin = 0.2;
  EXPECT_NEAR(nu_transfer(level, 0.5, 1.5), 0.6, 1e-14);
  EXPECT_EQ(nu_transfer(level, 0.0, 1.5), std::numeric_limits<double>::infinity());
  level.margin = -0.1;
  EXPECT_THROW(nu_transfer(level, 0.5, 1.5), Error);
}
