//
// Copyright 2026 The Privacy HCR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privacy_hcr/hcr_bound.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "privacy_hcr/errors.h"

namespace privacy_hcr {
namespace {

using ::privacy_hcr::testing::NaiveSMinus;
using ::privacy_hcr::testing::NaiveSTau;
using ::privacy_hcr::testing::RandomComplexPairSystem;
using ::privacy_hcr::testing::RandomStableSystem;
using ::privacy_hcr::testing::RelativeError;

DiscreteLTISystem HalfPole(double sigma2 = 1.0) {
  return DiscreteLTISystem::Scalar(0.5, 1, 1, sigma2);
}
DiscreteLTISystem Integrator() { return DiscreteLTISystem::Scalar(1, 1, 1, 1); }

TEST(STauTest, FrozenExamples) {
  // Oracle: NaiveSTau / geometric series, evaluated offline.
  EXPECT_DOUBLE_EQ(STau(HalfPole(), 2, 5, 1), 1.3125);
  EXPECT_DOUBLE_EQ(STau(HalfPole(), 2, 5, 2), 3.8125);
  EXPECT_DOUBLE_EQ(STau(HalfPole(), 2, 5, 3), 6.3125);
  EXPECT_DOUBLE_EQ(STau(Integrator(), 0, 5, 1), 5.0);
  EXPECT_DOUBLE_EQ(STau(HalfPole(4.0), 1, 5, 1), 0.33203125);
}

TEST(STauTest, RejectsOutOfDomain) {
  EXPECT_THROW(STau(HalfPole(0.0), 2, 5, 1), DomainError);
  EXPECT_THROW(STau(HalfPole(), 2, 5, 0), DomainError);
  EXPECT_THROW(STau(HalfPole(), 2, 5, 4), DomainError);
  EXPECT_THROW(STau(HalfPole(), 5, 5, 1), DomainError);
}

TEST(STauTest, ProfileMatchesNaiveTranscription) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteLTISystem sys = RandomStableSystem(rng, 1 + trial % 4, 0.7);
    const int horizon = 5 + trial % 20;
    const int k_star = trial % horizon;
    const std::vector<SPoint> profile = SProfile(sys, k_star, horizon);
    ASSERT_EQ(static_cast<int>(profile.size()), horizon - k_star);
    for (const SPoint& p : profile) {
      const double naive = NaiveSTau(sys, k_star, horizon, p.tau);
      EXPECT_LE(RelativeError(p.s, naive), 1e-12);
      EXPECT_EQ(p.s, STau(sys, k_star, horizon, p.tau));
      EXPECT_GE(p.s, 0.0);
    }
  }
}

TEST(STauTest, NondecreasingForPositiveKernels) {
  // With every C A^j B >= 0 each inner sum grows with tau.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pole(0.0, 0.99);
  for (int trial = 0; trial < 30; ++trial) {
    const DiscreteLTISystem sys =
        DiscreteLTISystem::Scalar(pole(rng), 1.0, 1.0, 1.0);
    const std::vector<SPoint> profile = SProfile(sys, 3, 30);
    for (std::size_t i = 1; i < profile.size(); ++i) {
      EXPECT_GE(profile[i].s, profile[i - 1].s);
    }
  }
}

TEST(SMinusTest, LiteralFormulaExamples) {
  EXPECT_DOUBLE_EQ(SMinus(HalfPole(), 3, 5, 1), NaiveSMinus(HalfPole(), 3, 5, 1));
  EXPECT_DOUBLE_EQ(SMinus(HalfPole(), 3, 5, 1), 1.3125);
  EXPECT_DOUBLE_EQ(SMinus(Integrator(), 2, 4, 1), 3.0);
  EXPECT_GE(SMinus(Integrator(), 2, 4, 1), STau(Integrator(), 2, 4, 1));
  EXPECT_THROW(SMinus(HalfPole(), 1, 5, 2), DomainError);
  EXPECT_THROW(SMinus(HalfPole(), 1, 5, 0), DomainError);
}

TEST(SMinusTest, DominatesForwardShift) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pole(0.0, 0.99);
  std::uniform_real_distribution<double> gain(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteLTISystem sys =
        DiscreteLTISystem::Scalar(pole(rng), gain(rng), gain(rng), 1.0);
    for (int shift = 1; shift <= 4; ++shift) {
      const double minus = SMinus(sys, 5, 20, shift);
      EXPECT_LE(STau(sys, 5, 20, shift), minus);
      EXPECT_LE(RelativeError(minus, NaiveSMinus(sys, 5, 20, shift)), 1e-12);
    }
  }
}

TEST(HcrBoundTest, HalfPoleExample) {
  const BoundReport r = HcrBound(HalfPole(), 2, 5);
  ASSERT_EQ(r.s_profile.size(), 3u);
  EXPECT_EQ(r.tau_star, 1);
  // max{1/(e^1.3125-1), 4/(e^3.8125-1), 9/(e^6.3125-1)}.
  EXPECT_NEAR(r.bound_steps2, 0.36826298707161054, 1e-15);
  EXPECT_EQ(r.bound_phys, r.bound_steps2);
  EXPECT_DOUBLE_EQ(r.s_at_tau_star(), 1.3125);
  EXPECT_FALSE(r.overflow_mode);
  EXPECT_FALSE(r.perfect_privacy());
}

TEST(HcrBoundTest, IntegratorDecaysWithHorizon) {
  const BoundReport r5 = HcrBound(Integrator(), 0, 5);
  EXPECT_EQ(r5.tau_star, 1);
  EXPECT_NEAR(r5.bound_steps2, 1.0 / std::expm1(5.0), 1e-17);
  double previous = r5.bound_steps2;
  for (int horizon = 6; horizon <= 40; ++horizon) {
    const double b = HcrBound(Integrator(), 0, horizon).bound_steps2;
    EXPECT_LT(b, previous);
    previous = b;
  }
  EXPECT_LT(previous, 1e-15);
}

TEST(HcrBoundTest, UnobservableInputGivesInfiniteBound) {
  Eigen::MatrixXd A(2, 2);
  A << 0.5, 0, 0, 0;
  Eigen::VectorXd B(2);
  B << 1, 0;
  Eigen::RowVectorXd C(2);
  C << 0, 1;
  const BoundReport r = HcrBound(DiscreteLTISystem(A, B, C, 1.0), 0, 10);
  EXPECT_TRUE(r.perfect_privacy());
  EXPECT_TRUE(std::isinf(r.bound_phys));
  EXPECT_EQ(r.tau_star, 1);
  for (const SPoint& p : r.s_profile) EXPECT_EQ(p.s, 0.0);
}

TEST(HcrBoundTest, BiasEntersNumerator) {
  // g(k) = -0.5 k shrinks every numerator root to tau / 2.
  std::vector<double> g(6);
  for (int k = 0; k <= 5; ++k) g[k] = -0.5 * k;
  const BoundReport biased = HcrBound(HalfPole(), 2, 5, BiasFunction(g));
  EXPECT_NEAR(biased.bound_steps2, 0.25 * HcrBound(HalfPole(), 2, 5).bound_steps2,
              1e-15);

  // g(k) = -k makes every numerator zero.
  for (int k = 0; k <= 5; ++k) g[k] = -k;
  const BoundReport degenerate = HcrBound(HalfPole(), 2, 5, BiasFunction(g));
  EXPECT_EQ(degenerate.bound_steps2, 0.0);

  EXPECT_THROW(HcrBound(HalfPole(), 2, 5, BiasFunction::Zero(4)), ConfigError);
}

TEST(HcrBoundTest, ZeroOverZeroIsSkipped) {
  // Unobservable system with g(k) = -k: every quotient is 0/0.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  Eigen::VectorXd B(2);
  B << 1, 0;
  Eigen::RowVectorXd C(2);
  C << 0, 1;
  std::vector<double> g(5);
  for (int k = 0; k <= 4; ++k) g[k] = -k;
  const BoundReport r =
      HcrBound(DiscreteLTISystem(A, B, C, 1.0), 0, 4, BiasFunction(g));
  EXPECT_EQ(r.bound_steps2, 0.0);
  EXPECT_EQ(r.tau_star, 0);
}

TEST(HcrBoundTest, RejectsInvalidInputs) {
  EXPECT_THROW(HcrBound(HalfPole(0.0), 2, 5), DomainError);
  EXPECT_THROW(HcrBound(HalfPole(), 5, 5), DomainError);
  EXPECT_THROW(HcrBound(HalfPole(), -1, 5), DomainError);
}

TEST(HcrBoundTest, OverflowUsesLogDomain) {
  // S(1) = 705 on a 1-sample horizon after the change.
  const DiscreteLTISystem sys = DiscreteLTISystem::Scalar(0.0, 1, 1, 1.0 / 705);
  const BoundReport r = HcrBound(sys, 0, 1);
  EXPECT_TRUE(r.overflow_mode);
  EXPECT_NEAR(r.bound_steps2, std::exp(-705.0), 1e-12 * std::exp(-705.0));
  EXPECT_GT(r.bound_steps2, 0.0);

  // Underflow reports 0 with the flag set.
  const BoundReport tiny = HcrBound(sys.WithSigma2(1.0 / 5000), 0, 1);
  EXPECT_TRUE(tiny.overflow_mode);
  EXPECT_EQ(tiny.bound_steps2, 0.0);
}

TEST(HcrQuotientTest, LogDomainAgreesNearThreshold) {
  for (double s = 600.0; s <= 800.0; s += 12.5) {
    for (double root : {1.0, 3.0, 17.0}) {
      const double direct = HcrQuotient(root, s, QuotientMethod::kDirect);
      const double logged = HcrQuotient(root, s, QuotientMethod::kLogDomain);
      if (std::isfinite(direct) && direct > 0.0 && std::isfinite(1.0 / direct)) {
        EXPECT_LE(RelativeError(logged, direct), 1e-10) << "S = " << s;
      }
    }
  }
  bool used_log = true;
  HcrQuotient(1.0, 10.0, QuotientMethod::kAuto, &used_log);
  EXPECT_FALSE(used_log);
  HcrQuotient(1.0, 701.0, QuotientMethod::kAuto, &used_log);
  EXPECT_TRUE(used_log);
}

TEST(ScalarBoundTest, ClosedForms) {
  const BoundReport integrator = ScalarBound(1, 1, 1, 1, 0, 5);
  EXPECT_DOUBLE_EQ(integrator.s_profile[0].s, 5.0);
  EXPECT_LE(RelativeError(integrator.bound_steps2, 1.0 / std::expm1(5.0)), 1e-12);

  const BoundReport half = ScalarBound(0.5, 1, 1, 1, 2, 5);
  EXPECT_DOUBLE_EQ(half.s_profile[0].s, 1.3125);
  EXPECT_NEAR(half.bound_steps2, 0.36826298707161054, 1e-15);

  EXPECT_GT(ScalarBound(0.3, 1, 1, 1, 0, 20).bound_steps2,
            ScalarBound(0.6, 1, 1, 1, 0, 20).bound_steps2);

  EXPECT_DOUBLE_EQ(ScalarBound(0.5, 1, 1, 1, 2, 5, 9.0).bound_phys,
                   half.bound_steps2 * 81.0);
  EXPECT_TRUE(ScalarBound(0.5, 0, 1, 1, 2, 5).perfect_privacy());
  EXPECT_THROW(ScalarBound(-0.5, 1, 1, 1, 2, 5), DomainError);
  EXPECT_THROW(ScalarBound(0.5, 1, 1, 0, 2, 5), DomainError);
  EXPECT_THROW(ScalarBound(0.5, 1, 1, 1, 5, 5), DomainError);
}

TEST(ScalarBoundTest, KernelDominanceTermByTerm) {
  // For a >= 0 each inner sum at tau >= 1 is at least c a^{k-1-k*} b, so
  // S(tau) >= S of the one-state closed form.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pole(0.0, 1.2);
  std::uniform_real_distribution<double> gain(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = pole(rng), b = gain(rng), c = gain(rng);
    const DiscreteLTISystem sys = DiscreteLTISystem::Scalar(a, b, c, 1.0);
    const int horizon = 15, k_star = trial % 10;
    for (int k = k_star + 1; k <= horizon; ++k) {
      const double kernel = c * std::pow(a, k - 1 - k_star) * b;
      for (int tau = 1; tau <= horizon - k_star; ++tau) {
        double inner = 0.0;
        for (int l = k_star; l <= std::min(k_star + tau - 1, k - 1); ++l) {
          inner += c * std::pow(a, k - 1 - l) * b;
        }
        EXPECT_GE(inner * inner, kernel * kernel * (1 - 1e-12));
      }
    }
    const double s1 = ScalarBound(a, b, c, 1.0, k_star, horizon).s_profile[0].s;
    for (const SPoint& p : SProfile(sys, k_star, horizon)) {
      EXPECT_GE(p.s, s1 * (1 - 1e-12));
    }
  }
}

TEST(ScalarBoundTest, PropositionOneThreshold) {
  // a = 1: bound < eps once N > (sigma2 / (c b)^2) ln(1 / eps + 1).
  const double b = 0.7, c = 1.3, sigma2 = 2.0, eps = 1e-3;
  const double threshold = sigma2 / (c * c * b * b) * std::log(1.0 / eps + 1.0);
  double previous = std::numeric_limits<double>::infinity();
  for (int horizon = 1; horizon <= 60; ++horizon) {
    const double bound = ScalarBound(1.0, b, c, sigma2, 0, horizon).bound_steps2;
    EXPECT_LT(bound, previous);
    if (horizon > threshold) {
      EXPECT_LT(bound, eps);
    }
    previous = bound;
  }
}

TEST(BoundInvariantTest, SnrScaling) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteLTISystem sys = RandomStableSystem(rng, 1 + trial % 3, 0.5);
    const double alpha = 0.25 + trial;
    const DiscreteLTISystem scaled =
        sys.WithC(alpha * sys.C()).WithSigma2(alpha * alpha * sys.sigma2());
    const BoundReport r0 = HcrBound(sys, 2, 14);
    const BoundReport r1 = HcrBound(scaled, 2, 14);
    for (std::size_t i = 0; i < r0.s_profile.size(); ++i) {
      EXPECT_LE(RelativeError(r1.s_profile[i].s, r0.s_profile[i].s), 1e-12);
    }
    EXPECT_LE(RelativeError(r1.bound_steps2, r0.bound_steps2), 1e-10);
  }
}

TEST(BoundInvariantTest, PositiveWhenInformative) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteLTISystem sys = RandomStableSystem(rng, 2, 1.0);
    const BoundReport r = HcrBound(sys, 1, 12);
    EXPECT_GT(r.bound_steps2, 0.0);
    EXPECT_EQ(r.bound_phys, r.bound_steps2 * (sys.dt() * sys.dt()));
  }
}

TEST(STauEigenTest, DiagonalAndModeCancellation) {
  Eigen::MatrixXd A(2, 2);
  A << 0.9, 0, 0, 0.5;
  Eigen::VectorXd B(2);
  B << 1, 1;
  Eigen::RowVectorXd C(2);
  C << 1, 0;
  const DiscreteLTISystem sys(A, B, C, 1.0);
  const EigenStructure es = ComputeEigenStructure(sys);
  const double modal = STauEigen(es, 1.0, 0, 10, 1);
  EXPECT_LE(RelativeError(modal, STau(sys, 0, 10, 1)), 1e-10);
  // C = [1, 0] removes the 0.5 mode entirely.
  const DiscreteLTISystem scalar = DiscreteLTISystem::Scalar(0.9, 1, 1, 1.0);
  for (int tau = 1; tau <= 10; ++tau) {
    EXPECT_LE(RelativeError(STauEigen(es, 1.0, 0, 10, tau), STau(scalar, 0, 10, tau)),
              1e-12);
  }
}

TEST(STauEigenTest, RotationPair) {
  const double theta = std::numbers::pi / 6.0;
  Eigen::MatrixXd A(2, 2);
  A << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  A *= 0.9;
  Eigen::VectorXd B(2);
  B << 1, 0;
  Eigen::RowVectorXd C(2);
  C << 1, 0;
  const DiscreteLTISystem sys(A, B, C, 1.0);
  const EigenStructure es = ComputeEigenStructure(sys);
  EXPECT_GT(std::abs(es.lambdas(0).imag()), 0.1);
  for (int tau = 1; tau <= 12; ++tau) {
    EXPECT_LE(RelativeError(STauEigen(es, 1.0, 0, 12, tau), STau(sys, 0, 12, tau)),
              1e-8);
  }
}

TEST(STauEigenTest, RandomSystems) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const DiscreteLTISystem sys =
        trial % 2 ? RandomComplexPairSystem(rng, 2 + trial % 3, 1.5)
                  : RandomStableSystem(rng, 1 + trial % 4, 1.5);
    const EigenStructure es = ComputeEigenStructure(sys);
    const int horizon = 20, k_star = trial % 5;
    for (int tau = 1; tau <= horizon - k_star; tau += 3) {
      EXPECT_LE(RelativeError(STauEigen(es, sys.sigma2(), k_star, horizon, tau),
                              STau(sys, k_star, horizon, tau)),
                1e-8);
    }
  }
}

TEST(UnitConvertTest, Examples) {
  EXPECT_NEAR(UnitConvert(11.3 / 81.0, 9.0), 11.3, 1e-12);
  EXPECT_NEAR(UnitConvert(0.1395, 9.0), 11.3, 0.01);
  EXPECT_EQ(UnitConvert(0.0, 9.0), 0.0);
  EXPECT_EQ(UnitConvert(1.0, 1.0), 1.0);
  EXPECT_THROW(UnitConvert(1.0, 0.0), DomainError);
}

}  // namespace
}  // namespace privacy_hcr
