// Copyright 2026 The PairRank Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pairrank/model.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace pairrank {
namespace {

using testing::DenseSamplingMatrix;
using testing::Inner;

TEST(Incoherence, EqualRowNormsGiveOne) {
  MatrixXd z(4, 2);
  z << 1, 0, 0, 1, -1, 0, 0.6, 0.8;
  EXPECT_NEAR(Incoherence(z), 1.0, 1e-15);
}

TEST(Incoherence, SingleRowGivesN) {
  MatrixXd z = MatrixXd::Zero(7, 3);
  z.row(4) << 1, 2, 3;
  EXPECT_NEAR(Incoherence(z), 7.0, 1e-14);
}

TEST(Incoherence, ScaleInvariantAndBounded) {
  Rng rng(3);
  const MatrixXd z = testing::GaussianMatrix(20, 3, rng);
  const double mu = Incoherence(z);
  EXPECT_GE(mu, 1.0);
  EXPECT_LE(mu, 20.0);
  EXPECT_NEAR(Incoherence(MatrixXd(-3.7 * z)), mu, 1e-12);
}

TEST(Incoherence, ZeroMatrixThrows) {
  EXPECT_THROW(Incoherence(MatrixXd::Zero(3, 2)), DomainError);
}

TEST(ConditionNumber, Examples) {
  EXPECT_EQ(ConditionNumber(std::vector<double>{1, 1, 1}), 1.0);
  EXPECT_NEAR(ConditionNumber(std::vector<double>{1.1, 1.05, 1.0}), 1.1, 1e-15);
  EXPECT_EQ(ConditionNumber(std::vector<double>{4, 2}), 2.0);
}

TEST(ConditionNumber, RejectsBadSpectra) {
  EXPECT_THROW(ConditionNumber(std::vector<double>{1, 2}), DomainError);
  EXPECT_THROW(ConditionNumber(std::vector<double>{1, 0}), DomainError);
  EXPECT_THROW(ConditionNumber(std::vector<double>{}), DomainError);
}

TEST(Gamma, Examples) {
  EXPECT_EQ(Gamma(Dimensions(2, 2, 1)), 1.0);
  EXPECT_EQ(Gamma(Dimensions(200, 300, 3)), 2.0 / 59800.0);
  EXPECT_NEAR(Gamma(Dimensions(200, 300, 3)), 3.344e-5, 5e-9);
  EXPECT_NEAR(Gamma(Dimensions(2000, 3000, 3)), 3.334e-7, 5e-11);
}

TEST(UtilityDiff, HandExample) {
  MatrixXd z(3, 2);
  z << 1, 0, 2, 0, 0, 0;
  EXPECT_EQ(UtilityDiff(FactorMatrix(1, z), {0, 0, 1}), 2.0);
}

TEST(UtilityDiff, AntisymmetricAndRejectsEqualItems) {
  Rng rng(5);
  const Dimensions dims(3, 4, 2);
  const FactorMatrix z = testing::GaussianFactor(dims, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const Triplet t = SampleTriplet(dims, rng);
    EXPECT_EQ(UtilityDiff(z, t), -UtilityDiff(z, t.Reversed()));
  }
  EXPECT_THROW(UtilityDiff(z, {0, 1, 1}), DomainError);
}

TEST(UtilityDiff, MatchesDenseSamplingMatrix) {
  Rng rng(7);
  const Dimensions dims(2, 2, 2);  // n = 4
  for (int trial = 0; trial < 50; ++trial) {
    const FactorMatrix z = testing::GaussianFactor(dims, rng);
    const Triplet t = SampleTriplet(dims, rng);
    const MatrixXd y = z.matrix() * z.matrix().transpose();
    EXPECT_NEAR(UtilityDiff(z, t), Inner(DenseSamplingMatrix(dims, t), y),
                1e-12);
  }
}

TEST(UtilityDiff, ItemShiftInvariant) {
  Rng rng(9);
  const Dimensions dims(4, 5, 2);
  const FactorMatrix z = testing::GaussianFactor(dims, rng);
  MatrixXd shifted = z.matrix();
  shifted.bottomRows(5).rowwise() += Eigen::RowVector2d(3.0, -1.5);
  const FactorMatrix zs(4, shifted);
  for (const Triplet& t : EnumerateTriplets(dims)) {
    const double a = UtilityDiff(z, t);
    EXPECT_NEAR(UtilityDiff(zs, t), a, 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST(LinkBounds, DegenerateIntervalIsQuarter) {
  const LinkBounds b = LinkBoundsOnInterval(LinkFunction::Logistic(), 0.0);
  EXPECT_EQ(b.xi, 0.25);
  EXPECT_EQ(b.Xi, 0.25);
  const LinkBounds g =
      LinkBoundsOnInterval(testing::LogisticAsCustom(), 0.0);
  EXPECT_NEAR(g.xi, 0.25, 1e-15);
  EXPECT_NEAR(g.Xi, 0.25, 1e-15);
}

TEST(LinkBounds, LogisticAtTwo) {
  const LinkBounds b = LinkBoundsOnInterval(LinkFunction::Logistic(), 2.0);
  const double g2 = 1.0 / (1.0 + std::exp(-2.0));
  EXPECT_NEAR(b.xi, g2 * (1.0 - g2), 1e-15);
  EXPECT_NEAR(b.xi, 0.104994, 5e-7);
  EXPECT_EQ(b.Xi, 0.25);
}

TEST(LinkBounds, GenericPathMatchesAnalyticLogistic) {
  for (double c : {0.5, 2.0, 7.0}) {
    const LinkBounds analytic =
        LinkBoundsOnInterval(LinkFunction::Logistic(), c);
    const LinkBounds generic =
        LinkBoundsOnInterval(testing::LogisticAsCustom(), c);
    EXPECT_NEAR(generic.xi, analytic.xi, 1e-4 * analytic.xi) << c;
    EXPECT_NEAR(generic.Xi, analytic.Xi, 1e-4 * analytic.Xi) << c;
  }
}

// Two-dimensional brute force over I^2 for a link whose ratio does not
// collapse: the probit.
TEST(LinkBounds, GenericPathMatchesTwoDimensionalSearch) {
  const LinkFunction probit = LinkFunction::Custom(
      [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); },
      [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI); },
      [](double x) { return std::log(0.5 * std::erfc(-x / std::sqrt(2.0))); },
      [](double x) { return std::log(0.5 * std::erfc(x / std::sqrt(2.0))); });
  const double c = 1.5;
  double lo = INFINITY, hi = 0.0;
  const int k = 601;
  for (int a = 0; a < k; ++a) {
    const double x = -c + 2 * c * a / (k - 1);
    const double gx = probit(x);
    for (int b = 0; b < k; ++b) {
      const double y = -c + 2 * c * b / (k - 1);
      const double ratio =
          probit.Derivative(x) * probit.Derivative(y) / (gx * (1 - gx));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  const LinkBounds b = LinkBoundsOnInterval(probit, c);
  EXPECT_NEAR(b.xi, lo, 1e-6 * lo);
  EXPECT_NEAR(b.Xi, hi, 1e-6 * hi);
  EXPECT_LE(b.xi, b.Xi);
}

TEST(LinkBounds, RejectsBadInterval) {
  EXPECT_THROW(LinkBoundsOnInterval(LinkFunction::Logistic(), -1.0),
               DomainError);
  EXPECT_THROW(LinkBoundsOnInterval(LinkFunction::Logistic(), INFINITY),
               DomainError);
}

TEST(TheoryConstants, Relations) {
  const GroundTruth truth = testing::UnitTruth(Dimensions(20, 30, 2), 11, 1.5);
  const LinkFunction link = LinkFunction::Logistic();
  const TheoryConstants tc = MakeTheoryConstants(link, truth);
  const double c = 24.0 * truth.mu * truth.zstar.matrix().squaredNorm() / 50.0;
  EXPECT_NEAR(tc.xi, link.Derivative(c), 1e-15);
  EXPECT_EQ(tc.Xi, 0.25);
  EXPECT_EQ(tc.gamma, 2.0 / (20.0 * 29.0));
  EXPECT_NEAR(tc.tau, tc.xi / tc.Xi, 1e-15);
  EXPECT_GT(tc.tau, 0.0);
  EXPECT_LE(tc.tau, 1.0);
  EXPECT_NEAR(tc.alpha, tc.xi * tc.gamma * 1.0, 1e-18);
  EXPECT_EQ(tc.delta, 0.05);
  EXPECT_THROW(MakeTheoryConstants(link, truth, 0.0), ConfigError);
  EXPECT_THROW(MakeTheoryConstants(link, truth, 1.0), ConfigError);
}

TEST(MakeGroundTruth, DerivesMuAndKappa) {
  MatrixXd z(3, 1);
  z << 1, 1, -1;
  const GroundTruth t = MakeGroundTruth(FactorMatrix(1, z), {2.0});
  EXPECT_EQ(t.kappa, 1.0);
  EXPECT_NEAR(t.mu, 1.0, 1e-15);
  EXPECT_THROW(MakeGroundTruth(FactorMatrix(1, z), {2.0, 1.0}), DomainError);
}

}  // namespace
}  // namespace pairrank
