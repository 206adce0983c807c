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

#include "pairrank/oracle.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace pairrank {
namespace {

using testing::DenseSamplingMatrix;
using testing::Inner;

const LinkFunction kLogistic = LinkFunction::Logistic();

Dataset UniformData(const Dimensions& dims, int m, Rng& rng) {
  std::vector<Comparison> points;
  for (int k = 0; k < m; ++k) points.push_back({SampleTriplet(dims, rng), 0.5});
  return Dataset(dims, std::move(points));
}

// Independent dense evaluation of <A + A^T, Y>^2 averaged over the data.
double DenseD(const MatrixXd& y, const Dataset& data) {
  double total = 0.0;
  for (const Comparison& c : data.comparisons()) {
    const MatrixXd a = DenseSamplingMatrix(data.dims(), c.triplet);
    const double p = Inner(a + a.transpose(), y);
    total += p * p;
  }
  return total / data.size();
}

FactorMatrix Centered(FactorMatrix z) {
  auto items = z.mutable_matrix().bottomRows(z.n2());
  items.rowwise() -= items.colwise().mean();
  return z;
}

TEST(DOperator, ZeroAndSingleEntry) {
  const Dimensions dims(2, 3, 1);
  const Dataset data(dims, {{{1, 0, 2}, 1.0}});
  EXPECT_EQ(DOperator(MatrixXd::Zero(5, 5), data), 0.0);
  MatrixXd y = MatrixXd::Zero(5, 5);
  y(1, 2) = 1.0;  // user 1, item 0
  EXPECT_EQ(DOperator(y, data), 1.0);
  y(2, 1) = 1.0;  // the mirrored entry doubles the pairing
  EXPECT_EQ(DOperator(y, data), 4.0);
}

TEST(DOperator, FactoredMatchesDense) {
  Rng rng(1);
  const Dimensions dims(3, 4, 2);
  const Dataset data = UniformData(dims, 40, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const FactorMatrix w = testing::GaussianFactor(dims, rng);
    const FactorMatrix z = testing::GaussianFactor(dims, rng);
    const MatrixXd y = w.matrix() * z.matrix().transpose();
    const double dense = DenseD(y, data);
    EXPECT_NEAR(DOperator(y, data), dense, 1e-12 * dense);
    EXPECT_NEAR(DOperator(w, z, data), dense, 1e-12 * dense);
  }
  EXPECT_THROW(DOperator(MatrixXd::Zero(6, 6), data), DomainError);
}

TEST(ExpectedPair, SmallestInstance) {
  const Dimensions dims(1, 2, 1);
  MatrixXd x(1, 2);
  x << 0, 1;
  EXPECT_EQ(ExpectedPairBruteForce(x, dims), 1.0);
  EXPECT_NEAR(ExpectedPairClosedForm(x, dims), 1.0, 1e-15);
}

TEST(ExpectedPair, ClosedFormMatchesEnumeration) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const Dimensions dims(1 + trial % 4, 2 + trial % 5, 1);
    const MatrixXd x = testing::GaussianMatrix(dims.n1(), dims.n2(), rng);
    const double brute = ExpectedPairBruteForce(x, dims);
    EXPECT_NEAR(ExpectedPairClosedForm(x, dims), brute, 1e-12 * brute);
  }
}

TEST(ExpectedPair, RowShiftsDoNotMatter) {
  Rng rng(3);
  const Dimensions dims(3, 5, 1);
  const MatrixXd x = testing::GaussianMatrix(3, 5, rng);
  const MatrixXd shifted = x.colwise() + testing::GaussianMatrix(3, 1, rng).col(0);
  EXPECT_NEAR(ExpectedPairBruteForce(shifted, dims),
              ExpectedPairBruteForce(x, dims), 1e-12);
}

TEST(ExpectedDDeltaPhi, TruthAgainstItself) {
  const GroundTruth truth = testing::UnitTruth(Dimensions(4, 5, 2), 4, 2.0);
  const double expected = 4.0 * Gamma(truth.dims()) * truth.Scores().squaredNorm();
  EXPECT_NEAR(ExpectedDDeltaPhi(truth.zstar, truth.zstar), expected,
              1e-12 * expected);
  EXPECT_NEAR(ExpectedDDeltaPhiBruteForce(truth.zstar, truth.zstar), expected,
              1e-12 * expected);
}

TEST(ExpectedDDeltaPhi, ClosedFormMatchesEnumeration) {
  Rng rng(5);
  const Dimensions dims(3, 4, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const FactorMatrix delta = Centered(testing::GaussianFactor(dims, rng));
    const FactorMatrix phi = Centered(testing::GaussianFactor(dims, rng));
    const double brute = ExpectedDDeltaPhiBruteForce(delta, phi);
    EXPECT_NEAR(ExpectedDDeltaPhi(delta, phi), brute, 1e-12 * brute);
  }
  EXPECT_THROW(ExpectedDDeltaPhi(testing::GaussianFactor(dims, rng),
                                 Centered(testing::GaussianFactor(dims, rng))),
               DomainError);
}

TEST(SdMatrix, SinglePointIsOuterProduct) {
  Rng rng(6);
  const Dimensions dims(2, 3, 2);
  const FactorMatrix z = testing::GaussianFactor(dims, rng);
  const Triplet t{1, 2, 0};
  const Dataset data(dims, {{t, 1.0}});
  const MatrixXd a = DenseSamplingMatrix(dims, t);
  const MatrixXd col = (a + a.transpose()) * z.matrix();
  const Eigen::Map<const VectorXd> v(col.data(), col.size());
  const MatrixXd expected = v * v.transpose();
  EXPECT_LE((SdMatrix(data, z) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SdMatrix, ExhaustiveAverageIsTheExpectation) {
  const GroundTruth truth = testing::UnitTruth(Dimensions(3, 4, 2), 7, 1.5);
  const Dataset all = ExhaustiveDataset(truth, kLogistic);
  EXPECT_EQ(static_cast<std::int64_t>(all.size()), truth.dims().NumTriplets());
  EXPECT_LE(SdDeviation(all, truth), 1e-12);
}

TEST(SdMatrix, ConcentratesWithMoreData) {
  const GroundTruth truth = testing::UnitTruth(Dimensions(3, 4, 1), 8);
  Rng rng(9);
  double small = 0.0;
  double large = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    small += SdDeviation(UniformData(truth.dims(), 20, rng), truth);
    large += SdDeviation(UniformData(truth.dims(), 2000, rng), truth);
  }
  EXPECT_LT(large, 0.5 * small);
}

TEST(SdMatrix, ExpectedFormMatchesExpectedD) {
  Rng rng(10);
  const GroundTruth truth = testing::UnitTruth(Dimensions(3, 4, 2), 11);
  const MatrixXd e = ExpectedSdMatrix(truth.zstar);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd rot = RandomOrthogonal(2, rng);
    const FactorMatrix delta = testing::GaussianFactor(truth.dims(), rng);
    const FactorMatrix phi(3, truth.zstar.matrix() * rot);
    const MatrixXd vm = delta.matrix() * rot.transpose();
    const Eigen::Map<const VectorXd> v(vm.data(), vm.size());
    const double brute = ExpectedDDeltaPhiBruteForce(delta, phi);
    EXPECT_NEAR(v.dot(e * v), brute, 1e-12 * brute);
  }
}

TEST(SdQuadraticCheck, BothSidesAgree) {
  Rng rng(12);
  const GroundTruth truth = testing::UnitTruth(Dimensions(4, 5, 2), 13);
  const Dataset data = UniformData(truth.dims(), 30, rng);
  for (int trial = 0; trial < 50; ++trial) {
    const FactorMatrix z = testing::GaussianFactor(truth.dims(), rng);
    const QuadraticCheck q = SdQuadraticCheck(data, truth, z);
    EXPECT_NEAR(q.lhs, q.rhs, 1e-10 * std::max(1.0, q.lhs));
    EXPECT_NEAR(q.v_norm2, q.delta_norm2, 1e-12 * q.delta_norm2);
  }
}

TEST(SdQuadraticCheck, VanishesOnTheRotationClass) {
  Rng rng(14);
  const GroundTruth truth = testing::UnitTruth(Dimensions(4, 5, 2), 15);
  const Dataset data = UniformData(truth.dims(), 30, rng);
  const FactorMatrix z(4, truth.zstar.matrix() * RandomOrthogonal(2, rng));
  const QuadraticCheck q = SdQuadraticCheck(data, truth, z);
  EXPECT_LT(q.lhs, 1e-24);
  EXPECT_LT(q.rhs, 1e-24);
}

TEST(SizeCaps, BruteForceRefusesLargeInstances) {
  const Dimensions wide(100, 101, 1);
  EXPECT_THROW(ExpectedPairBruteForce(MatrixXd::Zero(100, 101), wide),
               SizeError);
  const Dimensions tall(400, 200, 2);
  const Dataset one(tall, {{{0, 0, 1}, 1.0}});
  EXPECT_THROW(SdMatrix(one, FactorMatrix::Zero(tall)), SizeError);
}

TEST(DualMatrix, ExhaustiveEqualsMean) {
  const GroundTruth truth = testing::UnitTruth(Dimensions(3, 5, 1), 16);
  const Dataset all = ExhaustiveDataset(truth, kLogistic);
  EXPECT_EQ(DualMatrix(all), DualMean(truth.dims()));
}

TEST(DualMatrix, EntriesSumToTwoAndConcentrate) {
  Rng rng(17);
  const Dimensions dims(5, 6, 1);
  const Dataset small = UniformData(dims, 7, rng);
  EXPECT_NEAR(DualMatrix(small).sum(), 2.0, 1e-12);
  const Dataset big = UniformData(dims, 100000, rng);
  EXPECT_LT((DualMatrix(big) - DualMean(dims)).cwiseAbs().maxCoeff(), 0.01);
  EXPECT_NEAR(DualMatrix(big).sum(), 2.0, 1e-12);
}

TEST(ScoreBounds, ZeroAndTightCase) {
  const Dimensions dims(2, 2, 2);
  const ScoreBounds zero = ScoreBoundsCheck(FactorMatrix::Zero(dims), {0, 0, 1});
  EXPECT_EQ(zero.lhs1, 0.0);
  EXPECT_EQ(zero.rhs2, 0.0);
  MatrixXd z(4, 2);
  z << 1, 0, 0, 0, 1, 0, -1, 0;
  const ScoreBounds tight = ScoreBoundsCheck(FactorMatrix(2, z), {0, 0, 1});
  EXPECT_EQ(tight.lhs1, 2.0);
  EXPECT_EQ(tight.rhs1, 2.0);
  EXPECT_EQ(tight.lhs2, 6.0);
  EXPECT_EQ(tight.rhs2, 6.0);
}

TEST(ScoreBounds, HoldOnRandomFactors) {
  Rng rng(18);
  const Dimensions dims(4, 6, 3);
  for (int trial = 0; trial < 500; ++trial) {
    const FactorMatrix z = testing::GaussianFactor(dims, rng);
    const Triplet t = SampleTriplet(dims, rng);
    const ScoreBounds b = ScoreBoundsCheck(z, t);
    EXPECT_LE(b.lhs1, b.rhs1);
    EXPECT_LE(b.lhs2, b.rhs2);
    const MatrixXd a = DenseSamplingMatrix(dims, t);
    EXPECT_NEAR(b.lhs2, ((a + a.transpose()) * z.matrix()).squaredNorm(),
                1e-12 * b.lhs2);
  }
}

TEST(FiniteDiffGrad, MatchesAnalyticGradient) {
  Rng rng(19);
  const GroundTruth truth = testing::UnitTruth(Dimensions(3, 4, 2), 20);
  const Dataset data = GenDataset(truth, 25, kLogistic, NoiseMode::kNoisy, rng);
  ObjectiveConfig cfg;
  cfg.lambda = 0.3;
  const FactorMatrix z = testing::GaussianFactor(truth.dims(), rng);
  const MatrixXd fd = FiniteDiffGrad(z, data, kLogistic, cfg, 1e-5);
  const MatrixXd exact = ObjectiveGrad(z, data, kLogistic, cfg).matrix();
  EXPECT_LE((fd - exact).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(FiniteDiffGrad(z, data, kLogistic, cfg, 0.0), DomainError);
}

}  // namespace
}  // namespace pairrank
