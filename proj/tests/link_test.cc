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

#include "pairrank/link.h"

#include <cmath>

#include "gtest/gtest.h"
#include "test_util.h"

namespace pairrank {
namespace {

const LinkFunction kLogistic = LinkFunction::Logistic();

TEST(Logistic, KnownValues) {
  EXPECT_EQ(kLogistic(0.0), 0.5);
  EXPECT_NEAR(kLogistic(std::log(3.0)), 0.75, 1e-15);
}

TEST(Logistic, DeepTailIsPositive) {
  const double g = kLogistic(-50.0);
  const long double e = std::exp(-50.0L);
  const long double expected = e / (1.0L + e);
  EXPECT_GT(g, 0.0);
  EXPECT_LT(g, 1e-20);
  EXPECT_NEAR(g / static_cast<double>(expected), 1.0, 1e-14);
}

TEST(Logistic, ComplementSymmetry) {
  for (double x : {0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) {
    EXPECT_NEAR(kLogistic(x) + kLogistic(-x), 1.0, 1e-15) << x;
  }
}

TEST(Logistic, NoOverflowAtExtremes) {
  for (double x : {-700.0, -745.0, 700.0, 745.0}) {
    const double g = kLogistic(x);
    EXPECT_TRUE(std::isfinite(g));
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0);
    EXPECT_TRUE(std::isfinite(kLogistic.LogProb(x)));
    EXPECT_TRUE(std::isfinite(kLogistic.LogComplement(x)));
  }
  EXPECT_NEAR(kLogistic.LogProb(-700.0), -700.0, 1e-12);
}

TEST(Logistic, RejectsNonFinite) {
  EXPECT_THROW(kLogistic(std::nan("")), DomainError);
  EXPECT_THROW(kLogistic(INFINITY), DomainError);
  EXPECT_THROW(kLogistic.Derivative(-INFINITY), DomainError);
}

TEST(Logistic, DerivativeMatchesDifferences) {
  for (double x : {-6.0, -1.0, 0.0, 0.3, 4.0}) {
    const double h = 1e-5;
    const double fd = (kLogistic(x + h) - kLogistic(x - h)) / (2 * h);
    EXPECT_NEAR(kLogistic.Derivative(x), fd, 1e-10) << x;
  }
  EXPECT_EQ(kLogistic.Derivative(0.0), 0.25);
}

TEST(Logistic, LogsAgreeWithDirectEvaluation) {
  for (double x : {-20.0, -2.0, 0.0, 1.5, 20.0}) {
    const long double g = 1.0L / (1.0L + std::exp(-static_cast<long double>(x)));
    EXPECT_NEAR(kLogistic.LogProb(x), static_cast<double>(std::log(g)), 1e-13);
    const long double lx = x;
    EXPECT_NEAR(kLogistic.LogComplement(x),
                static_cast<double>(-std::log1p(std::exp(lx))), 1e-13);
  }
}

TEST(CustomLink, GenericLogisticMatches) {
  const LinkFunction generic = testing::LogisticAsCustom();
  EXPECT_EQ(generic.kind(), LinkFunction::Kind::kCustom);
  for (double x : {-3.0, 0.0, 2.5}) {
    EXPECT_NEAR(generic(x), kLogistic(x), 1e-15);
    EXPECT_NEAR(generic.Derivative(x), kLogistic.Derivative(x), 1e-15);
  }
}

TEST(CustomLink, ShapeIsValidated) {
  const auto log_g = [](double) { return -1.0; };
  // Decreasing.
  EXPECT_THROW(LinkFunction::Custom(
                   [](double x) { return 1.0 / (1.0 + std::exp(x)); },
                   [](double) { return 1.0; }, log_g, log_g),
               DomainError);
  // Increasing but not symmetric about 1/2.
  EXPECT_THROW(LinkFunction::Custom(
                   [](double x) { return 1.0 / (1.0 + std::exp(-x - 0.5)); },
                   [](double) { return 1.0; }, log_g, log_g),
               DomainError);
  // Leaves (0, 1).
  EXPECT_THROW(
      LinkFunction::Custom([](double x) { return 0.5 + 0.1 * x; },
                           [](double) { return 0.1; }, log_g, log_g),
      DomainError);
  EXPECT_THROW(LinkFunction::Custom(nullptr, nullptr, nullptr, nullptr),
               DomainError);
}

TEST(CustomLink, ProbitLikeLinkIsAccepted) {
  const LinkFunction probit = LinkFunction::Custom(
      [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); },
      [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI); },
      [](double x) { return std::log(0.5 * std::erfc(-x / std::sqrt(2.0))); },
      [](double x) { return std::log(0.5 * std::erfc(x / std::sqrt(2.0))); },
      "probit");
  EXPECT_EQ(probit.name(), "probit");
  EXPECT_NEAR(probit(0.0), 0.5, 1e-15);
}

}  // namespace
}  // namespace pairrank
