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
//
// Shared fixtures for the unit tests. Everything here is deliberately
// naive: dense n x n sampling matrices and explicit loops serve as
// oracles for the sparse library code.

#ifndef PAIRRANK_TESTS_TEST_UTIL_H_
#define PAIRRANK_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <vector>

#include "pairrank/pairrank.h"

namespace pairrank {
namespace testing {

// A = e_u (e_i - e_j)^T embedded in the n x n stacked index space.
inline MatrixXd DenseSamplingMatrix(const Dimensions& dims, const Triplet& t) {
  MatrixXd a = MatrixXd::Zero(dims.n(), dims.n());
  a(t.u, dims.n1() + t.i) = 1.0;
  a(t.u, dims.n1() + t.j) = -1.0;
  return a;
}

inline double Inner(const MatrixXd& a, const MatrixXd& b) {
  return a.cwiseProduct(b).sum();
}

inline MatrixXd GaussianMatrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal;
  MatrixXd m(rows, cols);
  for (int k = 0; k < m.size(); ++k) m(k) = normal(rng);
  return m;
}

inline FactorMatrix GaussianFactor(const Dimensions& dims, Rng& rng,
                                   double scale = 1.0) {
  return FactorMatrix(dims.n1(),
                      scale * GaussianMatrix(dims.n(), dims.rank(), rng));
}

inline GroundTruth UnitTruth(const Dimensions& dims, std::uint64_t seed,
                             double kappa = 1.0) {
  SpectrumSpec spec;
  spec.sigma_r = 1.0;
  spec.kappa = kappa;
  return GenGroundTruth(dims, spec, seed);
}

// The logistic link routed through the generic (custom) code paths.
inline LinkFunction LogisticAsCustom() {
  return LinkFunction::Custom(
      [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double x) {
        const double g = 1.0 / (1.0 + std::exp(-x));
        return g * (1.0 - g);
      },
      [](double x) { return -std::log1p(std::exp(-x)); },
      [](double x) { return -std::log1p(std::exp(x)); }, "logistic-generic");
}

// Binary entropy in nats.
inline double Entropy(double p) {
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

}  // namespace testing
}  // namespace pairrank

#endif  // PAIRRANK_TESTS_TEST_UTIL_H_
