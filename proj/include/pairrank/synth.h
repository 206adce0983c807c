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
// Synthetic planted models and comparison datasets.

#ifndef PAIRRANK_SYNTH_H_
#define PAIRRANK_SYNTH_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "pairrank/core.h"
#include "pairrank/link.h"
#include "pairrank/model.h"

namespace pairrank {

// All generators draw from a 64-bit Mersenne twister.
using Rng = std::mt19937_64;

// SplitMix64 finalizer. Derives independent, reproducible seeds for the
// truth, data and initialization streams of one experiment seed.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum class SpectrumProfile { kLinear, kGeometric };

struct SpectrumSpec {
  // Smallest singular value of X*. When empty, the r-th singular value of
  // the centered Gaussian draw is kept and only the shape is imposed.
  std::optional<double> sigma_r;
  double kappa = 1.0;
  SpectrumProfile profile = SpectrumProfile::kLinear;
};

struct InitSpec {
  double vartheta = 0.0;
  std::uint64_t seed = 0;
};

enum class NoiseMode { kNoiseless, kNoisy };

inline std::string ToString(NoiseMode mode) {
  return mode == NoiseMode::kNoiseless ? "noiseless" : "noisy";
}

// Descending spectrum of length r with sigma_1 / sigma_r == kappa exactly.
inline std::vector<double> BuildSpectrum(int r, double sigma_r, double kappa,
                                         SpectrumProfile profile) {
  if (r < 1) throw DomainError("rank must be positive");
  if (!(sigma_r > 0.0) || !std::isfinite(sigma_r)) {
    throw DomainError("sigma_r must be positive and finite");
  }
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
    throw DomainError("kappa must be finite and >= 1");
  }
  if (r == 1 && kappa != 1.0) {
    throw DomainError("a rank-one spectrum has kappa = 1");
  }
  std::vector<double> sigma(r);
  for (int k = 0; k < r; ++k) {
    const double t = r == 1 ? 1.0 : static_cast<double>(k) / (r - 1);
    sigma[k] = profile == SpectrumProfile::kLinear
                   ? sigma_r * (kappa - (kappa - 1.0) * t)
                   : sigma_r * std::pow(kappa, 1.0 - t);
  }
  // Division is not onto the doubles, so sigma_1 / sigma_r == kappa may
  // have no solution for the requested sigma_r. Walk both ends a few ulps
  // until the ratio rounds to kappa exactly.
  for (int db = 0; db < 64; ++db) {
    double bottom = sigma_r;
    const double dir = db % 2 == 0 ? HUGE_VAL : 0.0;
    for (int k = 0; k < (db + 1) / 2; ++k) bottom = std::nextafter(bottom, dir);
    double top = bottom * kappa;
    for (int nudge = 0; nudge < 8 && top / bottom != kappa; ++nudge) {
      top = std::nextafter(top, top / bottom < kappa ? HUGE_VAL : 0.0);
    }
    if (top / bottom == kappa) {
      sigma[0] = top;
      sigma[r - 1] = bottom;
      if (r == 1) sigma[0] = bottom;
      return sigma;
    }
  }
  throw DomainError("cannot represent the requested condition number");
  return sigma;
}

// Gaussian planted model: draw M with iid N(0, 1) entries, right-center it
// (M J with J = I - 11^T / n2, which keeps every right singular vector
// orthogonal to 1), take the rank-r SVD and replace its singular values by
// the requested spectrum. Z* = (U*; V*) Sigma*^{1/2}.
inline GroundTruth GenGroundTruth(const Dimensions& dims,
                                  const SpectrumSpec& spec,
                                  std::uint64_t seed) {
  const int r = dims.rank();
  if (r > dims.n2() - 1) {
    throw DomainError("item-centered truth needs rank <= n2 - 1");
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd m(dims.n1(), dims.n2());
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i < m.rows(); ++i) m(i, j) = normal(rng);
  }
  m.colwise() -= m.rowwise().mean();
  Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double sigma_r = spec.sigma_r.value_or(svd.singularValues()(r - 1));
  if (!spec.sigma_r && !(sigma_r > 1e-12)) sigma_r = 1.0;
  const std::vector<double> sigma =
      BuildSpectrum(r, sigma_r, spec.kappa, spec.profile);
  VectorXd root(r);
  for (int k = 0; k < r; ++k) root(k) = std::sqrt(sigma[k]);
  MatrixXd users = svd.matrixU().leftCols(r) * root.asDiagonal();
  MatrixXd items = svd.matrixV().leftCols(r) * root.asDiagonal();
  // Remove the O(eps) residual mean left by the SVD.
  items.rowwise() -= items.colwise().mean();
  return MakeGroundTruth(FactorMatrix::FromBlocks(users, items), sigma);
}

// u uniform on [0, n1); (i, j) uniform over the n2 (n2 - 1) ordered pairs.
inline Triplet SampleTriplet(const Dimensions& dims, Rng& rng) {
  std::uniform_int_distribution<int> user(0, dims.n1() - 1);
  std::uniform_int_distribution<int> first(0, dims.n2() - 1);
  std::uniform_int_distribution<int> second(0, dims.n2() - 2);
  Triplet t;
  t.u = user(rng);
  t.i = first(rng);
  t.j = second(rng);
  if (t.j >= t.i) ++t.j;
  return t;
}

inline Dataset GenDataset(const GroundTruth& truth, std::int64_t m,
                          const LinkFunction& link, NoiseMode mode, Rng& rng) {
  if (m < 1) throw DomainError("dataset size must be >= 1");
  const Dimensions dims = truth.dims();
  std::vector<Comparison> comparisons;
  comparisons.reserve(static_cast<std::size_t>(m));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::int64_t k = 0; k < m; ++k) {
    const Triplet t = SampleTriplet(dims, rng);
    const double p = link(UtilityDiff(truth.zstar, t));
    const double w =
        mode == NoiseMode::kNoiseless ? p : (unit(rng) < p ? 1.0 : 0.0);
    comparisons.push_back({t, w});
  }
  return Dataset(dims, std::move(comparisons));
}

// Every ordered triplet exactly once, in (u, i, j) lexicographic order.
inline std::vector<Triplet> EnumerateTriplets(const Dimensions& dims) {
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(dims.NumTriplets()));
  for (int u = 0; u < dims.n1(); ++u) {
    for (int i = 0; i < dims.n2(); ++i) {
      for (int j = 0; j < dims.n2(); ++j) {
        if (i != j) out.push_back({u, i, j});
      }
    }
  }
  return out;
}

namespace internal {

inline MatrixXd GaussianMatrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd out(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

// (N1; J N2) with iid standard normal N1, N2.
inline MatrixXd CenteredNoise(int n1, int n2, int r, Rng& rng) {
  MatrixXd users = GaussianMatrix(n1, r, rng);
  MatrixXd items = GaussianMatrix(n2, r, rng);
  items.rowwise() -= items.colwise().mean();
  MatrixXd out(n1 + n2, r);
  out << users, items;
  return out;
}

}  // namespace internal

// Z0 = Z* + vartheta (N1; J N2). Stays in the item-centered subspace.
inline FactorMatrix InitPoint(const GroundTruth& truth, const InitSpec& spec) {
  if (!(spec.vartheta >= 0.0) || !std::isfinite(spec.vartheta)) {
    throw DomainError("vartheta must be finite and >= 0");
  }
  if (spec.vartheta == 0.0) return truth.zstar;
  Rng rng(spec.seed);
  const Dimensions dims = truth.dims();
  MatrixXd z = truth.zstar.matrix() +
               spec.vartheta *
                   internal::CenteredNoise(dims.n1(), dims.n2(), dims.rank(), rng);
  return FactorMatrix(dims.n1(), std::move(z));
}

// Haar-distributed r x r orthogonal matrix: QR of a Gaussian with the signs
// of diag(R) folded into Q.
inline MatrixXd RandomOrthogonal(int r, Rng& rng) {
  if (r < 1) throw DomainError("rotation size must be positive");
  const MatrixXd g = internal::GaussianMatrix(r, r, rng);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ();
  const MatrixXd rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < r; ++k) {
    if (rr(k, k) < 0.0) q.col(k) *= -1.0;
  }
  return q;
}

// scale * (N1; J N2), an uninformed start.
inline FactorMatrix RandomPoint(const Dimensions& dims, double scale,
                                std::uint64_t seed) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("random init scale must be positive");
  }
  Rng rng(seed);
  return FactorMatrix(dims.n1(), scale * internal::CenteredNoise(
                                             dims.n1(), dims.n2(),
                                             dims.rank(), rng));
}

}  // namespace pairrank

#endif  // PAIRRANK_SYNTH_H_
