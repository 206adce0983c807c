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

#ifndef PAIRRANK_METRICS_H_
#define PAIRRANK_METRICS_H_

#include <cmath>

#include <Eigen/SVD>

#include "pairrank/core.h"

namespace pairrank {

// Distance from Z to the rotation class {Z* R : R orthogonal}.
struct Alignment {
  MatrixXd rotation;  // R(Z), r x r orthogonal
  MatrixXd delta;     // Z - Z* R(Z)
  double delta_fro = 0.0;
  double normalized_error = 0.0;  // delta_fro / sqrt(n1 n2)
};

// Orthogonal Procrustes: with Z*^T Z = P S Q^T the minimiser of
// ||Z - Z* R||_F over the full orthogonal group is R = P Q^T.
inline Alignment ProcrustesAlign(const FactorMatrix& z,
                                 const FactorMatrix& zstar) {
  CheckSameShape(z, zstar);
  const MatrixXd cross = zstar.matrix().transpose() * z.matrix();
  Eigen::JacobiSVD<MatrixXd> svd(cross,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
  Alignment out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  out.delta = z.matrix() - zstar.matrix() * out.rotation;
  out.delta_fro = out.delta.norm();
  out.normalized_error =
      out.delta_fro / std::sqrt(static_cast<double>(z.n1()) * z.n2());
  return out;
}

inline Alignment ProcrustesAlign(const FactorMatrix& z,
                                 const GroundTruth& truth) {
  return ProcrustesAlign(z, truth.zstar);
}

// ||Delta(Z)||_F / sqrt(n1 n2).
inline double NormalizedError(const FactorMatrix& z, const GroundTruth& truth) {
  return ProcrustesAlign(z, truth).normalized_error;
}

// Z lies in B(epsilon) iff ||Delta(Z)||_F^2 <= epsilon * sigma_r.
inline bool InBall(const FactorMatrix& z, const GroundTruth& truth,
                   double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("ball radius must be positive");
  const double d = ProcrustesAlign(z, truth).delta_fro;
  return d * d <= epsilon * truth.sigma_r();
}

// ||Z_U Z_V^T - X*||_F / sqrt(n1 n2).
inline double ReconstructionError(const FactorMatrix& z,
                                  const GroundTruth& truth) {
  CheckSameShape(z, truth.zstar);
  const MatrixXd diff =
      z.users() * z.items().transpose() - truth.Scores();
  return diff.norm() / std::sqrt(static_cast<double>(z.n1()) * z.n2());
}

}  // namespace pairrank

#endif  // PAIRRANK_METRICS_H_
