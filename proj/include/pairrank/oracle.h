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
// Reference computations for testing: exhaustive enumerations over every
// triplet, closed-form expectations, the vectorized quadratic form of the
// D-operator and the dual sampling matrix.
//
// Brute-force routines have hard size caps and throw SizeError beyond them.
// They are meant to be trusted, not to be fast.

#ifndef PAIRRANK_ORACLE_H_
#define PAIRRANK_ORACLE_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pairrank/core.h"
#include "pairrank/link.h"
#include "pairrank/metrics.h"
#include "pairrank/model.h"
#include "pairrank/objective.h"
#include "pairrank/synth.h"

namespace pairrank {

inline constexpr std::int64_t kMaxEnumeratedTriplets = 1000000;
inline constexpr int kMaxQuadraticDim = 500;

namespace internal {

inline void CheckEnumerable(const Dimensions& dims) {
  if (dims.NumTriplets() > kMaxEnumeratedTriplets) {
    throw SizeError("instance has " + std::to_string(dims.NumTriplets()) +
                    " triplets; brute force is capped at " +
                    std::to_string(kMaxEnumeratedTriplets));
  }
}

inline void CheckQuadraticSize(const Dimensions& dims) {
  if (static_cast<std::int64_t>(dims.n()) * dims.rank() > kMaxQuadraticDim) {
    throw SizeError("n * r exceeds the dense quadratic-form cap of " +
                    std::to_string(kMaxQuadraticDim));
  }
}

// Item-block column means within 1e-8 (relative to ||Z||_F when larger
// than one).
inline void CheckInH(const FactorMatrix& z, const char* what) {
  const double tol = 1e-8 * std::max(1.0, z.matrix().norm());
  if (z.items().colwise().mean().cwiseAbs().maxCoeff() > tol) {
    throw DomainError(std::string(what) + " is not item-centered");
  }
}

// <A + A^T, W Z^T> = <W_u, Z_i - Z_j> + <Z_u, W_i - W_j>.
inline double SymmetricPairing(const FactorMatrix& w, const FactorMatrix& z,
                               const Triplet& t) {
  return w.user(t.u).dot(z.item(t.i) - z.item(t.j)) +
         z.user(t.u).dot(w.item(t.i) - w.item(t.j));
}

// Nonzero entries of a = vec((A + A^T) Z), column-stacked: index col*n+row.
struct SparseColumn {
  std::vector<int> index;
  std::vector<double> value;
};

inline SparseColumn SamplingColumn(const FactorMatrix& z, const Triplet& t) {
  const int n = z.n();
  const int r = z.rank();
  const int ri = z.n1() + t.i;
  const int rj = z.n1() + t.j;
  SparseColumn a;
  a.index.reserve(3 * r);
  a.value.reserve(3 * r);
  for (int c = 0; c < r; ++c) {
    a.index.push_back(c * n + t.u);
    a.value.push_back(z.matrix()(ri, c) - z.matrix()(rj, c));
    a.index.push_back(c * n + ri);
    a.value.push_back(z.matrix()(t.u, c));
    a.index.push_back(c * n + rj);
    a.value.push_back(-z.matrix()(t.u, c));
  }
  return a;
}

inline void AddOuter(const SparseColumn& a, double scale, MatrixXd& s) {
  for (std::size_t p = 0; p < a.index.size(); ++p) {
    for (std::size_t q = 0; q < a.index.size(); ++q) {
      s(a.index[p], a.index[q]) += scale * a.value[p] * a.value[q];
    }
  }
}

}  // namespace internal

// D(Y) = (1/m) sum_k <A_k + A_k^T, Y>^2 for a dense n x n matrix Y.
inline double DOperator(const MatrixXd& y, const Dataset& data) {
  const Dimensions& dims = data.dims();
  if (y.rows() != dims.n() || y.cols() != dims.n()) {
    throw DomainError("D-operator argument must be n x n");
  }
  const int n1 = dims.n1();
  double total = 0.0;
  for (const Comparison& c : data.comparisons()) {
    const Triplet& t = c.triplet;
    const double p = y(t.u, n1 + t.i) - y(t.u, n1 + t.j) + y(n1 + t.i, t.u) -
                     y(n1 + t.j, t.u);
    total += p * p;
  }
  return total / static_cast<double>(data.size());
}

// D(W Z^T) from the factors, touching three rows of each per datapoint.
inline double DOperator(const FactorMatrix& w, const FactorMatrix& z,
                        const Dataset& data) {
  CheckSameShape(w, z);
  CheckShape(z, data.dims());
  double total = 0.0;
  for (const Comparison& c : data.comparisons()) {
    const double p = internal::SymmetricPairing(w, z, c.triplet);
    total += p * p;
  }
  return total / static_cast<double>(data.size());
}

// Mean of (x_{u,i} - x_{u,j})^2 over every ordered triplet.
inline double ExpectedPairBruteForce(const MatrixXd& x, const Dimensions& dims) {
  if (x.rows() != dims.n1() || x.cols() != dims.n2()) {
    throw DomainError("score matrix must be n1 x n2");
  }
  internal::CheckEnumerable(dims);
  double total = 0.0;
  for (int u = 0; u < dims.n1(); ++u) {
    for (int i = 0; i < dims.n2(); ++i) {
      for (int j = 0; j < dims.n2(); ++j) {
        if (i == j) continue;
        const double d = x(u, i) - x(u, j);
        total += d * d;
      }
    }
  }
  return total / static_cast<double>(dims.NumTriplets());
}

// gamma ||X J||_F^2.
inline double ExpectedPairClosedForm(const MatrixXd& x, const Dimensions& dims) {
  if (x.rows() != dims.n1() || x.cols() != dims.n2()) {
    throw DomainError("score matrix must be n1 x n2");
  }
  const MatrixXd centered = x.colwise() - x.rowwise().mean();
  return Gamma(dims) * centered.squaredNorm();
}

// E[D(Delta Phi^T)] = gamma ||Delta_U Phi_V^T + Phi_U Delta_V^T||_F^2, valid
// when both arguments are item-centered.
inline double ExpectedDDeltaPhi(const FactorMatrix& delta,
                                const FactorMatrix& phi) {
  CheckSameShape(delta, phi);
  internal::CheckInH(delta, "delta");
  internal::CheckInH(phi, "phi");
  const Dimensions dims(phi.n1(), phi.n2(), phi.rank());
  const MatrixXd m = delta.users() * phi.items().transpose() +
                     phi.users() * delta.items().transpose();
  return Gamma(dims) * m.squaredNorm();
}

// The same expectation by averaging <A + A^T, Delta Phi^T>^2 over every
// triplet. No subspace requirement.
inline double ExpectedDDeltaPhiBruteForce(const FactorMatrix& delta,
                                          const FactorMatrix& phi) {
  CheckSameShape(delta, phi);
  const Dimensions dims(phi.n1(), phi.n2(), phi.rank());
  internal::CheckEnumerable(dims);
  double total = 0.0;
  for (const Triplet& t : EnumerateTriplets(dims)) {
    const double p = internal::SymmetricPairing(delta, phi, t);
    total += p * p;
  }
  return total / static_cast<double>(dims.NumTriplets());
}

// S_D = (1/m) sum_k a_k a_k^T with a_k = vec((A_k + A_k^T) Z*).
inline MatrixXd SdMatrix(const Dataset& data, const FactorMatrix& zstar) {
  CheckShape(zstar, data.dims());
  internal::CheckQuadraticSize(data.dims());
  const int nr = zstar.n() * zstar.rank();
  MatrixXd s = MatrixXd::Zero(nr, nr);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (const Comparison& c : data.comparisons()) {
    internal::AddOuter(internal::SamplingColumn(zstar, c.triplet), scale, s);
  }
  return s;
}

// E[S] by exhaustive enumeration of the triplets.
inline MatrixXd ExpectedSdMatrix(const FactorMatrix& zstar) {
  const Dimensions dims(zstar.n1(), zstar.n2(), zstar.rank());
  internal::CheckQuadraticSize(dims);
  internal::CheckEnumerable(dims);
  const int nr = zstar.n() * zstar.rank();
  MatrixXd s = MatrixXd::Zero(nr, nr);
  const double scale = 1.0 / static_cast<double>(dims.NumTriplets());
  for (const Triplet& t : EnumerateTriplets(dims)) {
    internal::AddOuter(internal::SamplingColumn(zstar, t), scale, s);
  }
  return s;
}

struct QuadraticCheck {
  double lhs = 0.0;           // D(Delta Phi^T)
  double rhs = 0.0;           // v^T S_D v with v = vec(Delta R^T)
  double v_norm2 = 0.0;       // ||v||_2^2
  double delta_norm2 = 0.0;   // ||Delta||_F^2
};

inline QuadraticCheck SdQuadraticCheck(const Dataset& data,
                                       const GroundTruth& truth,
                                       const FactorMatrix& z) {
  CheckShape(z, data.dims());
  internal::CheckQuadraticSize(data.dims());
  const Alignment align = ProcrustesAlign(z, truth);
  const FactorMatrix delta(z.n1(), align.delta);
  const FactorMatrix phi(z.n1(), truth.zstar.matrix() * align.rotation);
  const MatrixXd rotated = align.delta * align.rotation.transpose();
  const Eigen::Map<const VectorXd> v(rotated.data(), rotated.size());
  const MatrixXd s = SdMatrix(data, truth.zstar);
  QuadraticCheck out;
  out.lhs = DOperator(delta, phi, data);
  out.rhs = v.dot(s * v);
  out.v_norm2 = v.squaredNorm();
  out.delta_norm2 = align.delta.squaredNorm();
  return out;
}

// B_D = (1/m) sum_k e_u (e_i + e_j)^T, an n1 x n2 matrix.
inline MatrixXd DualMatrix(const Dataset& data) {
  const Dimensions& dims = data.dims();
  MatrixXd b = MatrixXd::Zero(dims.n1(), dims.n2());
  for (const Comparison& c : data.comparisons()) {
    b(c.triplet.u, c.triplet.i) += 1.0;
    b(c.triplet.u, c.triplet.j) += 1.0;
  }
  return b / static_cast<double>(data.size());
}

// E[B] = (2 / (n1 n2)) 11^T.
inline MatrixXd DualMean(const Dimensions& dims) {
  return MatrixXd::Constant(dims.n1(), dims.n2(),
                            2.0 / (static_cast<double>(dims.n1()) * dims.n2()));
}

struct ScoreBounds {
  double lhs1 = 0.0;  // |<A, Z Z^T>|
  double rhs1 = 0.0;  // 2 ||Z||_{2,inf}^2
  double lhs2 = 0.0;  // ||(A + A^T) Z||_F^2
  double rhs2 = 0.0;  // 6 ||Z||_{2,inf}^2
};

inline ScoreBounds ScoreBoundsCheck(const FactorMatrix& z, const Triplet& t) {
  CheckTriplet(Dimensions(z.n1(), z.n2(), z.rank()), t);
  const double row_max = RowNormMax(z.matrix());
  ScoreBounds out;
  out.lhs1 = std::abs(UtilityDiff(z, t));
  out.rhs1 = 2.0 * row_max * row_max;
  out.lhs2 = (z.item(t.i) - z.item(t.j)).squaredNorm() +
             2.0 * z.user(t.u).squaredNorm();
  out.rhs2 = 6.0 * row_max * row_max;
  return out;
}

// Central differences of Objective, entry by entry.
inline MatrixXd FiniteDiffGrad(const FactorMatrix& z, const Dataset& data,
                               const LinkFunction& link,
                               const ObjectiveConfig& cfg, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  MatrixXd grad(z.n(), z.rank());
  FactorMatrix probe = z;
  for (int c = 0; c < z.rank(); ++c) {
    for (int r = 0; r < z.n(); ++r) {
      const double saved = probe.matrix()(r, c);
      probe.mutable_matrix()(r, c) = saved + h;
      const double plus = Objective(probe, data, link, cfg);
      probe.mutable_matrix()(r, c) = saved - h;
      const double minus = Objective(probe, data, link, cfg);
      probe.mutable_matrix()(r, c) = saved;
      grad(r, c) = (plus - minus) / (2.0 * h);
    }
  }
  return grad;
}

// ||S_D - E[S]||_2 for a symmetric difference: the largest |eigenvalue|.
inline double SdDeviation(const Dataset& data, const GroundTruth& truth) {
  const MatrixXd diff = SdMatrix(data, truth.zstar) - ExpectedSdMatrix(truth.zstar);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(diff, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

// Every triplet once, with outcomes drawn noiselessly from the truth.
inline Dataset ExhaustiveDataset(const GroundTruth& truth,
                                 const LinkFunction& link) {
  const Dimensions dims = truth.dims();
  internal::CheckEnumerable(dims);
  std::vector<Comparison> points;
  for (const Triplet& t : EnumerateTriplets(dims)) {
    points.push_back({t, link(UtilityDiff(truth.zstar, t))});
  }
  return Dataset(dims, std::move(points));
}

}  // namespace pairrank

#endif  // PAIRRANK_ORACLE_H_
