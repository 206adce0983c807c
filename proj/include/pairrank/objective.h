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
// Negative log-likelihood of the comparison data, the balancing regularizer
// ||Z_U^T Z_U - Z_V^T Z_V||_F^2 and their gradients.
//
// Every datapoint (u; i, j) touches only three rows of Z: the score is
// <Z_u, Z_i - Z_j> and (A + A^T) Z has row u equal to Z_i - Z_j, row i equal
// to Z_u and row j equal to -Z_u. Nothing here forms an n x n matrix.

#ifndef PAIRRANK_OBJECTIVE_H_
#define PAIRRANK_OBJECTIVE_H_

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "pairrank/core.h"
#include "pairrank/link.h"
#include "pairrank/model.h"

namespace pairrank {

struct ObjectiveConfig {
  double lambda = 0.0;       // weight of (lambda / 4) * regularizer
  double prob_floor = 1e-12;  // probabilities below this are floored in logs
  // Worker threads for the datapoint reduction. 1 is the bit-reproducible
  // sequential path; 0 means std::thread::hardware_concurrency().
  int threads = 1;

  void Validate() const {
    if (!std::isfinite(lambda) || lambda < 0.0) {
      throw ConfigError("lambda must be finite and >= 0");
    }
    if (!(prob_floor > 0.0 && prob_floor < 0.5)) {
      throw ConfigError("prob_floor must lie in (0, 0.5)");
    }
    if (threads < 0) throw ConfigError("threads must be >= 0");
  }

  // lambda = xi * gamma / 4.
  static ObjectiveConfig TheoryDefault(const TheoryConstants& tc) {
    ObjectiveConfig cfg;
    cfg.lambda = tc.xi * tc.gamma / 4.0;
    return cfg;
  }
};

namespace internal {

inline int ResolveThreads(int threads, std::size_t work) {
  int t = threads == 0 ? static_cast<int>(std::thread::hardware_concurrency())
                       : threads;
  t = std::max(t, 1);
  // Below this many datapoints per worker the spawn cost dominates.
  constexpr std::size_t kMinPerThread = 4096;
  const std::size_t cap = std::max<std::size_t>(1, work / kMinPerThread);
  return static_cast<int>(std::min<std::size_t>(t, cap));
}

// Splits [0, size) into contiguous chunks, runs `body(begin, end, acc)` on
// each with its own accumulator and returns the sum in chunk order.
template <typename Acc, typename Body>
Acc ChunkedReduce(std::size_t size, int threads, const Acc& zero,
                  const Body& body) {
  const int workers = ResolveThreads(threads, size);
  if (workers == 1) {
    Acc acc = zero;
    body(std::size_t{0}, size, acc);
    return acc;
  }
  std::vector<Acc> partial(workers, zero);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = size * w / workers;
    const std::size_t end = size * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] { body(begin, end, partial[w]); });
  }
  for (std::thread& t : pool) t.join();
  Acc total = partial[0];
  for (int w = 1; w < workers; ++w) total += partial[w];
  return total;
}

inline void CheckData(const FactorMatrix& z, const Dataset& data) {
  if (!z.Matches(data.dims())) {
    throw DomainError("factor matrix does not match dataset dimensions");
  }
}

// -w log g(x) - (1 - w) log(1 - g(x)) with both probabilities floored.
inline double PointLoss(const LinkFunction& link, double x, double w,
                        double log_floor) {
  double loss = 0.0;
  if (w > 0.0) loss -= w * std::max(link.LogProb(x), log_floor);
  if (w < 1.0) loss -= (1.0 - w) * std::max(link.LogComplement(x), log_floor);
  return loss;
}

// h = g'(x) (g(x) - w) / (g(x) (1 - g(x))); g(x) - w for the logistic link.
inline double PointWeight(const LinkFunction& link, double x, double w) {
  const double gx = link(x);
  if (link.kind() == LinkFunction::Kind::kLogistic) return gx - w;
  return link.Derivative(x) * (gx - w) / (gx * (1.0 - gx));
}

// Adds h (A + A^T) Z for one triplet into `grad`.
inline void AccumulatePoint(const MatrixXd& z, int n1, const Triplet& t,
                            double h, MatrixXd& grad) {
  const int ri = n1 + t.i;
  const int rj = n1 + t.j;
  grad.row(t.u).noalias() += h * (z.row(ri) - z.row(rj));
  grad.row(ri).noalias() += h * z.row(t.u);
  grad.row(rj).noalias() -= h * z.row(t.u);
}

}  // namespace internal

// (1/m) sum_k [-w_k log g(z_k) - (1 - w_k) log(1 - g(z_k))].
inline double Nll(const FactorMatrix& z, const Dataset& data,
                  const LinkFunction& link, const ObjectiveConfig& cfg = {}) {
  internal::CheckData(z, data);
  cfg.Validate();
  const double log_floor = std::log(cfg.prob_floor);
  const auto& points = data.comparisons();
  const double total = internal::ChunkedReduce(
      points.size(), cfg.threads, 0.0,
      [&](std::size_t begin, std::size_t end, double& acc) {
        for (std::size_t k = begin; k < end; ++k) {
          const double x = UtilityDiff(z, points[k].triplet);
          acc += internal::PointLoss(link, x, points[k].w, log_floor);
        }
      });
  return total / static_cast<double>(points.size());
}

// (1/m) sum_k h_k (A_k + A_k^T) Z.
inline FactorMatrix NllGrad(const FactorMatrix& z, const Dataset& data,
                            const LinkFunction& link,
                            const ObjectiveConfig& cfg = {}) {
  internal::CheckData(z, data);
  cfg.Validate();
  const MatrixXd& zm = z.matrix();
  const auto& points = data.comparisons();
  MatrixXd grad = internal::ChunkedReduce(
      points.size(), cfg.threads, MatrixXd::Zero(zm.rows(), zm.cols()).eval(),
      [&](std::size_t begin, std::size_t end, MatrixXd& acc) {
        for (std::size_t k = begin; k < end; ++k) {
          const Triplet& t = points[k].triplet;
          const double x = UtilityDiff(z, t);
          const double h = internal::PointWeight(link, x, points[k].w);
          internal::AccumulatePoint(zm, z.n1(), t, h, acc);
        }
      });
  grad /= static_cast<double>(points.size());
  return FactorMatrix(z.n1(), std::move(grad));
}

// Z^T D Z = Z_U^T Z_U - Z_V^T Z_V with D = diag(I_{n1}, -I_{n2}).
inline MatrixXd BalanceGap(const FactorMatrix& z) {
  return z.users().transpose() * z.users() -
         z.items().transpose() * z.items();
}

// ||Z^T D Z||_F^2.
inline double Regularizer(const FactorMatrix& z) {
  return BalanceGap(z).squaredNorm();
}

// 4 D Z (Z^T D Z).
inline FactorMatrix RegularizerGrad(const FactorMatrix& z) {
  const MatrixXd gap = BalanceGap(z);
  MatrixXd grad = 4.0 * z.matrix() * gap;
  grad.bottomRows(z.n2()) *= -1.0;
  return FactorMatrix(z.n1(), std::move(grad));
}

// f(Z) = Nll(Z) + (lambda / 4) Regularizer(Z).
inline double Objective(const FactorMatrix& z, const Dataset& data,
                        const LinkFunction& link, const ObjectiveConfig& cfg) {
  const double nll = Nll(z, data, link, cfg);
  return cfg.lambda == 0.0 ? nll : nll + 0.25 * cfg.lambda * Regularizer(z);
}

// grad f(Z) = grad Nll(Z) + lambda D Z (Z^T D Z).
inline FactorMatrix ObjectiveGrad(const FactorMatrix& z, const Dataset& data,
                                  const LinkFunction& link,
                                  const ObjectiveConfig& cfg) {
  FactorMatrix grad = NllGrad(z, data, link, cfg);
  if (cfg.lambda != 0.0) {
    grad.mutable_matrix() += 0.25 * cfg.lambda * RegularizerGrad(z).matrix();
  }
  return grad;
}

// The gradient stays a raw matrix so callers can inspect non-finite values
// instead of tripping the FactorMatrix invariant.
struct ValueAndGrad {
  double value = 0.0;
  MatrixXd grad;
};

// Objective and gradient in a single pass over the data.
inline ValueAndGrad ObjectiveValueAndGrad(const FactorMatrix& z,
                                          const Dataset& data,
                                          const LinkFunction& link,
                                          const ObjectiveConfig& cfg) {
  internal::CheckData(z, data);
  cfg.Validate();
  const double log_floor = std::log(cfg.prob_floor);
  const MatrixXd& zm = z.matrix();
  const auto& points = data.comparisons();
  struct Acc {
    double loss;
    MatrixXd grad;
    Acc& operator+=(const Acc& other) {
      loss += other.loss;
      grad += other.grad;
      return *this;
    }
  };
  Acc total = internal::ChunkedReduce(
      points.size(), cfg.threads,
      Acc{0.0, MatrixXd::Zero(zm.rows(), zm.cols())},
      [&](std::size_t begin, std::size_t end, Acc& acc) {
        for (std::size_t k = begin; k < end; ++k) {
          const Triplet& t = points[k].triplet;
          const double x = UtilityDiff(z, t);
          const double w = points[k].w;
          acc.loss += internal::PointLoss(link, x, w, log_floor);
          internal::AccumulatePoint(zm, z.n1(), t,
                                    internal::PointWeight(link, x, w),
                                    acc.grad);
        }
      });
  const double m = static_cast<double>(points.size());
  double value = total.loss / m;
  total.grad /= m;
  if (cfg.lambda != 0.0) {
    const MatrixXd gap = BalanceGap(z);
    value += 0.25 * cfg.lambda * gap.squaredNorm();
    MatrixXd reg = cfg.lambda * zm * gap;
    reg.bottomRows(z.n2()) *= -1.0;
    total.grad += reg;
  }
  return {value, std::move(total.grad)};
}

}  // namespace pairrank

#endif  // PAIRRANK_OBJECTIVE_H_
