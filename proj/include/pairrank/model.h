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
// Scalar problem parameters: incoherence, condition number, the sampling
// constant gamma, link-function curvature bounds and the derived constants
// used by the convergence analysis.

#ifndef PAIRRANK_MODEL_H_
#define PAIRRANK_MODEL_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "pairrank/core.h"
#include "pairrank/link.h"

namespace pairrank {

// n * ||Z||_{2,inf}^2 / ||Z||_F^2, in [1, n]. Invariant to scaling of Z.
inline double Incoherence(const MatrixXd& z) {
  const double fro2 = z.squaredNorm();
  if (!(fro2 > 0.0)) throw DomainError("incoherence of an all-zero matrix");
  const double row_max = z.rowwise().squaredNorm().maxCoeff();
  return static_cast<double>(z.rows()) * row_max / fro2;
}

inline double Incoherence(const FactorMatrix& z) {
  return Incoherence(z.matrix());
}

inline double ConditionNumber(std::span<const double> sigma) {
  if (sigma.empty()) throw DomainError("empty spectrum");
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (!(sigma[k] > 0.0) || !std::isfinite(sigma[k])) {
      throw DomainError("spectrum must be positive and finite");
    }
    if (k > 0 && sigma[k] > sigma[k - 1]) {
      throw DomainError("spectrum must be sorted in descending order");
    }
  }
  return sigma.front() / sigma.back();
}

// gamma = 2 / (n1 (n2 - 1)): the inverse of half the number of triplets.
inline double Gamma(const Dimensions& dims) {
  if (dims.n2() < 2) throw DomainError("gamma requires n2 >= 2");
  return 2.0 / (static_cast<double>(dims.n1()) * (dims.n2() - 1));
}

// <Z_u, Z_i - Z_j> = <A, Z Z^T> for the triplet's sampling matrix A.
inline double UtilityDiff(const FactorMatrix& z, const Triplet& t) {
  if (t.i == t.j) throw DomainError("triplet items must be distinct");
  return z.user(t.u).dot(z.item(t.i) - z.item(t.j));
}

// Builds a GroundTruth from Z* and the spectrum of X*, deriving mu and kappa.
inline GroundTruth MakeGroundTruth(FactorMatrix zstar, std::vector<double> sigma) {
  if (static_cast<int>(sigma.size()) != zstar.rank()) {
    throw DomainError("spectrum length must equal the rank");
  }
  const double kappa = ConditionNumber(sigma);
  const double mu = Incoherence(zstar);
  return GroundTruth{std::move(zstar), std::move(sigma), mu, kappa};
}

struct LinkBounds {
  double xi = 0.0;  // lower bound on g'(x) g'(y) / (g(x)(1 - g(x)))
  double Xi = 0.0;  // upper bound on the same ratio
};

namespace internal {

// Extremum of f over [-c, c] on a uniform grid of `points` samples, refined
// by golden-section search inside the bracketing grid cells.
template <typename F>
double GridExtremum(const F& f, double c, int points, bool maximize) {
  const auto better = [maximize](double a, double b) {
    return maximize ? a > b : a < b;
  };
  if (c == 0.0) return f(0.0);
  const double h = 2.0 * c / (points - 1);
  int best = 0;
  double best_value = f(-c);
  for (int k = 1; k < points; ++k) {
    const double v = f(-c + k * h);
    if (better(v, best_value)) {
      best_value = v;
      best = k;
    }
  }
  double lo = -c + std::max(best - 1, 0) * h;
  double hi = -c + std::min(best + 1, points - 1) * h;
  constexpr double kInvPhi = 0.6180339887498949;
  for (int iter = 0; iter < 60 && hi - lo > 1e-15 * std::max(1.0, c); ++iter) {
    const double x1 = hi - kInvPhi * (hi - lo);
    const double x2 = lo + kInvPhi * (hi - lo);
    if (better(f(x1), f(x2))) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  const double refined = f(0.5 * (lo + hi));
  return better(refined, best_value) ? refined : best_value;
}

}  // namespace internal

// Bounds xi, Xi of the link curvature ratio over I^2 with I = [-c, c].
//
// The ratio factors as a(x) * b(y) with a = g'/(g(1-g)) and b = g', both
// positive, so its extrema over the square are products of one-dimensional
// extrema. The logistic link has a = 1, giving xi = g'(c) and Xi = 1/4.
inline LinkBounds LinkBoundsOnInterval(const LinkFunction& link, double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw DomainError("interval half-width must be finite and >= 0");
  }
  if (link.kind() == LinkFunction::Kind::kLogistic) {
    return {link.Derivative(c), 0.25};
  }
  constexpr int kGridPoints = 10000;
  const auto a = [&link](double x) {
    const double gx = link(x);
    return link.Derivative(x) / (gx * (1.0 - gx));
  };
  const auto b = [&link](double y) { return link.Derivative(y); };
  const double h = c == 0.0 ? 0.0 : 2.0 * c / (kGridPoints - 1);
  for (int k = 0; k < (c == 0.0 ? 1 : kGridPoints); ++k) {
    if (!(link.Derivative(-c + k * h) > 0.0)) {
      throw DomainError("link derivative must be positive on the interval");
    }
  }
  const double a_min = internal::GridExtremum(a, c, kGridPoints, false);
  const double a_max = internal::GridExtremum(a, c, kGridPoints, true);
  const double b_min = internal::GridExtremum(b, c, kGridPoints, false);
  const double b_max = internal::GridExtremum(b, c, kGridPoints, true);
  const LinkBounds bounds{a_min * b_min, a_max * b_max};
  if (!(bounds.xi > 0.0) || !std::isfinite(bounds.Xi)) {
    throw DomainError("degenerate link bounds");
  }
  return bounds;
}

// Half-width of the score interval: 24 mu ||Z*||_F^2 / n.
inline double ScoreIntervalHalfWidth(const GroundTruth& truth) {
  return 24.0 * truth.mu * truth.zstar.matrix().squaredNorm() /
         truth.zstar.n();
}

inline LinkBounds ComputeLinkBounds(const LinkFunction& link,
                                    const GroundTruth& truth) {
  return LinkBoundsOnInterval(link, ScoreIntervalHalfWidth(truth));
}

// Constants of the convergence analysis.
struct TheoryConstants {
  double gamma = 0.0;
  double xi = 0.0;
  double Xi = 0.0;
  double tau = 0.0;    // xi / Xi
  double alpha = 0.0;  // xi * gamma * sigma_r
  double delta = 0.05;
};

inline TheoryConstants MakeTheoryConstants(const LinkFunction& link,
                                           const GroundTruth& truth,
                                           double delta = 0.05) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("failure probability delta must lie in (0, 1)");
  }
  const LinkBounds bounds = ComputeLinkBounds(link, truth);
  TheoryConstants tc;
  tc.gamma = Gamma(truth.dims());
  tc.xi = bounds.xi;
  tc.Xi = bounds.Xi;
  tc.tau = bounds.xi / bounds.Xi;
  tc.alpha = bounds.xi * tc.gamma * truth.sigma_r();
  tc.delta = delta;
  return tc;
}

// The (mu, r, kappa, n) quadruple that drives sample-size and stepsize
// recommendations.
struct ProblemScale {
  double mu = 1.0;
  int rank = 1;
  double kappa = 1.0;
  int n = 2;

  static ProblemScale FromTruth(const GroundTruth& truth) {
    return {truth.mu, truth.rank(), truth.kappa, truth.zstar.n()};
  }
};

}  // namespace pairrank

#endif  // PAIRRANK_MODEL_H_
