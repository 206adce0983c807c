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
// Projected gradient descent on the regularized likelihood, plus the plain
// gradient and Adam variants, and the stepsize / sample-size
// recommendations of the convergence analysis.
//
// One projected step is
//
//   Z <- P_H(P_C(Z - eta * grad f(Z)))
//
// where P_C clips every row to l2 norm beta and P_H centers the item block.
// The initial point receives the same double projection before iterating.

#ifndef PAIRRANK_OPTIM_H_
#define PAIRRANK_OPTIM_H_

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pairrank/core.h"
#include "pairrank/link.h"
#include "pairrank/metrics.h"
#include "pairrank/model.h"
#include "pairrank/objective.h"

namespace pairrank {

enum class Optimizer { kPgd, kGd, kAdam };

inline std::string ToString(Optimizer o) {
  switch (o) {
    case Optimizer::kPgd: return "pgd";
    case Optimizer::kGd: return "gd";
    case Optimizer::kAdam: return "adam";
  }
  return "unknown";
}

inline Optimizer ParseOptimizer(const std::string& s) {
  if (s == "pgd") return Optimizer::kPgd;
  if (s == "gd") return Optimizer::kGd;
  if (s == "adam") return Optimizer::kAdam;
  throw ConfigError("unknown optimizer '" + s + "'");
}

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimConfig {
  Optimizer optimizer = Optimizer::kPgd;
  // Fixed stepsize, the first trial step under backtracking, or the Adam
  // learning rate.
  double eta = 1.0;
  bool backtracking = false;
  int max_iters = 2000;
  double grad_tol = 1e-10;
  // Only meaningful for pgd; with projections off pgd is plain descent.
  bool use_projections = true;
  bool project_shift = true;
  AdamParams adam;
  // Armijo sufficient-decrease slope and step adaptation factors.
  double armijo_slope = 1e-4;
  double shrink = 0.5;
  double grow = 2.0;
  // Consecutive shrinks tolerated in one iteration before giving up. Near a
  // stationary point the decrease test drowns in roundoff.
  int max_shrinks = 60;
  // Row cap for P_C. When absent, beta is derived from Z0 and mu.
  std::optional<double> beta;
  // Incoherence used for beta when no ground truth is supplied.
  std::optional<double> mu;

  bool Projecting() const {
    return optimizer == Optimizer::kPgd && use_projections;
  }

  void Validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
      throw ConfigError("stepsize eta must be positive and finite");
    }
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (max_shrinks < 1) throw ConfigError("max_shrinks must be >= 1");
    if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol must be >= 0");
    if (!(shrink > 0.0 && shrink < 1.0) || !(grow >= 1.0)) {
      throw ConfigError("backtracking factors out of range");
    }
    if (beta && !(*beta > 0.0)) throw ConfigError("beta must be positive");
    if (optimizer == Optimizer::kAdam && backtracking) {
      throw ConfigError("backtracking is not defined for adam");
    }
  }
};

// Row cap beta = (4/3) sqrt(mu / n) ||Z0||_F, from the raw initial point.
struct ProjectionParams {
  double beta = std::numeric_limits<double>::infinity();

  static ProjectionParams FromInit(const FactorMatrix& z0, double mu) {
    if (!(mu >= 1.0)) throw ConfigError("incoherence mu must be >= 1");
    ProjectionParams p;
    p.beta = (4.0 / 3.0) * std::sqrt(mu / z0.n()) * z0.matrix().norm();
    if (!(p.beta > 0.0)) throw DomainError("beta must be positive");
    return p;
  }
};

namespace internal {

inline void ClipRows(MatrixXd& z, double beta) {
  for (Eigen::Index k = 0; k < z.rows(); ++k) {
    const double norm = z.row(k).norm();
    if (!(norm > beta)) continue;
    // Rounding can leave the scaled row a hair above beta; shave the factor
    // so that a second clip is the identity.
    double factor = beta / norm;
    for (int tries = 0; tries < 4 && (factor * z.row(k)).norm() > beta;
         ++tries) {
      factor = std::nextafter(factor, 0.0);
    }
    z.row(k) *= factor;
  }
}

inline void CenterItems(MatrixXd& z, int n1) {
  auto items = z.bottomRows(z.rows() - n1);
  items.rowwise() -= items.colwise().mean();
}

}  // namespace internal

// P_C: rows with l2 norm above beta are scaled back onto the sphere.
inline FactorMatrix ProjectIncoherent(const FactorMatrix& z, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  MatrixXd out = z.matrix();
  internal::ClipRows(out, beta);
  return FactorMatrix(z.n1(), std::move(out));
}

// P_H: (U, V) -> (U, J V) with J = I - 11^T / n2.
inline FactorMatrix ProjectShift(const FactorMatrix& z) {
  MatrixXd out = z.matrix();
  internal::CenterItems(out, z.n1());
  return FactorMatrix(z.n1(), std::move(out));
}

inline FactorMatrix ProjectShift(const FactorMatrix& z, const Dimensions& dims) {
  CheckShape(z, dims);
  return ProjectShift(z);
}

// kStepUnderflow: backtracking found no step that strictly lowers the
// objective, which is how runs end once f is flat to rounding.
enum class Termination { kGradTol, kMaxIters, kNonFinite, kStepUnderflow };

inline std::string ToString(Termination t) {
  switch (t) {
    case Termination::kGradTol: return "grad_tol";
    case Termination::kMaxIters: return "max_iters";
    case Termination::kNonFinite: return "non_finite";
    case Termination::kStepUnderflow: return "step_underflow";
  }
  return "unknown";
}

struct TraceRecord {
  int t = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  std::optional<double> normalized_error;  // present iff a truth was given
};

struct FitTrace {
  std::vector<TraceRecord> records;
  FactorMatrix z;  // last finite iterate
  Termination reason = Termination::kMaxIters;
  double final_eta = 0.0;
  double beta = std::numeric_limits<double>::infinity();  // P_C cap used
};

// Runs the configured optimizer from z0. Iteration 0 is the (projected)
// starting point; every recorded iterate is finite.
inline FitTrace Fit(const Dataset& data, const LinkFunction& link,
                    const OptimConfig& cfg, const ObjectiveConfig& objcfg,
                    const FactorMatrix& z0,
                    const GroundTruth* truth = nullptr) {
  cfg.Validate();
  objcfg.Validate();
  CheckShape(z0, data.dims());
  if (truth != nullptr) CheckSameShape(z0, truth->zstar);
  const int n1 = z0.n1();

  double beta = std::numeric_limits<double>::infinity();
  if (cfg.Projecting()) {
    if (cfg.beta) {
      beta = *cfg.beta;
    } else {
      std::optional<double> mu = cfg.mu;
      if (!mu && truth != nullptr) mu = truth->mu;
      if (!mu) throw ConfigError("projection needs mu or a ground truth");
      beta = ProjectionParams::FromInit(z0, *mu).beta;
    }
  }
  const auto project = [&](MatrixXd& z) {
    if (!cfg.Projecting()) return;
    if (std::isfinite(beta)) internal::ClipRows(z, beta);
    if (cfg.project_shift) internal::CenterItems(z, n1);
  };

  MatrixXd z = z0.matrix();
  project(z);

  FitTrace trace{{}, FactorMatrix(n1, z), Termination::kMaxIters, cfg.eta,
                 beta};
  double eta = cfg.eta;
  MatrixXd adam_m, adam_v;
  if (cfg.optimizer == Optimizer::kAdam) {
    adam_m = MatrixXd::Zero(z.rows(), z.cols());
    adam_v = MatrixXd::Zero(z.rows(), z.cols());
  }

  for (int t = 0;; ++t) {
    if (!z.allFinite()) {
      trace.reason = Termination::kNonFinite;
      break;
    }
    const FactorMatrix current(n1, z);
    ValueAndGrad vg;
    try {
      vg = ObjectiveValueAndGrad(current, data, link, objcfg);
    } catch (const DomainError&) {
      // Finite entries whose scores overflow.
      vg.value = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(vg.value) || !vg.grad.allFinite()) {
      if (t == 0) throw DomainError("objective is not finite at the start");
      trace.reason = Termination::kNonFinite;
      break;
    }
    TraceRecord rec;
    rec.t = t;
    rec.objective = vg.value;
    rec.grad_norm = vg.grad.norm();
    if (truth != nullptr) {
      rec.normalized_error = ProcrustesAlign(current, *truth).normalized_error;
    }
    trace.records.push_back(rec);
    trace.z = current;
    if (rec.grad_norm <= cfg.grad_tol) {
      trace.reason = Termination::kGradTol;
      break;
    }
    if (t == cfg.max_iters) {
      trace.reason = Termination::kMaxIters;
      break;
    }

    if (cfg.optimizer == Optimizer::kAdam) {
      const AdamParams& a = cfg.adam;
      adam_m = a.beta1 * adam_m + (1.0 - a.beta1) * vg.grad;
      adam_v = a.beta2 * adam_v +
               (1.0 - a.beta2) * vg.grad.cwiseProduct(vg.grad);
      const double c1 = 1.0 - std::pow(a.beta1, t + 1);
      const double c2 = 1.0 - std::pow(a.beta2, t + 1);
      z.array() -= eta * (adam_m.array() / c1) /
                   ((adam_v.array() / c2).sqrt() + a.epsilon);
      continue;
    }

    if (!cfg.backtracking) {
      z -= eta * vg.grad;
      project(z);
      continue;
    }

    // Armijo backtracking along the projection arc.
    bool accepted = false;
    for (int shrinks = 0; shrinks < cfg.max_shrinks &&
                          eta > std::numeric_limits<double>::min();
         ++shrinks) {
      MatrixXd candidate = z - eta * vg.grad;
      project(candidate);
      if (candidate.allFinite()) {
        double f = std::numeric_limits<double>::quiet_NaN();
        try {
          f = Objective(FactorMatrix(n1, candidate), data, link, objcfg);
        } catch (const DomainError&) {
        }
        const double decrease = vg.grad.cwiseProduct(z - candidate).sum();
        // Near the optimum the sufficient-decrease margin drops below the
        // rounding of f, and equal values would pass the test. Requiring a
        // strict decrease makes a stalled objective end the run instead.
        if (std::isfinite(f) && f < vg.value &&
            f <= vg.value - cfg.armijo_slope * decrease) {
          z = std::move(candidate);
          accepted = true;
          break;
        }
      }
      eta *= cfg.shrink;
    }
    if (!accepted) {
      trace.reason = Termination::kStepUnderflow;
      break;
    }
    trace.final_eta = eta;
    eta *= cfg.grow;
  }
  if (!cfg.backtracking) trace.final_eta = eta;
  return trace;
}

// Largest stepsize allowed by the contraction result:
// eta * alpha <= 2.5e-6 (tau / (mu r kappa))^2.
inline double RecommendedStepsize(const TheoryConstants& tc,
                                  const ProblemScale& scale) {
  if (!(tc.alpha > 0.0)) throw DomainError("alpha must be positive");
  const double ratio = tc.tau / (scale.mu * scale.rank * scale.kappa);
  return 2.5e-6 * ratio * ratio / tc.alpha;
}

enum class SampleRule {
  kTheorem,   // 1e7 (mu r kappa / tau)^2 n log(8 n / delta)
  kRedCurve,  // c0 (mu r kappa)^2 n log(n / delta)
};

// Ceiling of the chosen sample-size formula (natural log). Returned as a
// double because the theorem-mode value can exceed 64-bit range.
inline double RecommendedSamples(const TheoryConstants& tc,
                                 const ProblemScale& scale, SampleRule rule,
                                 double c0 = 0.25) {
  if (!(tc.delta > 0.0 && tc.delta < 1.0)) {
    throw ConfigError("failure probability delta must lie in (0, 1)");
  }
  const double n = scale.n;
  const double mrk = scale.mu * scale.rank * scale.kappa;
  if (rule == SampleRule::kTheorem) {
    if (!(tc.tau > 0.0)) throw DomainError("tau must be positive");
    const double q = mrk / tc.tau;
    return std::ceil(1e7 * q * q * n * std::log(8.0 * n / tc.delta));
  }
  if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
  return std::ceil(c0 * mrk * mrk * n * std::log(n / tc.delta));
}

}  // namespace pairrank

#endif  // PAIRRANK_OPTIM_H_
