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
// Self-contained verification suite. Every check generates its own small
// random instances, compares an implementation against an oracle and
// reports the worst discrepancy seen.

#ifndef PAIRRANK_VERIFY_H_
#define PAIRRANK_VERIFY_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pairrank/core.h"
#include "pairrank/io.h"
#include "pairrank/link.h"
#include "pairrank/metrics.h"
#include "pairrank/objective.h"
#include "pairrank/optim.h"
#include "pairrank/oracle.h"
#include "pairrank/synth.h"

namespace pairrank {

inline const std::vector<std::string>& VerifyGroups() {
  static const std::vector<std::string> kGroups = {
      "gradients", "expectations", "quadratic", "scores", "invariance"};
  return kGroups;
}

struct VerifyOptions {
  std::optional<std::string> only;  // restrict to one group
  std::uint64_t seed = 20260415;
  // Test hook: negates the regularizer term of the analytic gradient so the
  // gradient check has something to catch.
  bool flip_regularizer_grad = false;
};

struct CheckResult {
  std::string group;
  std::string name;
  int trials = 0;
  double worst = 0.0;  // largest discrepancy, or smallest margin
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool AllPassed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
  }

  Json ToJson() const {
    Json j;
    j["passed"] = AllPassed();
    j["checks"] = Json::array();
    for (const CheckResult& c : checks) {
      j["checks"].push_back({{"group", c.group},
                             {"name", c.name},
                             {"trials", c.trials},
                             {"worst", c.worst},
                             {"tolerance", c.tolerance},
                             {"passed", c.passed}});
    }
    return j;
  }

  std::string ToText() const {
    std::ostringstream out;
    for (const CheckResult& c : checks) {
      out << (c.passed ? "PASS " : "FAIL ") << c.group << '/' << c.name
          << "  trials=" << c.trials << " worst=" << FormatDouble(c.worst)
          << " tol=" << FormatDouble(c.tolerance) << '\n';
    }
    out << (AllPassed() ? "all checks passed" : "verification FAILED") << '\n';
    return out.str();
  }
};

namespace internal {

inline double RelativeGap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// Small random truth with a unit-scale spectrum.
inline GroundTruth SmallTruth(int n1, int n2, int r, Rng& rng) {
  SpectrumSpec spec;
  spec.sigma_r = 1.0;
  spec.kappa = r == 1 ? 1.0 : 2.0;
  return GenGroundTruth(Dimensions(n1, n2, r), spec, rng());
}

inline Dataset NoisyData(const GroundTruth& truth, int m, Rng& rng) {
  return GenDataset(truth, m, LinkFunction::Logistic(), NoiseMode::kNoisy,
                    rng);
}

inline MatrixXd CenteredItems(MatrixXd z, int n1) {
  CenterItems(z, n1);
  return z;
}

// Records max(worst, value) and passes iff every value stays <= tol.
class Tracker {
 public:
  Tracker(std::string group, std::string name, double tol) {
    result_.group = std::move(group);
    result_.name = std::move(name);
    result_.tolerance = tol;
  }
  void Add(double value) {
    if (std::isnan(value)) value = HUGE_VAL;
    result_.worst =
        result_.trials++ == 0 ? value : std::max(result_.worst, value);
  }
  CheckResult Done() {
    result_.passed = result_.worst <= result_.tolerance;
    return result_;
  }

 private:
  CheckResult result_;
};

inline void GradientChecks(const VerifyOptions& opts, Rng& rng,
                           std::vector<CheckResult>& out) {
  const LinkFunction link = LinkFunction::Logistic();
  Tracker fd("gradients", "objective_grad_vs_central_differences", 1e-6);
  for (int trial = 0; trial < 20; ++trial) {
    const GroundTruth truth = SmallTruth(5, 6, 2, rng);
    const Dataset data = NoisyData(truth, 50, rng);
    const FactorMatrix z = RandomPoint(truth.dims(), 1.0, rng());
    ObjectiveConfig cfg;
    cfg.lambda = trial % 2 == 0 ? 0.0 : 0.1;
    MatrixXd analytic = ObjectiveGrad(z, data, link, cfg).matrix();
    if (opts.flip_regularizer_grad && cfg.lambda != 0.0) {
      analytic -= 0.5 * cfg.lambda * RegularizerGrad(z).matrix();
    }
    const MatrixXd numeric = FiniteDiffGrad(z, data, link, cfg, 1e-6);
    fd.Add((analytic - numeric).norm() / std::max(numeric.norm(), 1e-12));
  }
  out.push_back(fd.Done());

  Tracker stationary("gradients", "gradient_vanishes_at_truth", 1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    const GroundTruth truth = SmallTruth(5, 6, 2, rng);
    const Dataset data = GenDataset(truth, 50, link, NoiseMode::kNoiseless, rng);
    ObjectiveConfig cfg;
    cfg.lambda = 0.1;
    stationary.Add(ObjectiveGrad(truth.zstar, data, link, cfg).matrix().norm());
  }
  out.push_back(stationary.Done());
}

inline void ExpectationChecks(Rng& rng, std::vector<CheckResult>& out) {
  std::uniform_int_distribution<int> pick_n1(1, 4), pick_n2(2, 5);
  std::normal_distribution<double> normal;
  Tracker pair("expectations", "expected_pair_closed_form_vs_enumeration",
               1e-12);
  Tracker dphi("expectations", "expected_d_delta_phi_vs_enumeration", 1e-12);
  for (int trial = 0; trial < 50; ++trial) {
    const int n1 = pick_n1(rng), n2 = pick_n2(rng);
    const int r = std::min({2, n1, n2 - 1});
    const Dimensions dims(n1, n2, r);
    MatrixXd x(n1, n2);
    for (int k = 0; k < x.size(); ++k) x(k) = normal(rng);
    pair.Add(RelativeGap(ExpectedPairClosedForm(x, dims),
                         ExpectedPairBruteForce(x, dims)));
    const FactorMatrix delta(
        n1, CenteredItems(RandomPoint(dims, 1.0, rng()).matrix(), n1));
    const FactorMatrix phi(
        n1, CenteredItems(RandomPoint(dims, 1.0, rng()).matrix(), n1));
    dphi.Add(RelativeGap(ExpectedDDeltaPhi(delta, phi),
                         ExpectedDDeltaPhiBruteForce(delta, phi)));
  }
  out.push_back(pair.Done());
  out.push_back(dphi.Done());

  Tracker dual("expectations", "dual_matrix_exhaustive_equals_mean", 0.0);
  const GroundTruth truth = SmallTruth(5, 6, 2, rng);
  const Dataset all = ExhaustiveDataset(truth, LinkFunction::Logistic());
  dual.Add((DualMatrix(all) - DualMean(truth.dims())).cwiseAbs().maxCoeff());
  out.push_back(dual.Done());

  Tracker mass("expectations", "dual_matrix_entry_sum_is_two", 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    mass.Add(std::abs(DualMatrix(NoisyData(truth, 1 + trial * 7, rng)).sum() -
                      2.0));
  }
  out.push_back(mass.Done());
}

inline void QuadraticChecks(Rng& rng, std::vector<CheckResult>& out) {
  Tracker identity("quadratic", "d_operator_equals_sd_quadratic_form", 1e-10);
  Tracker vnorm("quadratic", "vectorization_preserves_norm", 1e-12);
  for (int trial = 0; trial < 100; ++trial) {
    const GroundTruth truth = SmallTruth(4, 5, 2, rng);
    const Dataset data = NoisyData(truth, 30, rng);
    const FactorMatrix z = RandomPoint(truth.dims(), 1.0, rng());
    const QuadraticCheck q = SdQuadraticCheck(data, truth, z);
    identity.Add(RelativeGap(q.lhs, q.rhs));
    vnorm.Add(RelativeGap(q.v_norm2, q.delta_norm2));
  }
  out.push_back(identity.Done());
  out.push_back(vnorm.Done());
}

// The tracked quantity is the largest lhs - rhs, which must stay <= 0.
inline void ScoreChecks(Rng& rng, std::vector<CheckResult>& out) {
  Tracker first("scores", "utility_difference_bound", 0.0);
  Tracker second("scores", "sampling_operator_row_bound", 0.0);
  std::uniform_real_distribution<double> scale(0.01, 10.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const Dimensions dims(3, 4, 2);
    const FactorMatrix z = RandomPoint(dims, scale(rng), rng());
    const ScoreBounds b = ScoreBoundsCheck(z, SampleTriplet(dims, rng));
    first.Add(b.lhs1 - b.rhs1);
    second.Add(b.lhs2 - b.rhs2);
  }
  out.push_back(first.Done());
  out.push_back(second.Done());
}

inline void InvarianceChecks(Rng& rng, std::vector<CheckResult>& out) {
  const LinkFunction link = LinkFunction::Logistic();
  Tracker rot_nll("invariance", "nll_rotation", 1e-10);
  Tracker rot_reg("invariance", "regularizer_rotation", 1e-10);
  Tracker shift_nll("invariance", "nll_item_shift", 1e-10);
  // Smallest relative change of the regularizer under a shift, negated so
  // that the tracker's "worst" is the least convincing demonstration.
  Tracker shift_reg("invariance", "regularizer_not_shift_invariant", -1e-6);
  Tracker scale_nll("invariance", "nll_invertible_rescaling", 1e-10);
  Tracker clip_idem("invariance", "incoherence_projection_idempotent", 0.0);
  Tracker shift_idem("invariance", "shift_projection_idempotent", 1e-15);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 1000; ++trial) {
    const GroundTruth truth = SmallTruth(5, 6, 2, rng);
    const Dataset data = NoisyData(truth, 40, rng);
    const FactorMatrix z = RandomPoint(truth.dims(), 1.0, rng());
    const double nll = Nll(z, data, link);
    const double reg = Regularizer(z);

    const MatrixXd q = RandomOrthogonal(2, rng);
    const FactorMatrix rotated(z.n1(), z.matrix() * q);
    rot_nll.Add(RelativeGap(Nll(rotated, data, link), nll));
    rot_reg.Add(RelativeGap(Regularizer(rotated), reg));

    MatrixXd shifted = z.matrix();
    const Eigen::RowVector2d c(normal(rng), normal(rng));
    shifted.bottomRows(z.n2()).rowwise() += c;
    const FactorMatrix zs(z.n1(), shifted);
    shift_nll.Add(RelativeGap(Nll(zs, data, link), nll));
    shift_reg.Add(-RelativeGap(Regularizer(zs), reg));

    MatrixXd p(2, 2);
    p << 1.5 + normal(rng) * 0.1, normal(rng) * 0.3, normal(rng) * 0.3,
        0.7 + normal(rng) * 0.1;
    const MatrixXd users = z.users() * p;
    const MatrixXd items = z.items() * p.inverse().transpose();
    scale_nll.Add(RelativeGap(
        Nll(FactorMatrix::FromBlocks(users, items), data, link), nll));

    const double beta = 0.5 * RowNormMax(z.matrix());
    const FactorMatrix once = ProjectIncoherent(z, beta);
    clip_idem.Add((ProjectIncoherent(once, beta).matrix() - once.matrix())
                      .cwiseAbs()
                      .maxCoeff());
    const FactorMatrix centered = ProjectShift(z);
    shift_idem.Add(
        (ProjectShift(centered).matrix() - centered.matrix()).cwiseAbs().maxCoeff());
  }
  for (Tracker* t : {&rot_nll, &rot_reg, &shift_nll, &shift_reg, &scale_nll,
                     &clip_idem, &shift_idem}) {
    out.push_back(t->Done());
  }
}

}  // namespace internal

inline VerifyReport RunVerify(const VerifyOptions& opts = {}) {
  const auto& groups = VerifyGroups();
  if (opts.only &&
      std::find(groups.begin(), groups.end(), *opts.only) == groups.end()) {
    throw ConfigError("unknown check group '" + *opts.only + "'");
  }
  const auto wanted = [&](const char* g) { return !opts.only || *opts.only == g; };
  VerifyReport report;
  // Each group draws from its own stream so that --only does not change the
  // instances a group sees.
  if (wanted("gradients")) {
    Rng rng(DeriveSeed(opts.seed, 0));
    internal::GradientChecks(opts, rng, report.checks);
  }
  if (wanted("expectations")) {
    Rng rng(DeriveSeed(opts.seed, 1));
    internal::ExpectationChecks(rng, report.checks);
  }
  if (wanted("quadratic")) {
    Rng rng(DeriveSeed(opts.seed, 2));
    internal::QuadraticChecks(rng, report.checks);
  }
  if (wanted("scores")) {
    Rng rng(DeriveSeed(opts.seed, 3));
    internal::ScoreChecks(rng, report.checks);
  }
  if (wanted("invariance")) {
    Rng rng(DeriveSeed(opts.seed, 4));
    internal::InvarianceChecks(rng, report.checks);
  }
  return report;
}

}  // namespace pairrank

#endif  // PAIRRANK_VERIFY_H_
