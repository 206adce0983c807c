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
// Experiment harnesses: the initialization / sample-size sweeps and the
// rank-by-samples heatmap. Both are driven by a JSON config whose keys
// mirror the fields of OptimConfig, ObjectiveConfig and SpectrumSpec.

#ifndef PAIRRANK_EXPERIMENTS_H_
#define PAIRRANK_EXPERIMENTS_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pairrank/core.h"
#include "pairrank/io.h"
#include "pairrank/link.h"
#include "pairrank/metrics.h"
#include "pairrank/model.h"
#include "pairrank/objective.h"
#include "pairrank/optim.h"
#include "pairrank/synth.h"

namespace pairrank {

enum class InitKind { kPerturb, kRandom };

struct ExperimentConfig {
  int n1 = 200;
  int n2 = 300;
  std::vector<int> ranks = {3};
  SpectrumSpec spectrum{std::nullopt, 1.1, SpectrumProfile::kLinear};
  NoiseMode mode = NoiseMode::kNoiseless;
  std::vector<std::int64_t> m_grid;
  // Extra sample sizes as multiples of the red curve, rounded up.
  std::vector<double> m_red_curve_multiples;
  std::vector<double> vartheta_grid = {0.5};
  std::vector<std::uint64_t> seeds = {1};
  OptimConfig optim;
  // lambda: explicit value, else gamma * lambda_gamma_multiple, else the
  // theory default xi * gamma / 4.
  std::optional<double> lambda;
  std::optional<double> lambda_gamma_multiple;
  InitKind init = InitKind::kPerturb;
  double init_scale = 0.1;  // random init only
  double c0 = 0.25;
  double delta = 0.05;
  // Incoherence plugged into the red curve. Empty means the achieved one.
  std::optional<double> red_curve_mu;
  std::string output_dir;  // empty disables file output
  int threads = 1;

  void Validate() const {
    static_cast<void>(Dimensions(n1, n2, 1));
    if (ranks.empty()) throw ConfigError("ranks grid is empty");
    for (int r : ranks) static_cast<void>(Dimensions(n1, n2, r));
    if (m_grid.empty() && m_red_curve_multiples.empty()) {
      throw ConfigError("m grid is empty");
    }
    for (std::int64_t m : m_grid) {
      if (m < 1) throw ConfigError("m grid entries must be >= 1");
    }
    for (double q : m_red_curve_multiples) {
      if (!(q > 0.0)) throw ConfigError("red-curve multiples must be > 0");
    }
    if (vartheta_grid.empty()) throw ConfigError("vartheta grid is empty");
    for (double v : vartheta_grid) {
      if (!(v >= 0.0)) throw ConfigError("vartheta must be >= 0");
    }
    if (seeds.empty()) throw ConfigError("seed list is empty");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() !=
        seeds.size()) {
      throw ConfigError("seeds must be distinct");
    }
    if (lambda && !(*lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
    if (lambda_gamma_multiple && !(*lambda_gamma_multiple >= 0.0)) {
      throw ConfigError("lambda_gamma_multiple must be >= 0");
    }
    if (!(init_scale > 0.0)) throw ConfigError("init_scale must be > 0");
    if (!(c0 > 0.0)) throw ConfigError("c0 must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) {
      throw ConfigError("delta must lie in (0, 1)");
    }
    if (red_curve_mu && !(*red_curve_mu >= 1.0)) {
      throw ConfigError("red_curve_mu must be >= 1");
    }
    if (threads < 0) throw ConfigError("threads must be >= 0");
    optim.Validate();
  }
};

namespace internal {

template <typename T>
void ReadOptional(const Json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <typename T>
void ReadIfPresent(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace internal

// Unknown keys are rejected so that typos do not silently fall back to
// defaults.
inline ExperimentConfig ParseExperimentConfig(const Json& j) {
  static const std::set<std::string> kKeys = {
      "n1", "n2", "rank", "ranks", "kappa", "sigma_r", "profile", "mode",
      "m_grid", "m_red_curve_multiples", "vartheta_grid", "seeds",
      "optimizer", "eta", "lr", "max_iters", "epochs", "grad_tol",
      "use_projections", "adam", "lambda", "lambda_gamma_multiple", "init",
      "init_scale", "c0", "delta", "red_curve_mu", "output_dir", "threads"};
  if (!j.is_object()) throw ConfigError("experiment config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig cfg;
  try {
    internal::ReadIfPresent(j, "n1", cfg.n1);
    internal::ReadIfPresent(j, "n2", cfg.n2);
    if (j.contains("rank")) cfg.ranks = {j.at("rank").get<int>()};
    internal::ReadIfPresent(j, "ranks", cfg.ranks);
    internal::ReadIfPresent(j, "kappa", cfg.spectrum.kappa);
    internal::ReadOptional(j, "sigma_r", cfg.spectrum.sigma_r);
    if (j.contains("profile")) {
      const std::string p = j.at("profile").get<std::string>();
      if (p == "linear") {
        cfg.spectrum.profile = SpectrumProfile::kLinear;
      } else if (p == "geometric") {
        cfg.spectrum.profile = SpectrumProfile::kGeometric;
      } else {
        throw ConfigError("profile must be linear or geometric");
      }
    }
    if (j.contains("mode")) {
      const std::string m = j.at("mode").get<std::string>();
      if (m == "noiseless") {
        cfg.mode = NoiseMode::kNoiseless;
      } else if (m == "noisy") {
        cfg.mode = NoiseMode::kNoisy;
      } else {
        throw ConfigError("mode must be noiseless or noisy");
      }
    }
    internal::ReadIfPresent(j, "m_grid", cfg.m_grid);
    internal::ReadIfPresent(j, "m_red_curve_multiples",
                            cfg.m_red_curve_multiples);
    internal::ReadIfPresent(j, "vartheta_grid", cfg.vartheta_grid);
    internal::ReadIfPresent(j, "seeds", cfg.seeds);
    if (j.contains("optimizer")) {
      cfg.optim.optimizer = ParseOptimizer(j.at("optimizer").get<std::string>());
    }
    for (const char* key : {"eta", "lr"}) {
      if (!j.contains(key)) continue;
      const Json& eta = j.at(key);
      if (eta.is_string()) {
        if (eta.get<std::string>() != "backtracking") {
          throw ConfigError("eta must be a number or \"backtracking\"");
        }
        cfg.optim.backtracking = true;
      } else {
        cfg.optim.eta = eta.get<double>();
        cfg.optim.backtracking = false;
      }
    }
    internal::ReadIfPresent(j, "max_iters", cfg.optim.max_iters);
    // One epoch is one full-batch step.
    internal::ReadIfPresent(j, "epochs", cfg.optim.max_iters);
    internal::ReadIfPresent(j, "grad_tol", cfg.optim.grad_tol);
    internal::ReadIfPresent(j, "use_projections", cfg.optim.use_projections);
    if (j.contains("adam")) {
      const Json& a = j.at("adam");
      internal::ReadIfPresent(a, "beta1", cfg.optim.adam.beta1);
      internal::ReadIfPresent(a, "beta2", cfg.optim.adam.beta2);
      internal::ReadIfPresent(a, "epsilon", cfg.optim.adam.epsilon);
    }
    if (j.contains("lambda") && j.at("lambda").is_string()) {
      if (j.at("lambda").get<std::string>() != "theory") {
        throw ConfigError("lambda must be a number or \"theory\"");
      }
    } else {
      internal::ReadOptional(j, "lambda", cfg.lambda);
    }
    internal::ReadOptional(j, "lambda_gamma_multiple",
                           cfg.lambda_gamma_multiple);
    if (j.contains("init")) {
      const std::string init = j.at("init").get<std::string>();
      if (init == "perturb") {
        cfg.init = InitKind::kPerturb;
      } else if (init == "random") {
        cfg.init = InitKind::kRandom;
      } else {
        throw ConfigError("init must be perturb or random");
      }
    }
    internal::ReadIfPresent(j, "init_scale", cfg.init_scale);
    internal::ReadIfPresent(j, "c0", cfg.c0);
    internal::ReadIfPresent(j, "delta", cfg.delta);
    internal::ReadOptional(j, "red_curve_mu", cfg.red_curve_mu);
    internal::ReadIfPresent(j, "output_dir", cfg.output_dir);
    internal::ReadIfPresent(j, "threads", cfg.threads);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

inline double ResolveLambda(const ExperimentConfig& cfg,
                            const TheoryConstants& tc) {
  if (cfg.lambda) return *cfg.lambda;
  if (cfg.lambda_gamma_multiple) return *cfg.lambda_gamma_multiple * tc.gamma;
  return ObjectiveConfig::TheoryDefault(tc).lambda;
}

// c0 (mu r kappa)^2 n log(n / delta) for one truth.
inline double RedCurve(const ExperimentConfig& cfg, const GroundTruth& truth) {
  ProblemScale scale = ProblemScale::FromTruth(truth);
  if (cfg.red_curve_mu) scale.mu = *cfg.red_curve_mu;
  TheoryConstants tc;
  tc.delta = cfg.delta;
  return RecommendedSamples(tc, scale, SampleRule::kRedCurve, cfg.c0);
}

struct Fig1Cell {
  int rank = 0;
  std::int64_t m = 0;
  double vartheta = 0.0;
  std::uint64_t seed = 0;
  double red_curve = 0.0;
  double final_error = 0.0;
  int iters = 0;
  Termination reason = Termination::kMaxIters;
  FitTrace trace;

  std::string Label() const {
    return "r" + std::to_string(rank) + "_m" + std::to_string(m) +
           "_vartheta" + FormatDouble(vartheta) + "_seed" +
           std::to_string(seed);
  }
};

struct Fig1Result {
  std::vector<Fig1Cell> cells;
  // Red-curve sample size per rank, from the first seed's truth.
  std::vector<std::pair<int, double>> red_curve;
};

inline std::vector<std::int64_t> SampleSizes(const ExperimentConfig& cfg,
                                             double red_curve) {
  std::vector<std::int64_t> out = cfg.m_grid;
  for (double q : cfg.m_red_curve_multiples) {
    out.push_back(static_cast<std::int64_t>(std::ceil(q * red_curve)));
  }
  return out;
}

namespace internal {

inline void WriteFig1Summary(const std::string& dir, const Fig1Result& res) {
  const std::string path = (std::filesystem::path(dir) / "summary.csv").string();
  std::ofstream out = OpenForWrite(path);
  out << "setting,final_error,iters\n";
  for (const Fig1Cell& c : res.cells) {
    out << c.Label() << ',' << FormatDouble(c.final_error) << ',' << c.iters
        << '\n';
  }
  for (const auto& [rank, m] : res.red_curve) {
    out << "red_curve_r" << rank << "_m" << FormatDouble(m) << ",,\n";
  }
  Finish(out, path);
}

}  // namespace internal

// Sweeps ranks x seeds x sample sizes x vartheta. Each cell's trace is
// written as soon as it finishes, the summary after every cell.
inline Fig1Result RunFig1(const ExperimentConfig& cfg,
                          const LinkFunction& link = LinkFunction::Logistic()) {
  cfg.Validate();
  Fig1Result res;
  const std::filesystem::path dir(cfg.output_dir);
  for (int r : cfg.ranks) {
    const Dimensions dims(cfg.n1, cfg.n2, r);
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
      const std::uint64_t seed = cfg.seeds[s];
      const GroundTruth truth =
          GenGroundTruth(dims, cfg.spectrum, DeriveSeed(seed, 0));
      const TheoryConstants tc = MakeTheoryConstants(link, truth, cfg.delta);
      const double red = RedCurve(cfg, truth);
      if (s == 0) res.red_curve.emplace_back(r, red);
      ObjectiveConfig objcfg;
      objcfg.lambda = ResolveLambda(cfg, tc);
      objcfg.threads = cfg.threads;
      for (std::int64_t m : SampleSizes(cfg, red)) {
        Rng rng(DeriveSeed(DeriveSeed(seed, 1),
                                  static_cast<std::uint64_t>(m)));
        const Dataset data = GenDataset(truth, m, link, cfg.mode, rng);
        for (double vartheta : cfg.vartheta_grid) {
          const std::uint64_t init_seed = DeriveSeed(seed, 2);
          const FactorMatrix z0 =
              cfg.init == InitKind::kPerturb
                  ? InitPoint(truth, {vartheta, init_seed})
                  : RandomPoint(dims, cfg.init_scale, init_seed);
          FitTrace trace = Fit(data, link, cfg.optim, objcfg, z0, &truth);
          const TraceRecord last = trace.records.back();
          Fig1Cell cell{r,
                        m,
                        vartheta,
                        seed,
                        red,
                        *last.normalized_error,
                        last.t,
                        trace.reason,
                        std::move(trace)};
          if (!cfg.output_dir.empty()) {
            WriteTrace((dir / ("trace_" + cell.Label() + ".csv")).string(),
                       cell.trace);
          }
          res.cells.push_back(std::move(cell));
          if (!cfg.output_dir.empty()) {
            internal::WriteFig1Summary(cfg.output_dir, res);
          }
        }
      }
    }
  }
  return res;
}

struct HeatmapCell {
  int rank = 0;
  std::int64_t m = 0;
  std::vector<double> errors;  // one per seed
  double mean_error = 0.0;
  double std_error = 0.0;  // population standard deviation
};

// Adam without projections from an uninformed start, scored by the
// reconstruction error of X = Z_U Z_V^T.
inline std::vector<HeatmapCell> RunHeatmap(
    const ExperimentConfig& cfg,
    const LinkFunction& link = LinkFunction::Logistic()) {
  cfg.Validate();
  OptimConfig optim = cfg.optim;
  optim.optimizer = Optimizer::kAdam;
  optim.backtracking = false;
  optim.use_projections = false;
  std::vector<HeatmapCell> cells;
  for (int r : cfg.ranks) {
    const Dimensions dims(cfg.n1, cfg.n2, r);
    std::vector<GroundTruth> truths;
    for (std::uint64_t seed : cfg.seeds) {
      truths.push_back(
          GenGroundTruth(dims, cfg.spectrum, DeriveSeed(seed, 0)));
    }
    for (std::int64_t m : SampleSizes(cfg, RedCurve(cfg, truths.front()))) {
      HeatmapCell cell;
      cell.rank = r;
      cell.m = m;
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        const std::uint64_t seed = cfg.seeds[s];
        const GroundTruth& truth = truths[s];
        Rng rng(DeriveSeed(DeriveSeed(seed, 1),
                                  static_cast<std::uint64_t>(m)));
        const Dataset data = GenDataset(truth, m, link, cfg.mode, rng);
        ObjectiveConfig objcfg;
        objcfg.lambda =
            ResolveLambda(cfg, MakeTheoryConstants(link, truth, cfg.delta));
        objcfg.threads = cfg.threads;
        const FactorMatrix z0 =
            cfg.init == InitKind::kRandom
                ? RandomPoint(dims, cfg.init_scale, DeriveSeed(seed, 2))
                : InitPoint(truth, {cfg.vartheta_grid.front(),
                                    DeriveSeed(seed, 2)});
        const FitTrace trace = Fit(data, link, optim, objcfg, z0, nullptr);
        cell.errors.push_back(ReconstructionError(trace.z, truth));
      }
      double sum = 0.0;
      for (double e : cell.errors) sum += e;
      cell.mean_error = sum / cell.errors.size();
      double ss = 0.0;
      for (double e : cell.errors) {
        ss += (e - cell.mean_error) * (e - cell.mean_error);
      }
      cell.std_error = std::sqrt(ss / cell.errors.size());
      cells.push_back(std::move(cell));
    }
  }
  if (!cfg.output_dir.empty()) {
    const std::filesystem::path dir(cfg.output_dir);
    const std::string path = (dir / "heatmap.csv").string();
    std::ofstream out = internal::OpenForWrite(path);
    out << "r,m,mean_error,std_error\n";
    for (const HeatmapCell& c : cells) {
      out << c.rank << ',' << c.m << ',' << FormatDouble(c.mean_error) << ','
          << FormatDouble(c.std_error) << '\n';
    }
    internal::Finish(out, path);
    Json meta;
    meta["optimizer"] = "adam";
    meta["epochs"] = optim.max_iters;
    meta["epoch_definition"] = "one full-batch gradient step";
    meta["lr"] = optim.eta;
    meta["seeds"] = cfg.seeds;
    WriteJson(MetaPathFor(path), meta);
  }
  return cells;
}

}  // namespace pairrank

#endif  // PAIRRANK_EXPERIMENTS_H_
