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
// pairrank: command-line front end.
//
//   pairrank gen-truth --n1 200 --n2 300 --rank 3 --kappa 1.1 --out z.csv
//   pairrank gen-data --truth z.csv --m 50000 --out data.csv
//   pairrank fit --data data.csv --truth z.csv --init perturb:0.5 --out fit.csv
//   pairrank experiment-fig1 --config fig1.json
//   pairrank experiment-heatmap --config heatmap.json
//   pairrank verify [--only <group>] [--json]
//
// Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
// 3 verification failure.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <Eigen/SVD>

#include "CLI11.hpp"
#include "pairrank/pairrank.h"

namespace pairrank {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;

// PAIRRANK_THREADS caps gradient parallelism; 0 means one per core.
std::optional<int> ThreadsFromEnv() {
  const char* env = std::getenv("PAIRRANK_THREADS");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0 || v > 4096) {
    throw ConfigError("PAIRRANK_THREADS must be a non-negative integer");
  }
  return static_cast<int>(v);
}

void PrintJsonLine(const Json& j) { std::cout << j.dump() << std::endl; }

struct GenTruthFlags {
  int n1 = 0, n2 = 0, rank = 0;
  double kappa = 1.0;
  std::optional<double> sigma_r;
  std::string profile = "linear";
  std::uint64_t seed = 0;
  std::string out;
};

int GenTruth(const GenTruthFlags& f) {
  SpectrumSpec spec;
  spec.kappa = f.kappa;
  spec.sigma_r = f.sigma_r;
  spec.profile = f.profile == "geometric" ? SpectrumProfile::kGeometric
                                          : SpectrumProfile::kLinear;
  const GroundTruth truth =
      GenGroundTruth(Dimensions(f.n1, f.n2, f.rank), spec, f.seed);
  WriteTruth(f.out, truth, f.seed);
  PrintJsonLine({{"out", f.out},
                 {"mu", truth.mu},
                 {"kappa", truth.kappa},
                 {"sigma", truth.sigma}});
  return kExitOk;
}

struct GenDataFlags {
  std::string truth;
  std::int64_t m = 0;
  std::string mode = "noiseless";
  std::uint64_t seed = 0;
  std::string out;
};

int GenData(const GenDataFlags& f) {
  const GroundTruth truth = ReadTruth(f.truth);
  const NoiseMode mode =
      f.mode == "noisy" ? NoiseMode::kNoisy : NoiseMode::kNoiseless;
  Rng rng(f.seed);
  const Dataset data =
      GenDataset(truth, f.m, LinkFunction::Logistic(), mode, rng);
  WriteDataset(f.out, data,
               {{"mode", ToString(mode)},
                {"seed", f.seed},
                {"link", "logistic"},
                {"truth", f.truth}});
  PrintJsonLine({{"out", f.out}, {"m", f.m}, {"mode", ToString(mode)}});
  return kExitOk;
}

struct FitFlags {
  std::string data;
  std::string optimizer = "pgd";
  std::string eta = "backtracking";
  std::string lambda = "theory";
  int max_iters = 2000;
  double tol = 1e-10;
  std::string init;
  std::string truth;
  std::optional<double> mu;
  bool no_projections = false;
  std::uint64_t seed = 0;
  std::string out;
  std::string trace_out;
};

double ParseRealFlag(const std::string& flag, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(flag + ": expected a number, got '" + value + "'");
}

// Stand-in for the unknown truth: the initial point with the spectrum of
// its own score matrix. Used only to size lambda and the row cap.
GroundTruth ProxyTruth(const FactorMatrix& z0) {
  const MatrixXd x = z0.users() * z0.items().transpose();
  Eigen::BDCSVD<MatrixXd> svd(x);
  std::vector<double> sigma(z0.rank());
  for (int k = 0; k < z0.rank(); ++k) sigma[k] = svd.singularValues()(k);
  if (!(sigma.back() > 0.0)) {
    throw ConfigError("--init is rank deficient; pass --lambda and --mu");
  }
  return MakeGroundTruth(z0, std::move(sigma));
}

FactorMatrix LoadInit(const FitFlags& f, const Dimensions& dims,
                      const std::optional<GroundTruth>& truth) {
  const auto split = f.init.find(':');
  const std::string kind = f.init.substr(0, split);
  if (split != std::string::npos && (kind == "perturb" || kind == "random")) {
    const double v = ParseRealFlag("--init", f.init.substr(split + 1));
    if (kind == "random") return RandomPoint(dims, v, f.seed);
    if (!truth) throw ConfigError("--init perturb:<v> requires --truth");
    return InitPoint(*truth, {v, f.seed});
  }
  FactorMatrix z0 = ReadFactor(f.init);
  if (!z0.Matches(dims)) {
    throw ConfigError("--init matrix shape does not match the dataset");
  }
  return z0;
}

int RunFit(const FitFlags& f) {
  const LinkFunction link = LinkFunction::Logistic();
  std::optional<GroundTruth> truth;
  if (!f.truth.empty()) truth = ReadTruth(f.truth);
  Dataset data = std::filesystem::exists(MetaPathFor(f.data)) || !truth
                     ? ReadDataset(f.data)
                     : ReadDataset(f.data, truth->dims());
  const Dimensions dims = data.dims();
  if (truth && !(truth->dims() == dims)) {
    throw ConfigError("--truth dimensions do not match --data");
  }
  if (f.init.empty() && !truth) {
    throw ConfigError("--init is required without --truth");
  }
  FitFlags flags = f;
  if (flags.init.empty()) flags.init = "perturb:0.5";
  const FactorMatrix z0 = LoadInit(flags, dims, truth);

  OptimConfig cfg;
  cfg.optimizer = ParseOptimizer(f.optimizer);
  if (f.eta == "backtracking") {
    cfg.backtracking = true;
  } else {
    cfg.eta = ParseRealFlag("--eta", f.eta);
  }
  cfg.max_iters = f.max_iters;
  cfg.grad_tol = f.tol;
  cfg.use_projections = !f.no_projections;
  cfg.mu = f.mu;
  cfg.Validate();

  const GroundTruth reference = truth ? *truth : ProxyTruth(z0);
  if (!cfg.mu && !truth && cfg.Projecting()) cfg.mu = reference.mu;
  ObjectiveConfig objcfg;
  if (f.lambda == "theory") {
    objcfg = ObjectiveConfig::TheoryDefault(MakeTheoryConstants(link, reference));
  } else {
    objcfg.lambda = ParseRealFlag("--lambda", f.lambda);
  }
  if (const auto threads = ThreadsFromEnv()) objcfg.threads = *threads;
  objcfg.Validate();

  const FitTrace trace =
      Fit(data, link, cfg, objcfg, z0, truth ? &*truth : nullptr);
  const std::string trace_path =
      f.trace_out.empty()
          ? std::filesystem::path(f.out).replace_extension(".trace.csv").string()
          : f.trace_out;
  WriteTrace(trace_path, trace);
  WriteFactor(f.out, trace.z,
              {{"optimizer", f.optimizer},
               {"lambda", objcfg.lambda},
               {"termination", ToString(trace.reason)}});

  const TraceRecord& last = trace.records.back();
  Json summary = {{"iters", last.t},
                  {"termination", ToString(trace.reason)},
                  {"objective", last.objective},
                  {"grad_norm", last.grad_norm},
                  {"lambda", objcfg.lambda},
                  {"final_eta", trace.final_eta},
                  {"out", f.out},
                  {"trace", trace_path}};
  if (truth) {
    summary["normalized_error"] = *last.normalized_error;
    summary["reconstruction_error"] = ReconstructionError(trace.z, *truth);
  }
  PrintJsonLine(summary);
  return kExitOk;
}

ExperimentConfig LoadExperiment(const std::string& path,
                                const std::string& out_dir) {
  ExperimentConfig cfg = ParseExperimentConfig(ReadJson(path));
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (const auto threads = ThreadsFromEnv()) cfg.threads = *threads;
  return cfg;
}

int RunFig1Command(const std::string& config, const std::string& out_dir) {
  const ExperimentConfig cfg = LoadExperiment(config, out_dir);
  const Fig1Result res = RunFig1(cfg);
  Json cells = Json::array();
  for (const Fig1Cell& c : res.cells) {
    cells.push_back({{"setting", c.Label()},
                     {"final_error", c.final_error},
                     {"iters", c.iters},
                     {"termination", ToString(c.reason)}});
  }
  Json red = Json::object();
  for (const auto& [rank, m] : res.red_curve) red[std::to_string(rank)] = m;
  PrintJsonLine({{"cells", cells}, {"red_curve", red}});
  return kExitOk;
}

int RunHeatmapCommand(const std::string& config, const std::string& out_dir) {
  const ExperimentConfig cfg = LoadExperiment(config, out_dir);
  Json rows = Json::array();
  for (const HeatmapCell& c : RunHeatmap(cfg)) {
    rows.push_back({{"r", c.rank},
                    {"m", c.m},
                    {"mean_error", c.mean_error},
                    {"std_error", c.std_error}});
  }
  PrintJsonLine({{"cells", rows}});
  return kExitOk;
}

int RunVerifyCommand(const VerifyOptions& opts, bool json) {
  const VerifyReport report = RunVerify(opts);
  if (json) {
    PrintJsonLine(report.ToJson());
  } else {
    std::cout << report.ToText();
  }
  if (report.AllPassed()) return kExitOk;
  for (const CheckResult& c : report.checks) {
    if (!c.passed) std::cerr << "failed check: " << c.group << '/' << c.name << '\n';
  }
  return kExitVerify;
}

int Main(int argc, char** argv) {
  CLI::App app{"Low-rank pairwise-comparison model fitting"};
  app.require_subcommand(1);

  GenTruthFlags truth_flags;
  CLI::App* gen_truth = app.add_subcommand("gen-truth", "Sample a planted model");
  gen_truth->add_option("--n1", truth_flags.n1, "Number of users")
      ->required()->check(CLI::PositiveNumber);
  gen_truth->add_option("--n2", truth_flags.n2, "Number of items")
      ->required()->check(CLI::Range(2, 1 << 30));
  gen_truth->add_option("--rank", truth_flags.rank, "Rank r")
      ->required()->check(CLI::PositiveNumber);
  gen_truth->add_option("--kappa", truth_flags.kappa, "Condition number")
      ->check(CLI::Range(1.0, 1e12));
  gen_truth->add_option("--sigma-r", truth_flags.sigma_r,
                        "Smallest singular value (default: keep the draw's)")
      ->check(CLI::PositiveNumber);
  gen_truth->add_option("--profile", truth_flags.profile, "Spectrum shape")
      ->check(CLI::IsMember({"linear", "geometric"}));
  gen_truth->add_option("--seed", truth_flags.seed, "Random seed");
  gen_truth->add_option("--out", truth_flags.out, "Output matrix file")
      ->required();

  GenDataFlags data_flags;
  CLI::App* gen_data = app.add_subcommand("gen-data", "Sample comparisons");
  gen_data->add_option("--truth", data_flags.truth, "Truth matrix file")
      ->required();
  gen_data->add_option("--m", data_flags.m, "Number of comparisons")
      ->required()->check(CLI::PositiveNumber);
  gen_data->add_option("--mode", data_flags.mode, "Outcome model")
      ->check(CLI::IsMember({"noiseless", "noisy"}));
  gen_data->add_option("--seed", data_flags.seed, "Random seed");
  gen_data->add_option("--out", data_flags.out, "Output dataset CSV")
      ->required();

  FitFlags fit_flags;
  CLI::App* fit = app.add_subcommand("fit", "Fit a factor matrix to data");
  fit->add_option("--data", fit_flags.data, "Dataset CSV")->required();
  fit->add_option("--optimizer", fit_flags.optimizer, "pgd, gd or adam")
      ->check(CLI::IsMember({"pgd", "gd", "adam"}));
  fit->add_option("--eta", fit_flags.eta,
                  "Stepsize, Adam learning rate or 'backtracking'");
  fit->add_option("--lambda", fit_flags.lambda,
                  "Regularizer weight or 'theory'");
  fit->add_option("--max-iters", fit_flags.max_iters, "Iteration cap")
      ->check(CLI::PositiveNumber);
  fit->add_option("--tol", fit_flags.tol, "Gradient-norm tolerance")
      ->check(CLI::NonNegativeNumber);
  fit->add_option("--init", fit_flags.init,
                  "Matrix file, perturb:<vartheta> or random:<scale>");
  fit->add_option("--truth", fit_flags.truth, "Truth matrix file");
  fit->add_option("--mu", fit_flags.mu, "Incoherence for the row cap")
      ->check(CLI::Range(1.0, 1e12));
  fit->add_flag("--no-projections", fit_flags.no_projections,
                "Skip both projections");
  fit->add_option("--seed", fit_flags.seed, "Initialization seed");
  fit->add_option("--out", fit_flags.out, "Output matrix file")->required();
  fit->add_option("--trace-out", fit_flags.trace_out,
                  "Trace CSV (default: <out stem>.trace.csv)");

  std::string fig1_config, fig1_out;
  CLI::App* fig1 = app.add_subcommand("experiment-fig1",
                                      "Initialization and sample-size sweeps");
  fig1->add_option("--config", fig1_config, "JSON config")->required();
  fig1->add_option("--out-dir", fig1_out, "Override output_dir");

  std::string heat_config, heat_out;
  CLI::App* heat = app.add_subcommand("experiment-heatmap",
                                      "Rank by sample-size error grid");
  heat->add_option("--config", heat_config, "JSON config")->required();
  heat->add_option("--out-dir", heat_out, "Override output_dir");

  VerifyOptions verify_opts;
  std::string only, fault;
  bool verify_json = false;
  CLI::App* verify = app.add_subcommand("verify", "Run the oracle checks");
  verify->add_option("--only", only, "Run one group")
      ->check(CLI::IsMember(VerifyGroups()));
  verify->add_flag("--json", verify_json, "Machine-readable report");
  verify->add_option("--seed", verify_opts.seed, "Instance seed");
  verify->add_option("--inject-fault", fault, "Test hook")
      ->check(CLI::IsMember({"regularizer-grad-sign"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_truth) return GenTruth(truth_flags);
    if (*gen_data) return GenData(data_flags);
    if (*fit) return RunFit(fit_flags);
    if (*fig1) return RunFig1Command(fig1_config, fig1_out);
    if (*heat) return RunHeatmapCommand(heat_config, heat_out);
    if (*verify) {
      if (!only.empty()) verify_opts.only = only;
      verify_opts.flip_regularizer_grad = !fault.empty();
      return RunVerifyCommand(verify_opts, verify_json);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace pairrank

int main(int argc, char** argv) { return pairrank::Main(argc, argv); }
