// Copyright 2026 the bgsub authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bgsub/core.hpp"
#include "bgsub/fw_solver.hpp"
#include "bgsub/ialm_solver.hpp"
#include "bgsub/report.hpp"
#include "bgsub/synthetic.hpp"
#include "bgsub/video.hpp"

namespace bgsub {

/// One benchmark run: input source, solver choice and parameters, mask
/// extraction knobs, and output destinations. Loaded from a flat key=value
/// file; CLI flags override individual keys.
struct RunConfig {
  std::string solver = "frmc";  // frmc | rpca-ialm | rmc-ialm
  std::string input = "synthetic";
  std::string inputFormat = "pgm-dir";  // pgm-dir | raw-planar
  std::string truthDir;                 // optional ground-truth masks
  SyntheticSpec synth;
  FwConfig fw;
  IalmConfig ialm;
  double threshold = 25.0 / 255.0;
  Cleanup cleanup = Cleanup::Median3;
  std::string outDir = "bgsub-out";
  std::string format = "json";  // json | csv
  std::uint64_t seed = 0;
  int repeat = 3;

  void validate() const {
    if (solver != "frmc" && solver != "rpca-ialm" && solver != "rmc-ialm")
      throw ConfigError("unknown solver: " + solver);
    if (inputFormat != "pgm-dir" && inputFormat != "raw-planar")
      throw ConfigError("unknown input format: " + inputFormat);
    if (format != "json" && format != "csv")
      throw ConfigError("unknown report format: " + format);
    if (threshold <= 0.0 || threshold >= 1.0)
      throw ConfigError("threshold must be in (0,1)");
    if (repeat < 1) throw ConfigError("repeat must be >= 1");
    if (input == "synthetic") synth.validate();
    fw.validate();
    ialm.validate();
  }
};

namespace detail {

inline double parseDouble(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::logic_error&) {
    throw ConfigError("bad numeric value for " + key + ": " + value);
  }
}

inline long parseLong(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const long x = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::logic_error&) {
    throw ConfigError("bad integer value for " + key + ": " + value);
  }
}

inline std::optional<double> parseAutoDouble(const std::string& key,
                                             const std::string& value) {
  if (value == "auto") return std::nullopt;
  return parseDouble(key, value);
}

}  // namespace detail

/// Applies one key=value setting. Shared by the config file parser and the
/// CLI flag overrides, so both surfaces accept the same names.
inline void applyConfigKey(RunConfig& cfg, const std::string& key,
                           const std::string& value) {
  using detail::parseAutoDouble;
  using detail::parseDouble;
  using detail::parseLong;
  if (key == "solver") cfg.solver = value;
  else if (key == "input") cfg.input = value;
  else if (key == "input_format") cfg.inputFormat = value;
  else if (key == "truth") cfg.truthDir = value;
  else if (key == "out") cfg.outDir = value;
  else if (key == "format") cfg.format = value;
  else if (key == "seed") cfg.seed = std::uint64_t(parseLong(key, value));
  else if (key == "repeat") cfg.repeat = int(parseLong(key, value));
  else if (key == "threshold") cfg.threshold = parseDouble(key, value);
  else if (key == "cleanup") cfg.cleanup = cleanupFromString(value);
  else if (key == "synth.width") cfg.synth.width = int(parseLong(key, value));
  else if (key == "synth.height") cfg.synth.height = int(parseLong(key, value));
  else if (key == "synth.frames")
    cfg.synth.frameCount = int(parseLong(key, value));
  else if (key == "synth.background_rank")
    cfg.synth.backgroundRank = int(parseLong(key, value));
  else if (key == "synth.block_size")
    cfg.synth.blockSize = int(parseLong(key, value));
  else if (key == "synth.block_intensity")
    cfg.synth.blockIntensity = parseDouble(key, value);
  else if (key == "synth.vel_x") cfg.synth.velX = int(parseLong(key, value));
  else if (key == "synth.vel_y") cfg.synth.velY = int(parseLong(key, value));
  else if (key == "synth.noise_sigma")
    cfg.synth.noiseSigma = parseDouble(key, value);
  else if (key == "fw.delta") cfg.fw.delta = parseAutoDouble(key, value);
  else if (key == "fw.gamma1") cfg.fw.gamma1 = parseDouble(key, value);
  else if (key == "fw.gamma2") cfg.fw.gamma2 = parseDouble(key, value);
  else if (key == "fw.lbar") cfg.fw.lipschitzBound = parseDouble(key, value);
  else if (key == "fw.dbar")
    cfg.fw.diameterBound = parseAutoDouble(key, value);
  else if (key == "fw.max_iter") cfg.fw.maxIter = int(parseLong(key, value));
  else if (key == "fw.gap_tol") cfg.fw.gapTol = parseDouble(key, value);
  else if (key == "fw.step_rule")
    cfg.fw.stepRule = value == "harmonic"
                          ? StepRule::Harmonic
                          : (value == "exact-line-search"
                                 ? StepRule::ExactLineSearch
                                 : throw ConfigError("bad fw.step_rule: " +
                                                     value));
  else if (key == "fw.rank_tol") cfg.fw.rankTol = parseDouble(key, value);
  else if (key == "ialm.lambda") cfg.ialm.lambda = parseAutoDouble(key, value);
  else if (key == "ialm.rho0") cfg.ialm.rho0 = parseAutoDouble(key, value);
  else if (key == "ialm.rho_scale") cfg.ialm.rhoScale = parseDouble(key, value);
  else if (key == "ialm.rho_max")
    cfg.ialm.rhoMax = parseAutoDouble(key, value);
  else if (key == "ialm.primal_tol")
    cfg.ialm.primalTol = parseDouble(key, value);
  else if (key == "ialm.max_iter")
    cfg.ialm.maxIter = int(parseLong(key, value));
  else
    throw ConfigError("unknown config key: " + key);
}

/// Flat key=value file; blank lines and '#' comments ignored.
inline RunConfig loadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  RunConfig cfg;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notSpace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(),
               std::find_if(line.begin(), line.end(), notSpace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notSpace).base(),
               line.end());
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineNo) +
                        ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto strip = [&notSpace](std::string& s) {
      s.erase(s.begin(), std::find_if(s.begin(), s.end(), notSpace));
      s.erase(std::find_if(s.rbegin(), s.rend(), notSpace).base(), s.end());
    };
    strip(key);
    strip(value);
    applyConfigKey(cfg, key, value);
  }
  return cfg;
}

namespace detail {

inline std::string formatDouble(double x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

/// The effective configuration as a sorted key=value echo (solver-agnostic:
/// every key is present regardless of which solver runs).
inline std::map<std::string, std::string> echoConfig(const RunConfig& cfg) {
  std::map<std::string, std::string> e;
  e["solver"] = cfg.solver;
  e["input"] = cfg.input;
  e["input_format"] = cfg.inputFormat;
  e["truth"] = cfg.truthDir;
  e["out"] = cfg.outDir;
  e["format"] = cfg.format;
  e["seed"] = std::to_string(cfg.seed);
  e["repeat"] = std::to_string(cfg.repeat);
  e["threshold"] = formatDouble(cfg.threshold);
  e["cleanup"] = cfg.cleanup == Cleanup::Median3 ? "median3" : "none";
  e["synth.width"] = std::to_string(cfg.synth.width);
  e["synth.height"] = std::to_string(cfg.synth.height);
  e["synth.frames"] = std::to_string(cfg.synth.frameCount);
  e["synth.background_rank"] = std::to_string(cfg.synth.backgroundRank);
  e["synth.block_size"] = std::to_string(cfg.synth.blockSize);
  e["synth.block_intensity"] = formatDouble(cfg.synth.blockIntensity);
  e["synth.vel_x"] = std::to_string(cfg.synth.velX);
  e["synth.vel_y"] = std::to_string(cfg.synth.velY);
  e["synth.noise_sigma"] = formatDouble(cfg.synth.noiseSigma);
  e["fw.delta"] = cfg.fw.delta ? formatDouble(*cfg.fw.delta) : "auto";
  e["fw.gamma1"] = formatDouble(cfg.fw.gamma1);
  e["fw.gamma2"] = formatDouble(cfg.fw.gamma2);
  e["fw.lbar"] = formatDouble(cfg.fw.lipschitzBound);
  e["fw.dbar"] =
      cfg.fw.diameterBound ? formatDouble(*cfg.fw.diameterBound) : "auto";
  e["fw.max_iter"] = std::to_string(cfg.fw.maxIter);
  e["fw.gap_tol"] = formatDouble(cfg.fw.gapTol);
  e["fw.step_rule"] = cfg.fw.stepRule == StepRule::Harmonic
                          ? "harmonic"
                          : "exact-line-search";
  e["fw.rank_tol"] = formatDouble(cfg.fw.rankTol);
  e["ialm.lambda"] =
      cfg.ialm.lambda ? formatDouble(*cfg.ialm.lambda) : "auto";
  e["ialm.rho0"] = cfg.ialm.rho0 ? formatDouble(*cfg.ialm.rho0) : "auto";
  e["ialm.rho_scale"] = formatDouble(cfg.ialm.rhoScale);
  e["ialm.rho_max"] =
      cfg.ialm.rhoMax ? formatDouble(*cfg.ialm.rhoMax) : "auto";
  e["ialm.primal_tol"] = formatDouble(cfg.ialm.primalTol);
  e["ialm.max_iter"] = std::to_string(cfg.ialm.maxIter);
  return e;
}

}  // namespace detail

/// Runs the configured solver `repeat` times on the same input (all runs are
/// deterministic, so only timing varies), extracts foreground masks, scores
/// them against ground truth when available, and writes masks, background
/// frames, and the report under the output directory. Wall time is measured
/// around the solve call only.
inline RunReport runBenchmark(const RunConfig& cfg) {
  cfg.validate();
  RunReport report;
  report.config = detail::echoConfig(cfg);
  report.solverName = cfg.solver;
  report.repeats = cfg.repeat;

  // --- input ---
  Matrix v;
  int width = 0, height = 0;
  std::optional<MaskSequence> truth;
  std::optional<Matrix> trueBackground;
  if (cfg.input == "synthetic") {
    SyntheticScene scene = generateSynthetic(cfg.synth, cfg.seed);
    width = scene.frames.width;
    height = scene.frames.height;
    v = toObservationMatrix(scene.frames);
    truth = std::move(scene.truth);
    trueBackground = std::move(scene.trueBackground);
  } else {
    const FrameSequence seq =
        ingestFrames(cfg.input, cfg.inputFormat == "pgm-dir"
                                    ? FrameFormat::PgmDir
                                    : FrameFormat::RawPlanar);
    width = seq.width;
    height = seq.height;
    v = toObservationMatrix(seq);
    if (!cfg.truthDir.empty()) truth = ingestMasks(cfg.truthDir);
  }

  // --- solve (timed; repeated runs are identical by determinism) ---
  LowRankFactorization b;
  for (int rep = 0; rep < cfg.repeat; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.solver == "frmc") {
      auto [bOut, solverReport] = solveFRMC(v, cfg.fw);
      b = std::move(bOut);
      report.solver = std::move(solverReport);
    } else if (cfg.solver == "rpca-ialm") {
      RpcaResult r = solveRPCA(v, cfg.ialm);
      b = std::move(r.B);
      report.solver = std::move(r.report);
    } else {
      RpcaResult r = solveRMC(v, cfg.ialm);
      b = std::move(r.B);
      report.solver = std::move(r.report);
    }
    report.secondsAll.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count());
  }
  std::vector<double> sorted = report.secondsAll;
  std::sort(sorted.begin(), sorted.end());
  report.secondsMedian = sorted[sorted.size() / 2];
  report.termination = toString(report.solver.termination);

  // --- convergence verdict (used for the CLI exit code) ---
  report.converged = report.solver.termination == TerminationReason::GapTol;
  if (!report.converged && !report.solver.perIteration.empty()) {
    const auto& rows = report.solver.perIteration;
    if (cfg.solver == "frmc") {
      const double scale = std::max(1.0, rows.front().objective);
      report.converged = rows.back().boundGap <= 10.0 * cfg.fw.gapTol * scale;
    } else {
      report.converged = rows.back().objective <= 10.0 * cfg.ialm.primalTol;
    }
  }

  // --- resolved data-derived parameters ---
  if (cfg.solver == "frmc") {
    report.resolved["delta"] =
        cfg.fw.delta ? *cfg.fw.delta
                     : 1.05 * topSingularPair(v, 1e-9, 5000).sigma;
  } else {
    report.resolved["lambda"] =
        cfg.ialm.lambda
            ? *cfg.ialm.lambda
            : 1.0 / std::sqrt(double(std::max(v.rows(), v.cols())));
  }

  // --- masks, metrics, outputs ---
  const MaskSequence masks =
      extractForeground(v, b, width, height, cfg.threshold, cfg.cleanup);
  if (truth) {
    report.metricsReport = metrics::computeMetrics(masks, *truth);
  } else {
    report.warnings.push_back("no-ground-truth");
  }
  if (trueBackground) {
    const double denom = trueBackground->norm();
    if (denom > 0)
      report.backgroundRelError =
          (b.materialize() - *trueBackground).norm() / denom;
  }

  const std::filesystem::path out(cfg.outDir);
  std::filesystem::create_directories(out);
  emitMasks(masks, out / "masks");
  emitFrames(fromObservationMatrix(b.materialize(), width, height),
             out / "background");
  if (cfg.format == "json") {
    std::ofstream f(out / "report.json");
    if (!f) throw IoError("cannot write report under " + cfg.outDir);
    f << toJson(report).dump(2) << "\n";
  } else {
    std::ofstream f(out / "report.csv");
    if (!f) throw IoError("cannot write report under " + cfg.outDir);
    if (report.metricsReport) f << toCsv(*report.metricsReport);
    else f << toCsv(metrics::MetricsReport{});
  }
  return report;
}

}  // namespace bgsub
