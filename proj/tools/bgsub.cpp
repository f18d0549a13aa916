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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bgsub/bench.hpp"
#include "bgsub/metrics.hpp"
#include "bgsub/report.hpp"
#include "bgsub/synthetic.hpp"
#include "bgsub/video.hpp"

namespace {

// exit codes: 0 ok, 2 config error, 3 I/O error, 4 solver non-convergence
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNonConverged = 4;

int runCommand(const std::string& configPath,
               const std::optional<std::string>& solver,
               const std::optional<double>& delta,
               const std::optional<double>& lambda,
               const std::optional<double>& threshold,
               const std::optional<long>& seed,
               const std::optional<std::string>& out,
               const std::optional<std::string>& format) {
  bgsub::RunConfig cfg = bgsub::loadRunConfig(configPath);
  if (solver) bgsub::applyConfigKey(cfg, "solver", *solver);
  if (delta) cfg.fw.delta = *delta;
  if (lambda) cfg.ialm.lambda = *lambda;
  if (threshold) cfg.threshold = *threshold;
  if (seed) cfg.seed = std::uint64_t(*seed);
  if (out) cfg.outDir = *out;
  if (format) bgsub::applyConfigKey(cfg, "format", *format);

  const bgsub::RunReport report = bgsub::runBenchmark(cfg);
  std::cout << "solver=" << report.solverName
            << " iterations=" << report.solver.perIteration.size()
            << " termination=" << report.termination
            << " median_seconds=" << report.secondsMedian << "\n";
  if (report.metricsReport) {
    const auto& m = *report.metricsReport;
    std::cout << "f_measure=" << m.fMeasure << " psnr_db=" << m.psnrDb
              << " ssim=" << m.ssim << " d_score=" << m.dScore << "\n";
  }
  if (report.backgroundRelError)
    std::cout << "background_rel_error=" << *report.backgroundRelError << "\n";
  std::cout << "report written to " << cfg.outDir << "\n";
  return report.converged ? kExitOk : kExitNonConverged;
}

int synthCommand(const std::string& specPath, const std::string& outDir) {
  const bgsub::RunConfig cfg = bgsub::loadRunConfig(specPath);
  const bgsub::SyntheticScene scene =
      bgsub::generateSynthetic(cfg.synth, cfg.seed);
  const std::filesystem::path out(outDir);
  bgsub::emitFrames(scene.frames, out / "frames");
  bgsub::emitMasks(scene.truth, out / "truth");
  bgsub::emitFrames(
      bgsub::fromObservationMatrix(scene.trueBackground, scene.frames.width,
                                   scene.frames.height),
      out / "background");
  std::cout << "wrote " << scene.frames.frameCount() << " frames ("
            << scene.frames.width << "x" << scene.frames.height << ") to "
            << outDir << "\n";
  return kExitOk;
}

int evalCommand(const std::string& masksDir, const std::string& truthDir,
                const std::string& format,
                const std::optional<std::string>& outPath) {
  const bgsub::MaskSequence masks = bgsub::ingestMasks(masksDir);
  const bgsub::MaskSequence truth = bgsub::ingestMasks(truthDir);
  const bgsub::metrics::MetricsReport m =
      bgsub::metrics::computeMetrics(masks, truth);
  std::string text;
  if (format == "json")
    text = bgsub::toJson(m).dump(2) + "\n";
  else if (format == "csv")
    text = bgsub::toCsv(m);
  else
    throw bgsub::ConfigError("unknown format: " + format);
  if (outPath) {
    std::ofstream f(*outPath);
    if (!f) throw bgsub::IoError("cannot write " + *outPath);
    f << text;
  } else {
    std::cout << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Video background subtraction via low-rank matrix recovery"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand(
      "run", "run a solver on a video or a synthetic scene");
  std::string configPath;
  std::optional<std::string> solver, out, format;
  std::optional<double> delta, lambda, threshold;
  std::optional<long> seed;
  run->add_option("--config", configPath, "key=value run configuration")
      ->required();
  run->add_option("--solver", solver, "frmc | rpca-ialm | rmc-ialm");
  run->add_option("--delta", delta, "nuclear ball radius override");
  run->add_option("--lambda", lambda, "RPCA sparsity weight override");
  run->add_option("--threshold", threshold, "foreground threshold override");
  run->add_option("--seed", seed, "seed override");
  run->add_option("--out", out, "output directory override");
  run->add_option("--format", format, "report format: json | csv");

  auto* synth = app.add_subcommand(
      "synth", "generate a deterministic synthetic scene");
  std::string specPath, synthOut;
  synth->add_option("--spec", specPath, "key=value synthetic spec")->required();
  synth->add_option("--out", synthOut, "output directory")->required();

  auto* eval = app.add_subcommand(
      "eval", "score mask sequences against ground truth");
  std::string masksDir, truthDir;
  std::string evalFormat = "json";
  std::optional<std::string> evalOut;
  eval->add_option("--masks", masksDir, "directory of computed masks")
      ->required();
  eval->add_option("--truth", truthDir, "directory of ground-truth masks")
      ->required();
  eval->add_option("--format", evalFormat, "json | csv");
  eval->add_option("--out", evalOut, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed())
      return runCommand(configPath, solver, delta, lambda, threshold, seed,
                        out, format);
    if (synth->parsed()) return synthCommand(specPath, synthOut);
    return evalCommand(masksDir, truthDir, evalFormat, evalOut);
  } catch (const bgsub::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const bgsub::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
