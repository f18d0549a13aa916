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

#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bgsub/fw_solver.hpp"
#include "bgsub/metrics.hpp"

namespace bgsub {

inline constexpr int kReportSchemaVersion = 1;

/// Everything one benchmark run produces. Serialized as JSON (round-trip
/// safe) or CSV (per-frame metric rows plus an aggregate row).
struct RunReport {
  int schemaVersion = kReportSchemaVersion;
  std::map<std::string, std::string> config;     // effective key=value echo
  std::string solverName;
  std::string termination;
  std::map<std::string, double> resolved;        // data-derived parameters
  SolverReport solver;
  int repeats = 0;
  double secondsMedian = 0.0;
  std::vector<double> secondsAll;
  std::optional<metrics::MetricsReport> metricsReport;
  std::optional<double> backgroundRelError;      // synthetic runs only
  bool converged = true;
  std::vector<std::string> warnings;

  bool operator==(const RunReport& o) const {
    auto frameEq = [](const metrics::FrameMetrics& a,
                      const metrics::FrameMetrics& b) {
      return a.fMeasure == b.fMeasure && a.psnrDb == b.psnrDb &&
             a.ssim == b.ssim && a.dScore == b.dScore;
    };
    if (metricsReport.has_value() != o.metricsReport.has_value()) return false;
    if (metricsReport) {
      const auto& a = *metricsReport;
      const auto& b = *o.metricsReport;
      if (a.fMeasure != b.fMeasure || a.psnrDb != b.psnrDb ||
          a.ssim != b.ssim || a.dScore != b.dScore ||
          a.perFrame.size() != b.perFrame.size())
        return false;
      for (size_t i = 0; i < a.perFrame.size(); ++i)
        if (!frameEq(a.perFrame[i], b.perFrame[i])) return false;
    }
    if (solver.perIteration.size() != o.solver.perIteration.size())
      return false;
    for (size_t i = 0; i < solver.perIteration.size(); ++i) {
      const auto& a = solver.perIteration[i];
      const auto& b = o.solver.perIteration[i];
      if (a.iter != b.iter || a.objective != b.objective ||
          a.lowerBound != b.lowerBound || a.boundGap != b.boundGap ||
          a.rank != b.rank || a.step != b.step || a.face != b.face ||
          a.seconds != b.seconds)
        return false;
    }
    return schemaVersion == o.schemaVersion && config == o.config &&
           solverName == o.solverName && termination == o.termination &&
           resolved == o.resolved && repeats == o.repeats &&
           secondsMedian == o.secondsMedian && secondsAll == o.secondsAll &&
           backgroundRelError == o.backgroundRelError &&
           converged == o.converged && warnings == o.warnings &&
           solver.initialRank == o.solver.initialRank &&
           solver.svtCalls == o.solver.svtCalls &&
           solver.totalSeconds == o.solver.totalSeconds;
  }
};

inline nlohmann::json toJson(const metrics::MetricsReport& m) {
  nlohmann::json j;
  j["f_measure"] = m.fMeasure;
  j["psnr_db"] = m.psnrDb;
  j["ssim"] = m.ssim;
  j["d_score"] = m.dScore;
  j["per_frame"] = nlohmann::json::array();
  for (size_t i = 0; i < m.perFrame.size(); ++i) {
    const auto& fm = m.perFrame[i];
    j["per_frame"].push_back({{"frame", i},
                              {"f_measure", fm.fMeasure},
                              {"psnr_db", fm.psnrDb},
                              {"ssim", fm.ssim},
                              {"d_score", fm.dScore}});
  }
  return j;
}

inline metrics::MetricsReport metricsFromJson(const nlohmann::json& j) {
  metrics::MetricsReport m;
  m.fMeasure = j.at("f_measure").get<double>();
  m.psnrDb = j.at("psnr_db").get<double>();
  m.ssim = j.at("ssim").get<double>();
  m.dScore = j.at("d_score").get<double>();
  for (const auto& row : j.at("per_frame")) {
    metrics::FrameMetrics fm;
    fm.fMeasure = row.at("f_measure").get<double>();
    fm.psnrDb = row.at("psnr_db").get<double>();
    fm.ssim = row.at("ssim").get<double>();
    fm.dScore = row.at("d_score").get<double>();
    m.perFrame.push_back(fm);
  }
  return m;
}

inline nlohmann::json toJson(const RunReport& r) {
  nlohmann::json j;
  j["schema_version"] = r.schemaVersion;
  j["config"] = r.config;
  j["solver"]["name"] = r.solverName;
  j["solver"]["termination"] = r.termination;
  j["solver"]["converged"] = r.converged;
  j["solver"]["iterations"] = r.solver.perIteration.size();
  j["solver"]["initial_rank"] = r.solver.initialRank;
  j["solver"]["svt_calls"] = r.solver.svtCalls;
  j["solver"]["resolved"] = r.resolved;
  j["solver"]["trace"] = nlohmann::json::array();
  for (const auto& row : r.solver.perIteration)
    j["solver"]["trace"].push_back({{"iter", row.iter},
                                    {"objective", row.objective},
                                    {"lower_bound", row.lowerBound},
                                    {"bound_gap", row.boundGap},
                                    {"rank", row.rank},
                                    {"step", row.step},
                                    {"face", row.face},
                                    {"seconds", row.seconds}});
  j["timing"] = {{"repeats", r.repeats},
                 {"seconds_median", r.secondsMedian},
                 {"seconds_all", r.secondsAll},
                 {"solver_total_seconds", r.solver.totalSeconds}};
  if (r.metricsReport) j["metrics"] = toJson(*r.metricsReport);
  if (r.backgroundRelError)
    j["background_rel_error"] = *r.backgroundRelError;
  j["warnings"] = r.warnings;
  return j;
}

inline RunReport runReportFromJson(const nlohmann::json& j) {
  RunReport r;
  r.schemaVersion = j.at("schema_version").get<int>();
  r.config = j.at("config").get<std::map<std::string, std::string>>();
  r.solverName = j.at("solver").at("name").get<std::string>();
  r.termination = j.at("solver").at("termination").get<std::string>();
  r.converged = j.at("solver").at("converged").get<bool>();
  r.solver.initialRank = j.at("solver").at("initial_rank").get<Index>();
  r.solver.svtCalls = j.at("solver").at("svt_calls").get<int>();
  r.resolved =
      j.at("solver").at("resolved").get<std::map<std::string, double>>();
  for (const auto& row : j.at("solver").at("trace")) {
    IterationRecord rec;
    rec.iter = row.at("iter").get<int>();
    rec.objective = row.at("objective").get<double>();
    rec.lowerBound = row.at("lower_bound").get<double>();
    rec.boundGap = row.at("bound_gap").get<double>();
    rec.rank = row.at("rank").get<Index>();
    rec.step = row.at("step").get<std::string>();
    rec.face = row.at("face").get<std::string>();
    rec.seconds = row.at("seconds").get<double>();
    r.solver.perIteration.push_back(std::move(rec));
  }
  r.solver.termination = r.termination == "gap-tol"
                             ? TerminationReason::GapTol
                             : TerminationReason::MaxIter;
  r.repeats = j.at("timing").at("repeats").get<int>();
  r.secondsMedian = j.at("timing").at("seconds_median").get<double>();
  r.secondsAll = j.at("timing").at("seconds_all").get<std::vector<double>>();
  r.solver.totalSeconds =
      j.at("timing").at("solver_total_seconds").get<double>();
  if (j.contains("metrics")) r.metricsReport = metricsFromJson(j.at("metrics"));
  if (j.contains("background_rel_error"))
    r.backgroundRelError = j.at("background_rel_error").get<double>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

/// CSV: header, one row per frame, then an aggregate row. Field names are
/// stable: frame,f_measure,psnr_db,ssim,d_score.
inline std::string toCsv(const metrics::MetricsReport& m) {
  std::ostringstream out;
  out.precision(17);
  out << "frame,f_measure,psnr_db,ssim,d_score\n";
  for (size_t i = 0; i < m.perFrame.size(); ++i) {
    const auto& fm = m.perFrame[i];
    out << i << ',' << fm.fMeasure << ',' << fm.psnrDb << ',' << fm.ssim
        << ',' << fm.dScore << '\n';
  }
  out << "aggregate," << m.fMeasure << ',' << m.psnrDb << ',' << m.ssim << ','
      << m.dScore << '\n';
  return out.str();
}

}  // namespace bgsub
