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

#include <chrono>
#include <cmath>
#include <optional>
#include <utility>

#include "bgsub/core.hpp"
#include "bgsub/factorization.hpp"
#include "bgsub/fw_solver.hpp"  // SolverReport / IterationRecord
#include "bgsub/shrinkage.hpp"
#include "bgsub/svd.hpp"

namespace bgsub {

/// Inexact augmented Lagrangian parameters. Unset fields resolve to the
/// usual choices: lambda = 1/sqrt(max(n1, n2)), rho0 = 1.25/sigma1(V),
/// rhoMax = 1e7 * rho0.
struct IalmConfig {
  std::optional<double> lambda;
  std::optional<double> rho0;
  double rhoScale = 1.6;
  std::optional<double> rhoMax;
  double primalTol = 1e-7;
  int maxIter = 500;

  void validate() const {
    if (lambda && *lambda <= 0.0) throw ConfigError("ialm: lambda must be > 0");
    if (rho0 && *rho0 <= 0.0) throw ConfigError("ialm: rho0 must be > 0");
    if (rhoScale <= 1.0) throw ConfigError("ialm: rhoScale must be > 1");
    if (primalTol <= 0.0) throw ConfigError("ialm: primalTol must be > 0");
    if (maxIter < 1) throw ConfigError("ialm: maxIter must be >= 1");
  }
};

struct RpcaResult {
  LowRankFactorization B;
  Matrix F;
  SolverReport report;
};

namespace detail {

struct IalmSetup {
  double lambda = 0.0;
  double rho = 0.0;
  double rhoMax = 0.0;
  double sigma1 = 0.0;
  double normV = 0.0;
};

inline IalmSetup resolveIalm(const Matrix& v, const IalmConfig& cfg) {
  IalmSetup s;
  s.normV = v.norm();
  s.lambda = cfg.lambda ? *cfg.lambda
                        : 1.0 / std::sqrt(double(std::max(v.rows(), v.cols())));
  s.sigma1 = topSingularPair(v, 1e-8, 5000).sigma;
  s.rho = cfg.rho0 ? *cfg.rho0 : 1.25 / s.sigma1;
  s.rhoMax = cfg.rhoMax ? *cfg.rhoMax : 1e7 * s.rho;
  return s;
}

inline void recordIalmIteration(SolverReport& report, int iter, double measure,
                                double residual, Index rank,
                                std::chrono::steady_clock::time_point t0) {
  IterationRecord rec;
  rec.iter = iter;
  rec.objective = measure;
  rec.lowerBound = 0.0;
  rec.boundGap = residual;
  rec.rank = rank;
  rec.step = "svt-update";
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report.perIteration.push_back(std::move(rec));
}

}  // namespace detail

/// RPCA baseline:  min |B|_* + lambda |F|_1  s.t.  V = B + F,  by inexact
/// ALM. One svt call (a partial SVD) per iteration; stops when the primal
/// residual |V - B - F|_F / |V|_F reaches primalTol.
inline RpcaResult solveRPCA(const Matrix& v, const IalmConfig& cfg = {}) {
  cfg.validate();
  requireFinite(v, "solveRPCA");
  const auto tStart = std::chrono::steady_clock::now();
  RpcaResult out;
  out.report.termination = TerminationReason::MaxIter;
  detail::IalmSetup s = detail::resolveIalm(v, cfg);
  if (s.sigma1 == 0.0 || s.normV == 0.0) {
    out.B = LowRankFactorization::zero(v.rows(), v.cols());
    out.F = Matrix::Zero(v.rows(), v.cols());
    out.report.termination = TerminationReason::GapTol;
    return out;
  }
  // Dual-feasible start for Y; speeds up the first sweeps.
  Matrix y = v / std::max(s.sigma1, v.cwiseAbs().maxCoeff() / s.lambda);
  Matrix f = Matrix::Zero(v.rows(), v.cols());
  Index rankHint = 8;
  for (int it = 0; it < cfg.maxIter; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    out.B = svt(v - f + y / s.rho, 1.0 / s.rho, rankHint);
    ++out.report.svtCalls;
    rankHint = out.B.rank() + 4;
    const Matrix bDense = out.B.materialize();
    f = softThreshold(v - bDense + y / s.rho, s.lambda / s.rho);
    const Matrix z = v - bDense - f;
    y += s.rho * z;
    const double residual = z.norm() / s.normV;
    detail::recordIalmIteration(out.report, it, residual, residual,
                                out.B.rank(), t0);
    if (residual <= cfg.primalTol) {
      out.report.termination = TerminationReason::GapTol;
      break;
    }
    s.rho = std::min(s.rho * cfg.rhoScale, s.rhoMax);
  }
  out.F = std::move(f);
  out.report.totalSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - tStart)
          .count();
  return out;
}

/// Nuclear-norm-only special case (robust matrix completion over a full
/// observation set):  L(B, Y) = |B|_* + <Y, V - B> + rho/2 |V - B|_F^2.
/// The equality constraint V = B is only met as rho grows, so termination
/// uses the relative iterate change of B instead of the primal residual.
/// F is reported as V - B.
inline RpcaResult solveRMC(const Matrix& v, const IalmConfig& cfg = {}) {
  cfg.validate();
  requireFinite(v, "solveRMC");
  const auto tStart = std::chrono::steady_clock::now();
  RpcaResult out;
  out.report.termination = TerminationReason::MaxIter;
  detail::IalmSetup s = detail::resolveIalm(v, cfg);
  if (s.sigma1 == 0.0 || s.normV == 0.0) {
    out.B = LowRankFactorization::zero(v.rows(), v.cols());
    out.F = Matrix::Zero(v.rows(), v.cols());
    out.report.termination = TerminationReason::GapTol;
    return out;
  }
  Matrix y = Matrix::Zero(v.rows(), v.cols());
  Matrix bDense = Matrix::Zero(v.rows(), v.cols());
  Index rankHint = 8;
  for (int it = 0; it < cfg.maxIter; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    out.B = svt(v + y / s.rho, 1.0 / s.rho, rankHint);
    ++out.report.svtCalls;
    rankHint = out.B.rank() + 4;
    Matrix bNew = out.B.materialize();
    const double denom = std::max(bDense.norm(), 1e-300);
    const double change = (bNew - bDense).norm() / denom;
    bDense = std::move(bNew);
    y += s.rho * (v - bDense);
    const double residual = (v - bDense).norm() / s.normV;
    detail::recordIalmIteration(out.report, it, change, residual,
                                out.B.rank(), t0);
    if (it > 0 && change <= cfg.primalTol) {
      out.report.termination = TerminationReason::GapTol;
      break;
    }
    s.rho = std::min(s.rho * cfg.rhoScale, s.rhoMax);
  }
  out.F = v - bDense;
  out.report.totalSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - tStart)
          .count();
  return out;
}

}  // namespace bgsub
