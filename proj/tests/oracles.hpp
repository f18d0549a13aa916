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

// Brute-force reference implementations the production code is checked
// against. Everything in here goes through a different computational route
// than the library (dense Jacobi SVD, all-pairs scans, straight-from-formula
// scalar loops) and must stay independent of the code under test.

#pragma once

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <vector>

#include "bgsub/core.hpp"
#include "bgsub/rng.hpp"

namespace oracle {

using bgsub::Index;
using bgsub::Matrix;
using bgsub::Vector;

struct FullSvd {
  Matrix u;
  Vector s;
  Matrix v;
};

inline FullSvd fullSvd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

/// argmin_X tau*|X|_* + 1/2 |X - M|_F^2 evaluated through the full SVD.
inline Matrix proxNuclear(const Matrix& m, double tau) {
  const FullSvd svd = fullSvd(m);
  Vector s = (svd.s.array() - tau).cwiseMax(0.0);
  return svd.u * s.asDiagonal() * svd.v.transpose();
}

inline double nuclearNorm(const Matrix& m) { return fullSvd(m).s.sum(); }

/// Prox objective tau*|X|_* + 1/2 |X - M|_F^2.
inline double proxObjective(const Matrix& x, const Matrix& m, double tau) {
  return tau * nuclearNorm(x) + 0.5 * (x - m).squaredNorm();
}

/// All-pairs exact Euclidean distance to the nearest true pixel.
/// Row-major pixel order, width w, height h.
inline std::vector<double> bruteForceDistance(const std::vector<bool>& g,
                                              int w, int h) {
  std::vector<double> d(g.size(),
                        std::numeric_limits<double>::infinity());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx)
          if (g[size_t(yy) * w + xx]) {
            const double dd = double(x - xx) * (x - xx) +
                              double(y - yy) * (y - yy);
            best = std::min(best, dd);
          }
      d[size_t(y) * w + x] = std::sqrt(best);
    }
  return d;
}

// --------------------------------------------------------------------------
// seeded instance builders
// --------------------------------------------------------------------------

inline Matrix randomMatrix(Index rows, Index cols, std::uint64_t seed) {
  bgsub::Rng rng(seed);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

inline Matrix randomLowRank(Index rows, Index cols, Index rank,
                            std::uint64_t seed, double noise = 0.0) {
  bgsub::Rng rng(seed);
  Matrix a(rows, rank), b(rank, cols);
  for (Index j = 0; j < rank; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = rng.normal();
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rank; ++i) b(i, j) = rng.normal();
  Matrix m = a * b;
  if (noise > 0.0)
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) += noise * rng.normal();
  return m;
}

// --------------------------------------------------------------------------
// naive straight-from-formula metric references (independent of
// bgsub/metrics.hpp internals: two-pass statistics, brute-force distances)
// --------------------------------------------------------------------------

using MaskFrame = std::vector<std::uint8_t>;

inline double naiveFMeasureFrame(const MaskFrame& f, const MaskFrame& g) {
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    const bool a = f[i] != 0, b = g[i] != 0;
    tp += (a && b);
    fp += (a && !b);
    fn += (!a && b);
    tn += (!a && !b);
  }
  const auto ratio = [](double n, double d) { return d == 0 ? 1.0 : n / d; };
  const double rec = 0.5 * (ratio(tp, tp + fn) + ratio(tn, tn + fp));
  const double prec = 0.5 * (ratio(tp, tp + fp) + ratio(tn, tn + fn));
  return prec + rec == 0 ? 0.0 : 2 * prec * rec / (prec + rec);
}

inline double naivePsnrFrame(const MaskFrame& f, const MaskFrame& g) {
  double err = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    const double d = double(f[i] != 0) - double(g[i] != 0);
    err += d * d;
  }
  if (err == 0) return 100.0;
  return std::min(100.0, 10.0 * std::log10(double(f.size()) / err));
}

// two-pass mean/variance/covariance on 0/255 values
inline double naiveSsimFrame(const MaskFrame& f, const MaskFrame& g) {
  const double n = double(f.size());
  double muF = 0, muG = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    muF += f[i] ? 255.0 : 0.0;
    muG += g[i] ? 255.0 : 0.0;
  }
  muF /= n;
  muG /= n;
  double varF = 0, varG = 0, cov = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    const double a = (f[i] ? 255.0 : 0.0) - muF;
    const double b = (g[i] ? 255.0 : 0.0) - muG;
    varF += a * a;
    varG += b * b;
    cov += a * b;
  }
  varF /= n;
  varG /= n;
  cov /= n;
  const double c1 = 6.5025, c2 = 58.5225;
  return (2 * muF * muG + c1) * (2 * cov + c2) /
         ((muF * muF + muG * muG + c1) * (varF + varG + c2));
}

inline double naiveDScoreFrame(const MaskFrame& f, const MaskFrame& g, int w,
                               int h) {
  std::vector<bool> gt(g.size());
  bool any = false;
  for (size_t i = 0; i < g.size(); ++i) {
    gt[i] = g[i] != 0;
    any = any || gt[i];
  }
  double sum = 0;
  long mistakes = 0;
  std::vector<double> dt;
  if (any) dt = bruteForceDistance(gt, w, h);
  for (size_t i = 0; i < f.size(); ++i) {
    if ((f[i] != 0) == (g[i] != 0)) continue;
    ++mistakes;
    if (!any) continue;  // no reference points: far error, zero score
    const double d = std::max(dt[i], 0.5);
    const double t = std::log2(2.0 * d) - 2.5;
    sum += std::exp(-t * t);
  }
  return mistakes == 0 ? 0.0 : sum / double(mistakes);
}

inline MaskFrame randomMask(int w, int h, double density, std::uint64_t seed) {
  bgsub::Rng rng(seed);
  MaskFrame m(size_t(w) * h);
  for (auto& px : m) px = rng.uniform() < density ? 1 : 0;
  return m;
}

}  // namespace oracle
