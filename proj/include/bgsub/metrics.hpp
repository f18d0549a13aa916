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

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "bgsub/core.hpp"
#include "bgsub/video.hpp"

namespace bgsub::metrics {

inline constexpr double kPsnrCapDb = 100.0;  // zero-error frames
inline constexpr double kSsimC1 = 6.5025;    // (0.01 * 255)^2
inline constexpr double kSsimC2 = 58.5225;   // (0.03 * 255)^2

struct ConfusionCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  long total() const { return tp + fp + tn + fn; }
};

struct FrameMetrics {
  double fMeasure = 0.0;
  double psnrDb = 0.0;
  double ssim = 0.0;
  double dScore = 0.0;
};

struct MetricsReport {
  double fMeasure = 0.0;
  double psnrDb = 0.0;
  double ssim = 0.0;
  double dScore = 0.0;
  std::vector<FrameMetrics> perFrame;
};

namespace detail {

inline void requireAligned(const MaskSequence& f, const MaskSequence& g) {
  if (f.width != g.width || f.height != g.height ||
      f.frameCount() != g.frameCount())
    throw ConfigError("metrics: mask sequences are not aligned");
}

// ratio with the 0/0 -> 1 convention: a class absent from both masks is in
// perfect agreement
inline double agreementRatio(long num, long denom) {
  return denom == 0 ? 1.0 : double(num) / double(denom);
}

}  // namespace detail

inline ConfusionCounts confusion(const std::vector<std::uint8_t>& f,
                                 const std::vector<std::uint8_t>& g) {
  if (f.size() != g.size())
    throw ConfigError("confusion: frame dimensions differ");
  ConfusionCounts c;
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] && g[i]) ++c.tp;
    else if (f[i] && !g[i]) ++c.fp;
    else if (!f[i] && g[i]) ++c.fn;
    else ++c.tn;
  }
  return c;
}

/// Per-frame F-measure with recall/precision averaged over the positive and
/// negative class, then the harmonic mean of the two averages.
inline double fMeasureFrame(const ConfusionCounts& c) {
  const double recP = detail::agreementRatio(c.tp, c.tp + c.fn);
  const double recN = detail::agreementRatio(c.tn, c.tn + c.fp);
  const double precP = detail::agreementRatio(c.tp, c.tp + c.fp);
  const double precN = detail::agreementRatio(c.tn, c.tn + c.fn);
  const double rec = 0.5 * (recP + recN);
  const double prec = 0.5 * (precP + precN);
  if (prec + rec == 0.0) return 0.0;
  return 2.0 * prec * rec / (prec + rec);
}

inline double psnrFrame(const std::vector<std::uint8_t>& f,
                        const std::vector<std::uint8_t>& g) {
  long err = 0;
  for (size_t i = 0; i < f.size(); ++i) err += (f[i] != g[i]) ? 1 : 0;
  if (err == 0) return kPsnrCapDb;
  return std::min(kPsnrCapDb,
                  10.0 * std::log10(double(f.size()) / double(err)));
}

/// Global (whole-frame) SSIM on values rescaled to 0/255, population
/// variance and covariance; the c1/c2 constants assume 8-bit dynamic range.
inline double ssimFrame(const std::vector<std::uint8_t>& f,
                        const std::vector<std::uint8_t>& g) {
  const double n = double(f.size());
  double sf = 0, sg = 0, sff = 0, sgg = 0, sfg = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    const double a = f[i] ? 255.0 : 0.0;
    const double b = g[i] ? 255.0 : 0.0;
    sf += a;
    sg += b;
    sff += a * a;
    sgg += b * b;
    sfg += a * b;
  }
  const double muF = sf / n, muG = sg / n;
  const double varF = sff / n - muF * muF;
  const double varG = sgg / n - muG * muG;
  const double cov = sfg / n - muF * muG;
  return (2.0 * muF * muG + kSsimC1) * (2.0 * cov + kSsimC2) /
         ((muF * muF + muG * muG + kSsimC1) * (varF + varG + kSsimC2));
}

namespace detail {

// 1-D squared distance transform (lower envelope of parabolas).
inline void sqdist1d(const std::vector<double>& f, std::vector<double>& d,
                     std::vector<int>& v, std::vector<double>& z) {
  const int n = int(f.size());
  d.resize(f.size());
  v.resize(f.size());
  z.resize(f.size() + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
               (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
          (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = double(q) - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace detail

/// Exact Euclidean distance to the nearest true pixel of g, by the two-pass
/// (columns then rows) squared-distance transform. An empty mask yields +inf
/// everywhere.
inline std::vector<double> distanceTransform(const std::vector<std::uint8_t>& g,
                                             int width, int height) {
  if (g.size() != size_t(width) * size_t(height))
    throw ConfigError("distanceTransform: mask size mismatch");
  constexpr double kFar = 1e18;  // stands in for +inf inside the parabola pass
  std::vector<double> grid(g.size());
  bool any = false;
  for (size_t i = 0; i < g.size(); ++i) {
    grid[i] = g[i] ? 0.0 : kFar;
    any = any || g[i];
  }
  if (!any)
    return std::vector<double>(g.size(),
                               std::numeric_limits<double>::infinity());
  std::vector<double> f, d;
  std::vector<int> v;
  std::vector<double> z;
  // pass 1: columns
  f.resize(size_t(height));
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) f[size_t(y)] = grid[size_t(y) * width + x];
    detail::sqdist1d(f, d, v, z);
    for (int y = 0; y < height; ++y) grid[size_t(y) * width + x] = d[size_t(y)];
  }
  // pass 2: rows
  f.resize(size_t(width));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) f[size_t(x)] = grid[size_t(y) * width + x];
    detail::sqdist1d(f, d, v, z);
    for (int x = 0; x < width; ++x)
      grid[size_t(y) * width + x] = std::sqrt(d[size_t(x)]);
  }
  return grid;
}

/// Per-pixel score of one mistake at ground-truth distance dt. Peaks at 1
/// for dt = 2^1.5; local and far mistakes score near zero. dt is floored at
/// 0.5 to keep the log finite for mistakes lying on a reference pixel.
inline double dScoreAtDistance(double dt) {
  if (std::isinf(dt)) return 0.0;  // empty ground truth: treat as far
  dt = std::max(dt, 0.5);
  const double t = std::log2(2.0 * dt) - 2.5;
  return std::exp(-t * t);
}

/// Mean D-score over the misclassified pixels of one frame (0 when the frame
/// is perfect). Lower is better.
inline double dScoreFrame(const std::vector<std::uint8_t>& f,
                          const std::vector<std::uint8_t>& g, int width,
                          int height) {
  const std::vector<double> dt = distanceTransform(g, width, height);
  double sum = 0.0;
  long mistakes = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    if ((f[i] != 0) == (g[i] != 0)) continue;
    ++mistakes;
    sum += dScoreAtDistance(dt[i]);
  }
  return mistakes == 0 ? 0.0 : sum / double(mistakes);
}

inline MetricsReport computeMetrics(const MaskSequence& f,
                                    const MaskSequence& g) {
  detail::requireAligned(f, g);
  MetricsReport report;
  for (size_t i = 0; i < f.frameCount(); ++i) {
    FrameMetrics fm;
    fm.fMeasure = fMeasureFrame(confusion(f.masks[i], g.masks[i]));
    fm.psnrDb = psnrFrame(f.masks[i], g.masks[i]);
    fm.ssim = ssimFrame(f.masks[i], g.masks[i]);
    fm.dScore = dScoreFrame(f.masks[i], g.masks[i], f.width, f.height);
    report.perFrame.push_back(fm);
  }
  const double n = double(report.perFrame.size());
  for (const FrameMetrics& fm : report.perFrame) {
    report.fMeasure += fm.fMeasure / n;
    report.psnrDb += fm.psnrDb / n;
    report.ssim += fm.ssim / n;
    report.dScore += fm.dScore / n;
  }
  return report;
}

inline double fMeasure(const MaskSequence& f, const MaskSequence& g) {
  return computeMetrics(f, g).fMeasure;
}
inline double psnr(const MaskSequence& f, const MaskSequence& g) {
  return computeMetrics(f, g).psnrDb;
}
inline double ssim(const MaskSequence& f, const MaskSequence& g) {
  return computeMetrics(f, g).ssim;
}
inline double dScore(const MaskSequence& f, const MaskSequence& g) {
  return computeMetrics(f, g).dScore;
}

}  // namespace bgsub::metrics
