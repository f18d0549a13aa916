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
#include <cmath>
#include <vector>

#include "bgsub/core.hpp"
#include "bgsub/factorization.hpp"
#include "bgsub/rng.hpp"

namespace bgsub {

inline constexpr std::uint64_t kPowerIterationSeed = 0x5eedf00dULL;

struct TopSingularPair {
  double sigma = 0.0;
  Vector u;
  Vector v;
  int iterations = 0;
  bool converged = false;
  double residualNorm = 0.0;  // max of |Mv - sigma u|, |M^T u - sigma v|
};

namespace detail {

inline Vector seededUnitVector(Index n, Rng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.normal();
  const double norm = v.norm();
  if (norm == 0.0) return Vector::Unit(n, 0);
  return v / norm;
}

// Deterministic fallback start: the right singular direction of the largest
// column. Returns false when the matrix is exactly zero.
inline bool fallbackStart(const Matrix& m, Vector& v) {
  Index best = 0;
  double bestNorm = 0.0;
  for (Index j = 0; j < m.cols(); ++j) {
    const double n = m.col(j).norm();
    if (n > bestNorm) {
      bestNorm = n;
      best = j;
    }
  }
  if (bestNorm == 0.0) return false;
  v = Vector::Unit(m.cols(), best);
  return true;
}

inline TopSingularPair zeroMatrixPair(Index rows, Index cols) {
  TopSingularPair r;
  r.sigma = 0.0;
  r.u = Vector::Unit(rows, 0);
  r.v = Vector::Unit(cols, 0);
  r.converged = true;
  return r;
}

}  // namespace detail

/// Leading singular triplet by power iteration on M^T M with a seeded random
/// start. Convergence requires both residuals |Mv - sigma*u| and
/// |M^T u - sigma*v| to fall below tol * sigma. On non-convergence the best
/// iterate is returned with converged = false so the caller can decide.
inline TopSingularPair topSingularPair(const Matrix& m, double tol = 1e-9,
                                       int maxIter = 5000,
                                       const Vector* warmStart = nullptr,
                                       std::uint64_t seed = kPowerIterationSeed) {
  if (tol <= 0.0) throw ConfigError("topSingularPair: tol must be positive");
  Rng rng(seed);
  Vector v = warmStart && warmStart->size() == m.cols() && warmStart->norm() > 0
                 ? (*warmStart / warmStart->norm()).eval()
                 : detail::seededUnitVector(m.cols(), rng);

  TopSingularPair result;
  Vector z = m * v;
  for (int attempt = 0; z.norm() == 0.0 && attempt < 3; ++attempt) {
    v = detail::seededUnitVector(m.cols(), rng);
    z = m * v;
  }
  if (z.norm() == 0.0) {
    if (!detail::fallbackStart(m, v)) return detail::zeroMatrixPair(m.rows(), m.cols());
    z = m * v;
  }

  Vector u = z / z.norm();
  for (int it = 1; it <= maxIter; ++it) {
    Vector w = m.transpose() * u;
    const double sigma = w.norm();
    if (sigma == 0.0) return detail::zeroMatrixPair(m.rows(), m.cols());
    v = w / sigma;
    z = m * v;  // reused as next half-step
    result.sigma = sigma;
    result.u = u;
    result.v = v;
    result.iterations = it;
    // With v = M^T u / |M^T u| the v-side residual vanishes identically, so
    // the u-side residual is the binding test.
    result.residualNorm = (z - sigma * u).norm();
    if (result.residualNorm <= tol * sigma) {
      result.converged = true;
      return result;
    }
    u = z / z.norm();
  }
  return result;
}

struct ThinSvd {
  Matrix u;
  Vector s;
  Matrix v;
  Index rank() const { return s.size(); }
};

namespace detail {

/// Thin SVD through the Gram matrix of the short side, then an exact
/// re-factorization pass that restores orthonormality and recovers the
/// singular values from a small dense SVD.
inline ThinSvd gramThinSvd(const Matrix& m, double relCut = 1e-13) {
  const bool tall = m.rows() >= m.cols();
  const Matrix gram = tall ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Vector& lam = eig.eigenvalues();  // ascending
  const Index n = lam.size();
  const double lamMax = std::max(lam(n - 1), 0.0);
  const double cut = lamMax * relCut * relCut;
  Index keep = 0;
  for (Index i = n - 1; i >= 0 && lam(i) > cut && lam(i) > 0.0; --i) ++keep;
  if (keep == 0) {
    ThinSvd out;
    out.u = Matrix(m.rows(), 0);
    out.s = Vector(0);
    out.v = Matrix(m.cols(), 0);
    return out;
  }
  Matrix shortSide(n, keep);
  for (Index i = 0; i < keep; ++i) shortSide.col(i) = eig.eigenvectors().col(n - 1 - i);
  ThinSvd out;
  if (tall) {
    const Matrix mu = m * shortSide;
    const LowRankFactorization f = refactor(mu, Vector::Ones(keep), shortSide, 0.0);
    out.u = f.leftVectors();
    out.s = f.singularValues();
    out.v = f.rightVectors();
  } else {
    const Matrix mv = m.transpose() * shortSide;
    const LowRankFactorization f = refactor(shortSide, Vector::Ones(keep), mv, 0.0);
    out.u = f.leftVectors();
    out.s = f.singularValues();
    out.v = f.rightVectors();
  }
  return out;
}

struct RitzBlock {
  Matrix qLeft;   // n1 x k orthonormal
  Matrix qRight;  // n2 x k orthonormal
  Vector sigma;   // k Ritz values, nonincreasing
  Matrix rotLeft;
  Matrix rotRight;
};

inline void ritzFromSweep(const Matrix& m, Matrix& qRight, RitzBlock& out) {
  Matrix ignored;
  const Matrix z = m * qRight;
  const Matrix qz = detail::thinQ(z, &ignored);
  const Matrix w = m.transpose() * qz;
  Matrix rw;
  const Matrix qw = detail::thinQ(w, &rw);
  Eigen::JacobiSVD<Matrix> svd(rw.transpose(),
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.qLeft = qz * svd.matrixU();
  out.qRight = qw * svd.matrixV();
  out.sigma = svd.singularValues();
  qRight = qw;
}

}  // namespace detail

/// Leading singular triplet by blocked orthogonal iteration. Warm-start
/// directions from the caller are augmented with one fresh seeded random
/// column so the block always overlaps the dominant subspace; this keeps the
/// returned pair the true leading one even when the warm directions have
/// drifted onto a lower pair.
struct BlockTopResult {
  TopSingularPair top;
  std::vector<Vector> ritzRight;  // leading Ritz right-vectors, for warm reuse
};

inline BlockTopResult blockTopSingularPair(
    const Matrix& m, const std::vector<Vector>& warm, double tol = 1e-8,
    int maxSweeps = 300, std::uint64_t seed = kPowerIterationSeed,
    Index freshColumns = 1) {
  const Index minDim = std::min(m.rows(), m.cols());
  const Index k = std::min<Index>(
      minDim, static_cast<Index>(warm.size()) + std::max<Index>(freshColumns, 1));
  Rng rng(seed);
  Matrix q(m.cols(), k);
  Index col = 0;
  for (const Vector& w : warm) {
    if (col >= k - 1) break;
    if (w.size() == m.cols() && w.norm() > 0) q.col(col++) = w / w.norm();
  }
  for (; col < k; ++col) q.col(col) = detail::seededUnitVector(m.cols(), rng);
  Matrix ignored;
  q = detail::thinQ(q, &ignored);

  BlockTopResult result;
  detail::RitzBlock block;
  for (int sweep = 1; sweep <= maxSweeps; ++sweep) {
    detail::ritzFromSweep(m, q, block);
    const double sigma = block.sigma(0);
    if (sigma == 0.0) {
      result.top = detail::zeroMatrixPair(m.rows(), m.cols());
      return result;
    }
    const Vector u = block.qLeft.col(0);
    const Vector v = block.qRight.col(0);
    const double ru = (m * v - sigma * u).norm();
    const double rv = (m.transpose() * u - sigma * v).norm();
    result.top.sigma = sigma;
    result.top.u = u;
    result.top.v = v;
    result.top.iterations = sweep;
    result.top.residualNorm = std::max(ru, rv);
    if (result.top.residualNorm <= tol * sigma) {
      result.top.converged = true;
      break;
    }
  }
  const Index keep = std::min<Index>(2, block.sigma.size());
  for (Index i = 0; i < keep; ++i) result.ritzRight.push_back(block.qRight.col(i));
  return result;
}

/// All singular triplets with sigma > tau. For small problems or tau = 0 the
/// exact Gram route is used directly; otherwise a blocked orthogonal
/// iteration grows its subspace until the block passes tau. Whenever the
/// blocked route stalls (clustered values) or the needed rank approaches the
/// short dimension, it hands over to the exact Gram route, so the cost per
/// call stays bounded.
inline ThinSvd partialSvdAboveThreshold(const Matrix& m, double tau,
                                        Index rankHint = 0,
                                        std::uint64_t seed = kPowerIterationSeed) {
  const Index minDim = std::min(m.rows(), m.cols());
  ThinSvd out;
  if (minDim == 0) return out;
  const auto finishFromGram = [&]() {
    ThinSvd full = detail::gramThinSvd(m);
    Index keep = 0;
    while (keep < full.rank() && full.s(keep) > tau) ++keep;
    out.u = full.u.leftCols(keep);
    out.s = full.s.head(keep);
    out.v = full.v.leftCols(keep);
    return out;
  };
  if (tau <= 0.0 || minDim <= 64) return finishFromGram();

  Rng rng(seed);
  Index k = std::clamp<Index>(rankHint > 0 ? rankHint : 8, 4, minDim);
  if (k > minDim / 4) return finishFromGram();
  Matrix q(m.cols(), k);
  for (Index j = 0; j < k; ++j) q.col(j) = detail::seededUnitVector(m.cols(), rng);
  Matrix ignored;
  q = detail::thinQ(q, &ignored);

  for (int stage = 0; stage < 8; ++stage) {
    detail::RitzBlock block;
    Vector prevSigma;
    bool coversTau = false;
    for (int sweep = 1; sweep <= 20; ++sweep) {
      detail::ritzFromSweep(m, q, block);
      const double s1 = block.sigma(0);
      if (s1 <= tau) {
        out.u = Matrix(m.rows(), 0);
        out.s = Vector(0);
        out.v = Matrix(m.cols(), 0);
        return out;
      }
      coversTau = block.sigma(block.sigma.size() - 1) <= tau;
      Index keep = 0;
      while (keep < block.sigma.size() && block.sigma(keep) > tau) ++keep;
      const bool stable =
          prevSigma.size() >= keep &&
          ((block.sigma.head(keep) - prevSigma.head(keep)).cwiseAbs().maxCoeff() <=
           1e-10 * s1);
      prevSigma = block.sigma;
      if (coversTau && sweep >= 3 && (stable || sweep % 4 == 0)) {
        const Matrix vk = block.qRight.leftCols(keep);
        const Matrix uk = block.qLeft.leftCols(keep);
        const Matrix res = m * vk - uk * block.sigma.head(keep).asDiagonal();
        if (res.colwise().norm().maxCoeff() <= 1e-8 * s1) {
          out.u = uk;
          out.s = block.sigma.head(keep);
          out.v = vk;
          return out;
        }
      }
    }
    if (coversTau) return finishFromGram();  // stalled without certifying
    const Index grown = std::min(minDim, std::max(k + 8, 2 * k));
    if (grown > minDim / 4) return finishFromGram();
    Matrix nq(m.cols(), grown);
    nq.leftCols(k) = q;
    for (Index j = k; j < grown; ++j)
      nq.col(j) = detail::seededUnitVector(m.cols(), rng);
    q = detail::thinQ(nq, &ignored);
    k = grown;
  }
  return finishFromGram();
}

}  // namespace bgsub
