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

#include "bgsub/core.hpp"
#include "bgsub/factorization.hpp"
#include "bgsub/svd.hpp"

namespace bgsub {

/// Singular value thresholding: the proximal operator of tau * nuclear norm.
/// Keeps the singular vectors of m and shrinks the values by tau, clipping at
/// zero. Only the values above the threshold are computed (partial SVD); a
/// rank hint from the caller sizes the initial subspace.
inline LowRankFactorization svt(const Matrix& m, double tau,
                                Index rankHint = 0) {
  if (tau < 0.0) throw ConfigError("svt: tau must be nonnegative");
  requireFinite(m, "svt");
  const ThinSvd part = partialSvdAboveThreshold(m, tau, rankHint);
  if (part.rank() == 0) return LowRankFactorization::zero(m.rows(), m.cols());
  return {part.u, Vector(part.s.array() - tau), part.v};
}

/// Elementwise soft threshold: sign(x) * max(|x| - tau, 0).
inline Matrix softThreshold(const Matrix& m, double tau) {
  if (tau < 0.0) throw ConfigError("softThreshold: tau must be nonnegative");
  return m.unaryExpr([tau](double x) {
    const double shrunk = std::abs(x) - tau;
    return shrunk > 0.0 ? (x > 0.0 ? shrunk : -shrunk) : 0.0;
  });
}

}  // namespace bgsub
