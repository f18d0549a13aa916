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
#include <stdexcept>
#include <vector>

#include "bgsub/core.hpp"

namespace bgsub {

/// Singular values below svTol * s(0) are treated as numerically zero when a
/// factorization is rebuilt. Exposed because the rank decision feeds the
/// in-face machinery of the solver.
inline constexpr double kDefaultSingularValueTol = 1e-9;

/// Entry budget for materializing a factorization as a dense matrix.
inline constexpr Index kDefaultMaterializeBudget = Index(1) << 27;

/// Low-rank matrix in factored form U * diag(s) * V^T with orthonormal U, V
/// columns and positive nonincreasing s. Rank 0 (empty factors) is a valid
/// value and denotes the zero matrix.
class LowRankFactorization {
 public:
  LowRankFactorization() = default;
  LowRankFactorization(Matrix u, Vector s, Matrix v)
      : u_(std::move(u)), s_(std::move(s)), v_(std::move(v)) {}

  static LowRankFactorization zero(Index rows, Index cols) {
    return {Matrix(rows, 0), Vector(0), Matrix(cols, 0)};
  }

  static LowRankFactorization rankOne(const Vector& u, double s,
                                      const Vector& v) {
    LowRankFactorization f;
    f.u_ = u;
    f.v_ = v;
    f.s_ = Vector::Constant(1, s);
    return f;
  }

  Index rows() const { return u_.rows(); }
  Index cols() const { return v_.rows(); }
  Index rank() const { return s_.size(); }

  const Matrix& leftVectors() const { return u_; }
  const Vector& singularValues() const { return s_; }
  const Matrix& rightVectors() const { return v_; }

  double nuclearNorm() const { return s_.sum(); }

  Matrix materialize(Index budget = kDefaultMaterializeBudget) const {
    if (rows() * cols() > budget)
      throw std::length_error(
          "materialize: rows*cols exceeds the memory budget; stream the "
          "result column-wise with materializeColumn instead");
    if (rank() == 0) return Matrix::Zero(rows(), cols());
    return u_ * s_.asDiagonal() * v_.transpose();
  }

  /// Column j of U diag(s) V^T without forming the whole matrix.
  Vector materializeColumn(Index j) const {
    if (rank() == 0) return Vector::Zero(rows());
    return u_ * (s_.cwiseProduct(v_.row(j).transpose()));
  }

  /// Spectral norm of U^T U - I and V^T V - I (the larger of the two).
  double orthonormalityError() const {
    if (rank() == 0) return 0.0;
    const Matrix gu = u_.transpose() * u_ - Matrix::Identity(rank(), rank());
    const Matrix gv = v_.transpose() * v_ - Matrix::Identity(rank(), rank());
    Eigen::SelfAdjointEigenSolver<Matrix> eu(gu, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> ev(gv, Eigen::EigenvaluesOnly);
    const double nu = eu.eigenvalues().cwiseAbs().maxCoeff();
    const double nv = ev.eigenvalues().cwiseAbs().maxCoeff();
    return std::max(nu, nv);
  }

  bool valid(double tol = 1e-8) const {
    if (rank() == 0) return true;
    for (Index i = 0; i + 1 < s_.size(); ++i)
      if (s_(i) < s_(i + 1)) return false;
    if (s_.minCoeff() <= 0.0) return false;
    return orthonormalityError() <= tol;
  }

 private:
  Matrix u_;  // rows x r
  Vector s_;  // r
  Matrix v_;  // cols x r
};

inline double nuclearNorm(const LowRankFactorization& f) {
  return f.nuclearNorm();
}

inline Matrix materialize(const LowRankFactorization& f,
                          Index budget = kDefaultMaterializeBudget) {
  return f.materialize(budget);
}

namespace detail {

inline Matrix thinQ(const Matrix& a, Matrix* rOut) {
  const Index k = a.cols();
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), k);
  if (rOut)
    *rOut = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return q;
}

}  // namespace detail

/// Rebuilds a proper SVD-form factorization of A = U * diag(c) * V^T where
/// the columns of U, V need not be orthonormal and c may carry any signs
/// (e.g. after appending a Frank-Wolfe atom). Values below svTol * s_max are
/// dropped.
inline LowRankFactorization refactor(const Matrix& u, const Vector& c,
                                     const Matrix& v,
                                     double svTol = kDefaultSingularValueTol) {
  if (u.cols() == 0) return LowRankFactorization::zero(u.rows(), v.rows());
  Matrix ru, rv;
  const Matrix qu = detail::thinQ(u, &ru);
  const Matrix qv = detail::thinQ(v, &rv);
  const Matrix core = ru * c.asDiagonal() * rv.transpose();
  Eigen::JacobiSVD<Matrix> svd(core, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double cut = s.size() ? svTol * s(0) : 0.0;
  Index keep = 0;
  while (keep < s.size() && s(keep) > cut && s(keep) > 0.0) ++keep;
  if (keep == 0) return LowRankFactorization::zero(u.rows(), v.rows());
  return {qu * svd.matrixU().leftCols(keep), s.head(keep),
          qv * svd.matrixV().leftCols(keep)};
}

/// Appends a rank-1 atom: scaleExisting * F + atomWeight * a b^T.
inline LowRankFactorization appendAtom(const LowRankFactorization& f,
                                       double scaleExisting,
                                       double atomWeight, const Vector& a,
                                       const Vector& b,
                                       double svTol = kDefaultSingularValueTol) {
  const Index r = f.rank();
  Matrix u(f.rows(), r + 1), v(f.cols(), r + 1);
  Vector c(r + 1);
  if (r > 0) {
    u.leftCols(r) = f.leftVectors();
    v.leftCols(r) = f.rightVectors();
    c.head(r) = scaleExisting * f.singularValues();
  }
  u.col(r) = a;
  v.col(r) = b;
  c(r) = atomWeight;
  return refactor(u, c, v, svTol);
}

}  // namespace bgsub
