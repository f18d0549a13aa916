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
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bgsub/core.hpp"
#include "bgsub/factorization.hpp"
#include "bgsub/svd.hpp"

namespace bgsub {

enum class StepRule { ExactLineSearch, Harmonic };
enum class FaceKind { FullBall, Spectrahedron, Singleton };
enum class TerminationReason { GapTol, MaxIter };

inline const char* toString(FaceKind k) {
  switch (k) {
    case FaceKind::FullBall: return "full-ball";
    case FaceKind::Spectrahedron: return "spectrahedron";
    case FaceKind::Singleton: return "singleton";
  }
  return "?";
}

inline const char* toString(TerminationReason r) {
  return r == TerminationReason::GapTol ? "gap-tol" : "max-iter";
}

/// Certification tolerance and residual penalty factor for top pairs used in
/// Wolfe bound updates. The penalty covers the Rayleigh shortfall of a
/// certified pair near spectral ties; 1e-10 keeps the resulting bound slack
/// around 2e-7 * delta * sigma1, far below practical gap tolerances.
inline constexpr double kBoundProbeTol = 1e-10;
inline constexpr double kBoundMarginFactor = 2000.0;

/// Solver knobs. delta (the nuclear ball radius) and the gap-criterion
/// diameter default to data-derived values when unset: delta = 1.05 * the
/// leading singular value of the observation matrix, diameter = 2 * delta.
struct FwConfig {
  std::optional<double> delta;
  double gamma1 = 0.0;
  double gamma2 = 0.01;
  double lipschitzBound = 1.0;            // LBar >= L = 1 for this objective
  std::optional<double> diameterBound;    // DBar
  int maxIter = 500;
  double gapTol = 1e-4;                   // relative to max(1, f(B0))
  StepRule stepRule = StepRule::ExactLineSearch;
  double rankTol = 1e-6;                  // ball-boundary detection
  double svTol = kDefaultSingularValueTol;
  double lmoTol = 1e-7;                   // residual tolerance for the top pair
  int lmoMaxIter = 80;                    // sweeps per top-pair call

  void validate() const {
    if (delta && *delta <= 0.0) throw ConfigError("fw: delta must be positive");
    if (gamma1 < 0.0 || gamma1 > gamma2 || gamma2 > 1.0)
      throw ConfigError("fw: need 0 <= gamma1 <= gamma2 <= 1");
    if (lipschitzBound < 1.0) throw ConfigError("fw: LBar must be >= 1");
    if (diameterBound && *diameterBound <= 0.0)
      throw ConfigError("fw: DBar must be positive");
    if (maxIter < 1) throw ConfigError("fw: maxIter must be >= 1");
    if (gapTol <= 0.0) throw ConfigError("fw: gapTol must be positive");
    if (rankTol <= 0.0 || svTol <= 0.0 || lmoTol <= 0.0)
      throw ConfigError("fw: tolerances must be positive");
  }
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;   // f at the iterate the step started from
  double lowerBound = 0.0;  // C after this iteration's update
  double boundGap = 0.0;    // objective - lowerBound
  Index rank = 0;           // rank after the step
  std::string step;         // regular-fw | in-face-boundary | in-face-interior
  std::string face;         // face detected this iteration
  double seconds = 0.0;
};

struct SolverReport {
  std::vector<IterationRecord> perIteration;
  TerminationReason termination = TerminationReason::MaxIter;
  double totalSeconds = 0.0;
  Index initialRank = 0;
  int svtCalls = 0;  // filled by the IALM solvers
};

struct FwState {
  LowRankFactorization B;
  double lowerBound = 0.0;
  int iter = 0;
  double objective = 0.0;
  std::string lastStepKind;
};

// ---------------------------------------------------------------------------
// building blocks (these are also the unit-test surface)
// ---------------------------------------------------------------------------

/// argmin <G, X> over the nuclear ball of radius delta: -delta * u1 v1^T.
inline LowRankFactorization linearMinimizationOracle(const Matrix& g,
                                                     double delta,
                                                     double tol = 1e-9,
                                                     int maxIter = 5000) {
  if (delta <= 0.0) throw ConfigError("lmo: delta must be positive");
  const TopSingularPair top = topSingularPair(g, tol, maxIter);
  if (top.sigma == 0.0) return LowRankFactorization::zero(g.rows(), g.cols());
  return LowRankFactorization::rankOne(top.u, delta, (-top.v).eval());
}

struct AwayVertex {
  LowRankFactorization bhat;
  FaceKind face = FaceKind::FullBall;
  Vector coreDirection;  // spectrahedron case: leading eigvec of sym(U^T G V)
};

namespace detail {

inline Vector spectraCoreEigvec(const LowRankFactorization& b,
                                const Matrix& g) {
  const Matrix gv = g * b.rightVectors();
  Matrix a = b.leftVectors().transpose() * gv;
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  return eig.eigenvectors().col(a.rows() - 1);  // largest eigenvalue
}

inline FaceKind classifyFace(const LowRankFactorization& b, double delta,
                             double rankTol) {
  if (b.rank() == 0 || b.nuclearNorm() < delta * (1.0 - rankTol))
    return FaceKind::FullBall;
  return b.rank() == 1 ? FaceKind::Singleton : FaceKind::Spectrahedron;
}

/// Nuclear norm of U diag(c) V^T from the small stacked core only.
inline double stackedNuclearNorm(const Matrix& u, const Vector& c,
                                 const Matrix& v) {
  const Index k = u.cols();
  Eigen::HouseholderQR<Matrix> qu(u), qv(v);
  const Matrix ru = qu.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Matrix rv = qv.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(ru * c.asDiagonal() * rv.transpose());
  return svd.singularValues().sum();
}

/// Largest alpha with feasible(alpha) true, found by bracket growth plus
/// bisection (30 steps max, 1e-6 relative). feasible(0) must hold.
inline double bisectLargestFeasible(const std::function<bool(double)>& feasible) {
  double lo = 0.0, hi = 1.0;
  int grow = 0;
  while (feasible(hi) && grow < 60) {
    lo = hi;
    hi *= 2.0;
    ++grow;
  }
  if (grow == 60) return lo;  // unbounded for practical purposes
  for (int it = 0; it < 30 && (hi - lo) > 1e-6 * std::max(hi, 1e-300); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

inline double fullBallAlphaStop(const LowRankFactorization& b, const Vector& u1,
                                const Vector& v1, double delta) {
  const Index r = b.rank();
  Matrix u(b.rows(), r + 1), v(b.cols(), r + 1);
  Vector base = Vector::Zero(r + 1);
  if (r > 0) {
    u.leftCols(r) = b.leftVectors();
    v.leftCols(r) = b.rightVectors();
    base.head(r) = b.singularValues();
  }
  u.col(r) = u1;
  v.col(r) = v1;
  return bisectLargestFeasible([&](double alpha) {
    Vector c = (1.0 + alpha) * base;
    c(r) = -alpha * delta;
    return stackedNuclearNorm(u, c, v) <= delta;
  });
}

inline Matrix spectraCore(const Vector& s, const Vector& uface, double delta,
                          double alpha) {
  Matrix m = Vector((1.0 + alpha) * s).asDiagonal();
  m.noalias() -= (alpha * delta) * (uface * uface.transpose());
  return m;
}

inline double spectraAlphaStop(const Vector& s, const Vector& uface,
                               double delta) {
  return bisectLargestFeasible([&](double alpha) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(
        spectraCore(s, uface, delta, alpha), Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0) >= 0.0;
  });
}

/// B + alpha (B - Bhat) on a spectrahedron face, rebuilt in SVD form. On the
/// face boundary the crossing eigenvalue(s) are dropped, which is where the
/// rank reduction of the in-face scheme comes from.
inline LowRankFactorization spectraPoint(const LowRankFactorization& b,
                                         const Vector& uface, double delta,
                                         double alpha, bool onBoundary,
                                         double svTol) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(
      spectraCore(b.singularValues(), uface, delta, alpha));
  const Vector& lam = eig.eigenvalues();  // ascending
  const Index r = lam.size();
  double cut = svTol * std::max(lam(r - 1), 0.0);
  if (onBoundary) cut = std::max(cut, std::abs(lam(0)) * (1.0 + 1e-9));
  Index keep = 0;
  for (Index i = r - 1; i >= 0 && lam(i) > cut; --i) ++keep;
  if (keep == 0) return LowRankFactorization::zero(b.rows(), b.cols());
  Matrix rot(r, keep);
  Vector s(keep);
  for (Index i = 0; i < keep; ++i) {
    rot.col(i) = eig.eigenvectors().col(r - 1 - i);
    s(i) = lam(r - 1 - i);
  }
  return {b.leftVectors() * rot, s, b.rightVectors() * rot};
}

}  // namespace detail

/// Away vertex on the minimal face containing B: the maximizer of <G, X>.
/// Interior points see the whole ball (B-hat = +delta u1 v1^T of G), boundary
/// points of rank r > 1 see the spectrahedron face {U M V^T : M psd,
/// trace M = delta}, and boundary rank-1 points form a singleton face.
inline AwayVertex awayVertexOnFace(const LowRankFactorization& b,
                                   const Matrix& g, double delta,
                                   double rankTol, double tol = 1e-9,
                                   int maxIter = 5000) {
  if (b.nuclearNorm() > delta * (1.0 + 1e-8))
    throw ConfigError("awayVertexOnFace: iterate outside the nuclear ball");
  AwayVertex out;
  out.face = detail::classifyFace(b, delta, rankTol);
  switch (out.face) {
    case FaceKind::FullBall: {
      const TopSingularPair top = topSingularPair(g, tol, maxIter);
      out.bhat = LowRankFactorization::rankOne(top.u, delta, top.v);
      break;
    }
    case FaceKind::Spectrahedron: {
      out.coreDirection = detail::spectraCoreEigvec(b, g);
      out.bhat = LowRankFactorization::rankOne(
          (b.leftVectors() * out.coreDirection).eval(), delta,
          (b.rightVectors() * out.coreDirection).eval());
      break;
    }
    case FaceKind::Singleton:
      out.bhat = b;
      break;
  }
  return out;
}

/// Largest alpha keeping B + alpha (B - Bhat) inside the minimal face.
inline double alphaStop(const LowRankFactorization& b, const AwayVertex& away,
                        double delta) {
  switch (away.face) {
    case FaceKind::FullBall:
      return detail::fullBallAlphaStop(b, away.bhat.leftVectors().col(0),
                                       away.bhat.rightVectors().col(0), delta);
    case FaceKind::Spectrahedron:
      return detail::spectraAlphaStop(b.singularValues(), away.coreDirection,
                                      delta);
    case FaceKind::Singleton:
      throw std::domain_error(
          "alphaStop: singleton face has zero direction; take the regular "
          "Frank-Wolfe branch");
  }
  return 0.0;
}

/// Exact line search for the quadratic objective along direction q:
/// clamp(<V - B, q> / |q|_F^2, 0, alphaMax).
inline double exactLineSearch(const Matrix& b, const Matrix& v, const Matrix& q,
                              double alphaMax) {
  const double den = q.squaredNorm();
  if (den == 0.0) throw ConfigError("exactLineSearch: direction is zero");
  if (alphaMax <= 0.0) throw ConfigError("exactLineSearch: alphaMax <= 0");
  const double num = ((v - b).cwiseProduct(q)).sum();
  return std::clamp(num / den, 0.0, alphaMax);
}

// ---------------------------------------------------------------------------
// solver
// ---------------------------------------------------------------------------

/// In-face extended Frank-Wolfe for  min 1/2 |B - V|_F^2  s.t. |B|_* <= delta,
/// optionally restricted to the observed entries of a mask. Iterates are kept
/// factored; each iteration touches the data through one dense residual and a
/// blocked top-singular-pair computation warm-started from the previous
/// gradient.
class FrmcSolver {
 public:
  FrmcSolver(const Matrix& v, FwConfig config, const EntryMask* mask = nullptr,
             const LowRankFactorization* initialIterate = nullptr)
      : v_(v), cfg_(std::move(config)) {
    cfg_.validate();
    requireFinite(v_, "solveFRMC");
    if (mask) {
      mask->validateFor(v_);
      if (!mask->full()) mask_ = *mask;  // a full mask is the unmasked problem
    }
    if (mask_) {
      maskedV_ = v_;
      mask_->apply(maskedV_);
    }
    const Matrix& vm = mask_ ? maskedV_ : v_;
    const TopSingularPair top =
        blockTopSingularPair((-vm).eval(), {}, kBoundProbeTol,
                             std::max(cfg_.lmoMaxIter, 500),
                             kPowerIterationSeed, 2)
            .top;
    delta_ = cfg_.delta ? *cfg_.delta : 1.05 * top.sigma;
    dbar_ = cfg_.diameterBound ? *cfg_.diameterBound : 2.0 * delta_;
    inv2LD2_ = dbar_ > 0.0
                   ? 1.0 / (2.0 * cfg_.lipschitzBound * dbar_ * dbar_)
                   : 0.0;
    const double f0 = 0.5 * vm.squaredNorm();
    if (delta_ <= 0.0) {
      // V = 0 with the automatic radius: the ball is the origin.
      state_.B = LowRankFactorization::zero(v_.rows(), v_.cols());
      state_.lowerBound = f0;
      converged_ = true;
      gapScale_ = 1.0;
      report_.initialRank = 0;
      return;
    }
    // B0 = -delta u0 v0^T with (u0, v0) the top pair of grad f(0) = -V.
    if (initialIterate) {
      if (initialIterate->nuclearNorm() > delta_ * (1.0 + 1e-8))
        throw ConfigError("solveFRMC: initial iterate outside the ball");
      state_.B = *initialIterate;
    } else {
      state_.B = LowRankFactorization::rankOne(top.u, delta_, (-top.v).eval());
    }
    // Wolfe bound at 0 evaluated at the linearization minimizer (which is
    // the default B0), with the same residual charge as updateWolfeBound. If
    // the power iteration did not certify the pair, fall back to the
    // Frobenius bound sigma1 <= |V|_F so the lower bound stays valid.
    if (top.converged) {
      const double rayleigh = top.u.dot((-vm) * top.v);
      state_.lowerBound =
          f0 - delta_ * (rayleigh + kBoundMarginFactor * top.residualNorm);
    } else {
      state_.lowerBound = f0 - delta_ * vm.norm();
    }
    report_.initialRank = state_.B.rank();
    refresh();
    gapScale_ = std::max(1.0, objective_);
  }

  double delta() const { return delta_; }
  double gapScale() const { return gapScale_; }
  const FwState& state() {
    refresh();
    return state_;
  }
  const SolverReport& report() const { return report_; }
  SolverReport&& takeReport() { return std::move(report_); }

  double boundGap() {
    refresh();
    return objective_ - state_.lowerBound;
  }

  bool converged() {
    if (converged_) return true;
    if (boundGap() <= cfg_.gapTol * gapScale_) converged_ = true;
    return converged_;
  }

  /// One iteration of the original Frank-Wolfe method (with bound update).
  void fwStep() {
    if (converged_) return;
    const auto t0 = std::chrono::steady_clock::now();
    refresh();
    const double f = objective_;
    const BlockTopResult lmo = topOfResidual();
    const FaceKind face = detail::classifyFace(state_.B, delta_, cfg_.rankTol);
    applyRegularStep(lmo, f);
    finishIteration(f, face, t0);
  }

  /// One iteration of the in-face selection rule, falling through to the
  /// regular step when no in-face candidate qualifies. The Wolfe bound is
  /// refreshed every iteration, not only on regular steps: the top pair of
  /// the gradient is computed here anyway, and without the refresh the gap
  /// certificate starves during long in-face phases and the solver cannot
  /// terminate even at a near-optimal iterate.
  void inFaceStep() {
    if (converged_) return;
    const auto t0 = std::chrono::steady_clock::now();
    refresh();
    const double f = objective_;
    const BlockTopResult lmo = topOfResidual();
    updateWolfeBound(lmo, f);
    const FaceKind face = detail::classifyFace(state_.B, delta_, cfg_.rankTol);

    if (face != FaceKind::Singleton && tryInFace(face, lmo, f)) {
      finishIteration(f, face, t0);
      return;
    }
    applyRegularStep(lmo, f);
    finishIteration(f, face, t0);
  }

 private:
  void refresh() {
    if (residualFresh_) return;
    bDense_ = state_.B.rank() == 0 ? Matrix::Zero(v_.rows(), v_.cols())
                                   : state_.B.materialize();
    residual_ = bDense_ - v_;
    if (mask_) mask_->apply(residual_);
    objective_ = 0.5 * residual_.squaredNorm();
    state_.objective = objective_;
    residualFresh_ = true;
  }

  // Step-direction pair: a warm-started block tracks the gradient cheaply,
  // and an independent fresh-start probe guards against the block certifying
  // a converged but subdominant pair near spectral ties. The probe is the
  // only pair trusted for the Wolfe bound: started at random, its top
  // component can only grow, so it cannot lock below the leading pair.
  BlockTopResult topOfResidual() {
    const std::uint64_t seed =
        kPowerIterationSeed ^
        (0x9e37ULL * static_cast<std::uint64_t>(state_.iter + 1));
    BlockTopResult r = blockTopSingularPair(residual_, warm_, cfg_.lmoTol,
                                            cfg_.lmoMaxIter, seed);
    warm_ = r.ritzRight;
    probe_ = blockTopSingularPair(residual_, {}, kBoundProbeTol,
                                  std::max(cfg_.lmoMaxIter, 120),
                                  seed ^ 0xf5a5a5ULL, 2)
                 .top;
    if (probe_.converged && probe_.sigma > r.top.sigma) r.top = probe_;
    return r;
  }

  double maskedSquaredNorm(const Matrix& m) const {
    if (!mask_) return m.squaredNorm();
    Matrix c = m;
    mask_->apply(c);
    return c.squaredNorm();
  }

  double candidateObjective(double alpha, const Matrix& qDense) const {
    // mask is already folded into residual_; q is masked separately
    Matrix r = residual_ + alpha * qDense;
    if (mask_) mask_->apply(r);
    return 0.5 * r.squaredNorm();
  }

  bool acceptCandidate(double fCand, double f, double gamma) const {
    const double gap = f - state_.lowerBound;
    const double gapCand = fCand - state_.lowerBound;
    if (gapCand <= 0.0) return true;
    if (!(gapCand < gap)) return false;  // strict decrease, also guards gamma=0
    return 1.0 / gapCand >= 1.0 / gap + gamma * inv2LD2_;
  }

  bool tryInFace(FaceKind face, const BlockTopResult& lmo, double f) {
    Vector bu, bv;         // the away vertex dyad
    Vector coreDirection;  // spectrahedron only
    if (face == FaceKind::FullBall) {
      if (lmo.top.sigma == 0.0) return false;
      bu = lmo.top.u;
      bv = lmo.top.v;
    } else {
      coreDirection = detail::spectraCoreEigvec(state_.B, residual_);
      bu = state_.B.leftVectors() * coreDirection;
      bv = state_.B.rightVectors() * coreDirection;
    }
    // q = B - Bhat
    Matrix qDense = bDense_ - delta_ * (bu * bv.transpose());
    const double qNormSq = maskedSquaredNorm(qDense);
    if (qNormSq == 0.0) return false;

    const double astop =
        face == FaceKind::FullBall
            ? detail::fullBallAlphaStop(state_.B, bu, bv, delta_)
            : detail::spectraAlphaStop(state_.B.singularValues(),
                                       coreDirection, delta_);
    if (astop <= 1e-12) return false;

    const double fb = candidateObjective(astop, qDense);
    const double num = -(residual_.cwiseProduct(qDense)).sum();
    const double beta = std::clamp(num / qNormSq, 0.0, astop);
    const double fa = candidateObjective(beta, qDense);

    if (acceptCandidate(fb, f, cfg_.gamma1)) {
      applyInFacePoint(face, bu, bv, coreDirection, astop, true);
      state_.lastStepKind = "in-face-boundary";
      return true;
    }
    if (acceptCandidate(fa, f, cfg_.gamma2)) {
      if (beta <= 0.0) return false;  // no movement; take the regular branch
      applyInFacePoint(face, bu, bv, coreDirection, beta, false);
      state_.lastStepKind = "in-face-interior";
      return true;
    }
    return false;
  }

  void applyInFacePoint(FaceKind face, const Vector& bu, const Vector& bv,
                        const Vector& coreDirection, double alpha,
                        bool onBoundary) {
    if (face == FaceKind::FullBall) {
      state_.B = appendAtom(state_.B, 1.0 + alpha, -alpha * delta_, bu, bv,
                            cfg_.svTol);
    } else {
      state_.B = detail::spectraPoint(state_.B, coreDirection, delta_, alpha,
                                      onBoundary, cfg_.svTol);
    }
    residualFresh_ = false;
  }

  // Wolfe bound C_w = f + <G, xt - B>, computed only from the certified
  // fresh-start probe pair. Near spectral ties the certified Rayleigh value
  // can still sit below sigma1 by roughly tan(theta) times the residual, so
  // sigma1 is charged a residual-proportional penalty; the two fresh random
  // columns keep tan(theta) moderate.
  void updateWolfeBound(const BlockTopResult&, double f) {
    if (!probe_.converged || probe_.sigma <= 0.0) return;
    const double rayleigh = probe_.u.dot(residual_ * probe_.v);
    const double sigmaUp =
        rayleigh + kBoundMarginFactor * probe_.residualNorm;
    const double innerGB = (residual_.cwiseProduct(bDense_)).sum();
    const double wolfe = f - delta_ * sigmaUp - innerGB;
    state_.lowerBound = std::max(state_.lowerBound, wolfe);
  }

  void applyRegularStep(const BlockTopResult& lmo, double f) {
    updateWolfeBound(lmo, f);
    double alpha = 0.0;
    if (cfg_.stepRule == StepRule::Harmonic) {
      alpha = std::clamp(2.0 / (state_.iter + 1.0), 0.0, 1.0);
    } else {
      // q = xt - B with xt = -delta u1 v1^T
      Matrix qDense = -delta_ * (lmo.top.u * lmo.top.v.transpose()) - bDense_;
      const double den = maskedSquaredNorm(qDense);
      const double num = -(residual_.cwiseProduct(qDense)).sum();
      alpha = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
    }
    if (lmo.top.sigma > 0.0) {
      state_.B = appendAtom(state_.B, 1.0 - alpha, -alpha * delta_, lmo.top.u,
                            lmo.top.v, cfg_.svTol);
    } else if (alpha > 0.0) {
      state_.B = refactor(state_.B.leftVectors(),
                          Vector((1.0 - alpha) * state_.B.singularValues()),
                          state_.B.rightVectors(), cfg_.svTol);
    }
    state_.lastStepKind = "regular-fw";
    residualFresh_ = false;
  }

  void finishIteration(double preStepObjective, FaceKind face,
                       std::chrono::steady_clock::time_point t0) {
    IterationRecord rec;
    rec.iter = state_.iter;
    rec.objective = preStepObjective;
    rec.lowerBound = state_.lowerBound;
    rec.boundGap = preStepObjective - state_.lowerBound;
    rec.rank = state_.B.rank();
    rec.step = state_.lastStepKind;
    rec.face = toString(face);
    rec.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    report_.perIteration.push_back(std::move(rec));
    ++state_.iter;
  }

  Matrix v_;
  FwConfig cfg_;
  std::optional<EntryMask> mask_;
  Matrix maskedV_;
  double delta_ = 0.0;
  double dbar_ = 0.0;
  double inv2LD2_ = 0.0;
  double gapScale_ = 1.0;

  FwState state_;
  SolverReport report_;
  std::vector<Vector> warm_;
  TopSingularPair probe_;

  Matrix bDense_;
  Matrix residual_;
  double objective_ = 0.0;
  bool residualFresh_ = false;
  bool converged_ = false;
};

/// Full solve from B0 = -delta u0 v0^T until the bound gap passes
/// gapTol * max(1, f(B0)) or maxIter.
inline std::pair<LowRankFactorization, SolverReport> solveFRMC(
    const Matrix& v, const FwConfig& config, const EntryMask* mask = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  FrmcSolver solver(v, config, mask);
  while (solver.state().iter < config.maxIter && !solver.converged())
    solver.inFaceStep();
  const bool ok = solver.converged();
  LowRankFactorization b = solver.state().B;
  SolverReport report = solver.takeReport();
  report.termination =
      ok ? TerminationReason::GapTol : TerminationReason::MaxIter;
  report.totalSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(b), std::move(report)};
}

}  // namespace bgsub
