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

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace bgsub {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Configuration / argument validation failures. The CLI maps these to
/// exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem / format failures. The CLI maps these to exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void requireFinite(const Matrix& m, const std::string& what) {
  if (!m.allFinite())
    throw ConfigError(what + ": matrix contains non-finite entries");
}

/// Observation mask: the set of entries that participate in the masked
/// least-squares objective. A full mask is equivalent to no mask at all and
/// the solvers detect that case so both take the identical code path.
class EntryMask {
 public:
  EntryMask(Index rows, Index cols, bool value = true)
      : included_(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
            rows, cols, value)) {}

  explicit EntryMask(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> incl)
      : included_(std::move(incl)) {}

  Index rows() const { return included_.rows(); }
  Index cols() const { return included_.cols(); }
  bool operator()(Index i, Index j) const { return included_(i, j); }
  void set(Index i, Index j, bool v) { included_(i, j) = v; }

  Index includedCount() const { return included_.count(); }
  bool full() const { return includedCount() == rows() * cols(); }

  void validateFor(const Matrix& m) const {
    if (rows() != m.rows() || cols() != m.cols())
      throw ConfigError("entry mask dimensions do not match the matrix");
    if (includedCount() == 0)
      throw ConfigError("entry mask excludes every entry");
  }

  /// Zeroes the excluded entries of m in place.
  void apply(Matrix& m) const {
    for (Index j = 0; j < cols(); ++j)
      for (Index i = 0; i < rows(); ++i)
        if (!included_(i, j)) m(i, j) = 0.0;
  }

 private:
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> included_;
};

}  // namespace bgsub
