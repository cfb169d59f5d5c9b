// Copyright (c) 2026 pathvc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PATHVC_ALIGN_H_
#define PATHVC_ALIGN_H_

// Dynamic time warping between frame sequences, and projection of a warped
// source onto the reference timeline.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pathvc/error.h"
#include "pathvc/signal.h"

namespace pathvc {

/// Monotone, continuous path from (0, 0) to (m-1, n-1) through a local cost
/// matrix. total_cost is the left-to-right sum of local costs on the path.
struct AlignmentPath {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> steps;
  double total_cost = 0.0;
};

/// Returns true if the path starts at (0,0), ends at (rows-1, cols-1) and
/// every step advances i, j or both by exactly one.
inline bool IsValidPath(const AlignmentPath& path, Eigen::Index rows,
                        Eigen::Index cols) {
  if (path.steps.empty() || rows < 1 || cols < 1) return false;
  if (path.steps.front() != std::make_pair(Eigen::Index{0}, Eigen::Index{0}))
    return false;
  if (path.steps.back() != std::make_pair(rows - 1, cols - 1)) return false;
  for (std::size_t k = 1; k < path.steps.size(); ++k) {
    const auto di = path.steps[k].first - path.steps[k - 1].first;
    const auto dj = path.steps[k].second - path.steps[k - 1].second;
    if (di < 0 || dj < 0 || di > 1 || dj > 1 || (di == 0 && dj == 0))
      return false;
  }
  return true;
}

/// DTW over a precomputed local cost matrix with steps (1,1), (1,0), (0,1)
/// and no global constraint. Backtrace ties prefer (1,1), then (1,0), then
/// (0,1).
template <typename Derived>
AlignmentPath DtwFromCost(const Eigen::MatrixBase<Derived>& local) {
  const Eigen::Index m = local.rows();
  const Eigen::Index n = local.cols();
  if (m == 0 || n == 0)
    throw Error(ErrorCode::kEmptySequence, "DTW needs non-empty sequences");

  Matrix<double> acc(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double c = static_cast<double>(local(i, j));
      if (i == 0 && j == 0) {
        acc(i, j) = c;
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      if (i > 0 && j > 0) best = std::min(best, acc(i - 1, j - 1));
      if (i > 0) best = std::min(best, acc(i - 1, j));
      if (j > 0) best = std::min(best, acc(i, j - 1));
      acc(i, j) = c + best;
    }
  }

  AlignmentPath path;
  Eigen::Index i = m - 1, j = n - 1;
  path.steps.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const double diag = acc(i - 1, j - 1);
      const double up = acc(i - 1, j);
      const double left = acc(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    } else if (i > 0) {
      --i;
    } else {
      --j;
    }
    path.steps.emplace_back(i, j);
  }
  std::reverse(path.steps.begin(), path.steps.end());
  path.total_cost = acc(m - 1, n - 1);
  return path;
}

/// Euclidean local costs between rows of two frame sequences.
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> EuclideanCost(
    const Eigen::MatrixBase<DerivedA>& source,
    const Eigen::MatrixBase<DerivedB>& reference) {
  if (source.cols() != reference.cols())
    throw Error(ErrorCode::kDimensionMismatch,
                "feature dimensions differ: " + std::to_string(source.cols()) +
                    " vs " + std::to_string(reference.cols()));
  Matrix<typename DerivedA::Scalar> cost(source.rows(), reference.rows());
  for (Eigen::Index i = 0; i < source.rows(); ++i)
    for (Eigen::Index j = 0; j < reference.rows(); ++j)
      cost(i, j) = (source.row(i) - reference.row(j)).norm();
  return cost;
}

/// Minimal-cost alignment of source frames (rows) to reference frames.
template <typename DerivedA, typename DerivedB>
AlignmentPath Dtw(const Eigen::MatrixBase<DerivedA>& source,
                  const Eigen::MatrixBase<DerivedB>& reference) {
  if (source.rows() == 0 || reference.rows() == 0)
    throw Error(ErrorCode::kEmptySequence, "DTW needs non-empty sequences");
  return DtwFromCost(EuclideanCost(source, reference));
}

/// Alignment features from band amplitudes: band levels in dB floored 30 dB
/// below the utterance maximum, then mean/variance normalised per band.
template <typename Scalar>
Matrix<Scalar> DtwFeatures(const BandSpectrogram<Scalar>& bands,
                           double floor_db = 30.0) {
  const Matrix<Scalar>& e = bands.energies;
  Matrix<Scalar> feat = Matrix<Scalar>::Zero(e.rows(), e.cols());
  const Scalar peak = e.size() ? e.maxCoeff() : Scalar(0);
  if (peak <= Scalar(0)) return feat;
  const Scalar floor = Scalar(20) * std::log10(peak) - Scalar(floor_db);
  for (Eigen::Index r = 0; r < e.rows(); ++r)
    for (Eigen::Index c = 0; c < e.cols(); ++c)
      feat(r, c) = e(r, c) > Scalar(0)
                       ? std::max(Scalar(20) * std::log10(e(r, c)), floor)
                       : floor;
  for (Eigen::Index c = 0; c < feat.cols(); ++c) {
    auto col = feat.col(c);
    col.array() -= col.mean();
    const Scalar sd = std::sqrt(col.squaredNorm() / Scalar(col.size()));
    if (sd > Scalar(0)) col /= sd;
  }
  return feat;
}

/// Projects source frames onto the reference timeline: output frame j is the
/// mean of every source frame i with (i, j) on the path.
template <typename Derived>
Matrix<typename Derived::Scalar> WarpToReference(
    const Eigen::MatrixBase<Derived>& source, const AlignmentPath& path,
    Eigen::Index reference_len) {
  using Scalar = typename Derived::Scalar;
  if (!IsValidPath(path, source.rows(), reference_len))
    throw Error(ErrorCode::kInvalidPath,
                "path does not span " + std::to_string(source.rows()) + "x" +
                    std::to_string(reference_len));
  Matrix<Scalar> out = Matrix<Scalar>::Zero(reference_len, source.cols());
  std::vector<int> counts(reference_len, 0);
  for (const auto& [i, j] : path.steps) {
    out.row(j) += source.row(i);
    ++counts[j];
  }
  for (Eigen::Index j = 0; j < reference_len; ++j)
    out.row(j) /= static_cast<Scalar>(counts[j]);
  return out;
}

template <typename Scalar>
BandSpectrogram<Scalar> WarpToReference(const BandSpectrogram<Scalar>& source,
                                        const AlignmentPath& path,
                                        Eigen::Index reference_len) {
  BandSpectrogram<Scalar> out = source;
  out.energies = WarpToReference(source.energies, path, reference_len);
  return out;
}

}  // namespace pathvc

#endif  // PATHVC_ALIGN_H_
