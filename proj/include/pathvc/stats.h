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

#ifndef PATHVC_STATS_H_
#define PATHVC_STATS_H_

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathvc/error.h"

namespace pathvc {

struct CorrelationResult {
  double r = 0.0;
  Eigen::Index n = 0;
};

/// Sample Pearson product-moment correlation.
template <typename DerivedX, typename DerivedY>
CorrelationResult Pearson(const Eigen::DenseBase<DerivedX>& x,
                          const Eigen::DenseBase<DerivedY>& y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  if (x.size() < 2)
    throw Error(ErrorCode::kLengthMismatch, "need at least two items");
  const Eigen::ArrayXd xa = x.derived().template cast<double>().array();
  const Eigen::ArrayXd ya = y.derived().template cast<double>().array();
  const Eigen::ArrayXd dx = xa - xa.mean();
  const Eigen::ArrayXd dy = ya - ya.mean();
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCode::kZeroVariance, "constant input to correlation");
  const double r = (dx * dy).sum() / std::sqrt(sxx * syy);
  return {std::max(-1.0, std::min(1.0, r)), x.size()};
}

inline CorrelationResult Pearson(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  return Pearson(
      Eigen::Map<const Eigen::VectorXd>(x.data(),
                                        static_cast<Eigen::Index>(x.size())),
      Eigen::Map<const Eigen::VectorXd>(y.data(),
                                        static_cast<Eigen::Index>(y.size())));
}

/// Rating scale with a grid step; a rating is valid when it lies in
/// [min, max] and (rating - min) is a multiple of step.
struct RatingScale {
  double min = 1.0;
  double max = 5.0;
  double step = 1.0;

  bool InRange(double v) const { return v >= min && v <= max; }
  bool OnGrid(double v) const {
    const double k = (v - min) / step;
    return std::abs(k - std::round(k)) < 1e-9;
  }
};

inline constexpr RatingScale kSeverityScale{1.0, 5.0, 1.0};
inline constexpr RatingScale kMosScale{1.0, 5.0, 0.5};
inline constexpr RatingScale kSimilarityScale{1.0, 4.0, 1.0};

/// Raters x items. Missing ratings are NaN.
struct RatingMatrix {
  Eigen::MatrixXd ratings;
  RatingScale scale;
  std::vector<std::string> rater_ids;
  std::vector<std::string> item_ids;

  /// Throws OutOfScale / InvalidIncrement naming the offending cell.
  void Validate() const;
};

/// 1 -> 0%, 4 -> 100% on the 4-point similarity scale.
double LikertToPercent(double rating, const RatingScale& scale = kSimilarityScale);

/// Per-item mean over the raters that rated the item.
Eigen::VectorXd AggregateSeverity(const RatingMatrix& ratings);

/// Rounds to the one-decimal reporting precision of averaged severities.
inline double RoundToTenth(double v) { return std::round(v * 10.0) / 10.0; }

/// Mean of Pearson correlations over all rater pairs.
CorrelationResult InterraterCorrelation(const RatingMatrix& ratings);

struct MosSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single rating
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
};

/// Mean with a 95% normal-approximation interval, after checking every rating
/// lies on the half-point grid of the 1-5 scale.
MosSummary MosAggregate(const std::vector<double>& ratings,
                        const RatingScale& scale = kMosScale);

/// Mean and sample standard deviation of Likert ratings mapped to percent.
struct PercentSummary {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};
PercentSummary LikertPercentSummary(const std::vector<double>& ratings,
                                    const RatingScale& scale = kSimilarityScale);

/// Delimited rating file. The first header cell names the scale
/// ("severity", "mos" or "similarity"); remaining header cells are item ids.
/// Each following row is a rater id and that rater's ratings; empty cells are
/// missing ratings.
struct RatingFile {
  std::string kind;
  RatingMatrix matrix;
};

RatingFile ReadRatings(const std::string& path);
RatingScale ScaleForKind(const std::string& kind);

}  // namespace pathvc

#endif  // PATHVC_STATS_H_
