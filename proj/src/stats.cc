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

#include "pathvc/stats.h"

#include <fstream>

#include "pathvc/csv.h"

namespace pathvc {

namespace {

void CheckRating(double v, const RatingScale& scale, const std::string& where) {
  if (!scale.InRange(v))
    throw Error(ErrorCode::kOutOfScale,
                where + ": rating " + csv::FormatExact(v) + " outside [" +
                    csv::FormatExact(scale.min) + ", " +
                    csv::FormatExact(scale.max) + "]");
  if (!scale.OnGrid(v))
    throw Error(ErrorCode::kInvalidIncrement,
                where + ": rating " + csv::FormatExact(v) +
                    " is not a multiple of " + csv::FormatExact(scale.step));
}

}  // namespace

void RatingMatrix::Validate() const {
  for (Eigen::Index r = 0; r < ratings.rows(); ++r) {
    for (Eigen::Index c = 0; c < ratings.cols(); ++c) {
      const double v = ratings(r, c);
      if (std::isnan(v)) continue;
      const std::string rater =
          r < static_cast<Eigen::Index>(rater_ids.size()) ? rater_ids[r]
                                                          : std::to_string(r);
      const std::string item =
          c < static_cast<Eigen::Index>(item_ids.size()) ? item_ids[c]
                                                         : std::to_string(c);
      CheckRating(v, scale, "rater " + rater + ", item " + item);
    }
  }
}

double LikertToPercent(double rating, const RatingScale& scale) {
  if (!scale.InRange(rating))
    throw Error(ErrorCode::kOutOfScale,
                "rating " + csv::FormatExact(rating) + " outside the scale");
  return 100.0 * (rating - scale.min) / (scale.max - scale.min);
}

Eigen::VectorXd AggregateSeverity(const RatingMatrix& m) {
  m.Validate();
  Eigen::VectorXd out(m.ratings.cols());
  for (Eigen::Index c = 0; c < m.ratings.cols(); ++c) {
    double sum = 0.0;
    int n = 0;
    for (Eigen::Index r = 0; r < m.ratings.rows(); ++r) {
      if (std::isnan(m.ratings(r, c))) continue;
      sum += m.ratings(r, c);
      ++n;
    }
    if (n == 0)
      throw Error(ErrorCode::kEmptyInput,
                  "item " + std::to_string(c) + " has no ratings");
    out(c) = sum / n;
  }
  return out;
}

CorrelationResult InterraterCorrelation(const RatingMatrix& m) {
  m.Validate();
  if (m.ratings.rows() < 2)
    throw Error(ErrorCode::kEmptyInput, "need at least two raters");
  if (m.ratings.cols() < 2)
    throw Error(ErrorCode::kEmptyInput, "need at least two items");
  if (m.ratings.hasNaN())
    throw Error(ErrorCode::kEmptyInput,
                "interrater correlation needs a complete rating matrix");
  double sum = 0.0;
  int pairs = 0;
  for (Eigen::Index a = 0; a < m.ratings.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < m.ratings.rows(); ++b) {
      sum += Pearson(m.ratings.row(a).transpose(), m.ratings.row(b).transpose()).r;
      ++pairs;
    }
  }
  return {sum / pairs, m.ratings.cols()};
}

MosSummary MosAggregate(const std::vector<double>& ratings,
                        const RatingScale& scale) {
  if (ratings.empty()) throw Error(ErrorCode::kEmptyInput, "no ratings");
  for (std::size_t k = 0; k < ratings.size(); ++k)
    CheckRating(ratings[k], scale, "rating #" + std::to_string(k + 1));
  MosSummary s;
  s.n = ratings.size();
  double sum = 0.0;
  for (double v : ratings) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : ratings) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  const double half = 1.96 * s.sd / std::sqrt(static_cast<double>(s.n));
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

PercentSummary LikertPercentSummary(const std::vector<double>& ratings,
                                    const RatingScale& scale) {
  if (ratings.empty()) throw Error(ErrorCode::kEmptyInput, "no ratings");
  std::vector<double> pct;
  pct.reserve(ratings.size());
  for (std::size_t k = 0; k < ratings.size(); ++k) {
    CheckRating(ratings[k], scale, "rating #" + std::to_string(k + 1));
    pct.push_back(LikertToPercent(ratings[k], scale));
  }
  PercentSummary s;
  s.n = pct.size();
  double sum = 0.0;
  for (double v : pct) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : pct) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

RatingScale ScaleForKind(const std::string& kind) {
  if (kind == "severity") return kSeverityScale;
  if (kind == "mos") return kMosScale;
  if (kind == "similarity") return kSimilarityScale;
  throw Error(ErrorCode::kParseError,
              "unknown rating kind '" + kind +
                  "' (expected severity, mos or similarity)");
}

RatingFile ReadRatings(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::string line;
  int line_no = 0;
  RatingFile file;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') continue;
    auto fields = csv::SplitLine(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (file.kind.empty()) {
      file.kind = fields[0];
      file.matrix.scale = ScaleForKind(file.kind);
      file.matrix.item_ids.assign(fields.begin() + 1, fields.end());
      if (file.matrix.item_ids.empty())
        throw Error(ErrorCode::kParseError, where + ": header lists no items");
      continue;
    }
    if (fields.size() != file.matrix.item_ids.size() + 1)
      throw Error(ErrorCode::kParseError,
                  where + ": expected " +
                      std::to_string(file.matrix.item_ids.size() + 1) +
                      " fields, got " + std::to_string(fields.size()));
    file.matrix.rater_ids.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (fields[c].find_first_not_of(" \t") == std::string::npos) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      double v = 0.0;
      if (!csv::ParseDouble(fields[c], &v))
        throw Error(ErrorCode::kParseError,
                    where + ": '" + fields[c] + "' is not a number");
      CheckRating(v, file.matrix.scale,
                  where + " (row " + std::to_string(line_no) + ", item " +
                      file.matrix.item_ids[c - 1] + ")");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (file.kind.empty())
    throw Error(ErrorCode::kParseError, path + ": empty rating file");
  file.matrix.ratings.resize(static_cast<Eigen::Index>(rows.size()),
                             static_cast<Eigen::Index>(file.matrix.item_ids.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      file.matrix.ratings(static_cast<Eigen::Index>(r),
                          static_cast<Eigen::Index>(c)) = rows[r][c];
  return file;
}

}  // namespace pathvc
