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

#include <random>

#include "doctest.h"
#include "pathvc/stats.h"
#include "test_util.h"

using namespace pathvc;

namespace {

double DefinitionalPearson(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx) / std::sqrt(syy);
}

RatingMatrix Ratings(std::initializer_list<std::initializer_list<double>> rows,
                    RatingScale scale) {
  RatingMatrix m;
  m.scale = scale;
  m.ratings.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m.ratings(r, c++) = v;
    ++r;
  }
  return m;
}

double Mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

}  // namespace

TEST_CASE("Pearson") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  CHECK(Pearson(x, y).r == doctest::Approx(1.0));
  CHECK(Pearson(x, y).n == 5);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> len(2, 30);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(len(rng)), b(a.size());
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    const double r = Pearson(a, b).r;
    CHECK(std::abs(r - DefinitionalPearson(a, b)) < 1e-12);
    std::vector<double> up, down;
    for (double v : a) up.push_back(3.5 * v - 7.0), down.push_back(-0.25 * v + 2.0);
    CHECK(std::abs(Pearson(up, b).r - r) < 1e-12);
    CHECK(std::abs(Pearson(down, b).r + r) < 1e-12);
  }

  CHECK_THROWS_WITH_AS(Pearson(std::vector<double>{1, 2}, std::vector<double>{1}),
                       doctest::Contains("LengthMismatch"), Error);
  CHECK_THROWS_WITH_AS(Pearson(std::vector<double>{1}, std::vector<double>{1}),
                       doctest::Contains("LengthMismatch"), Error);
  CHECK_THROWS_WITH_AS(
      Pearson(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}),
      doctest::Contains("ZeroVariance"), Error);
}

TEST_CASE("Likert to percent") {
  CHECK(LikertToPercent(1.0) == 0.0);
  CHECK(LikertToPercent(4.0) == 100.0);
  CHECK(LikertToPercent(2.5) == doctest::Approx(50.0));
  double prev = -1.0;
  for (double r = 1.0; r <= 4.0; r += 0.25) {
    CHECK(LikertToPercent(r) > prev);
    prev = LikertToPercent(r);
  }
  CHECK_THROWS_WITH_AS(LikertToPercent(0.5), doctest::Contains("OutOfScale"),
                       Error);
  CHECK_THROWS_AS(LikertToPercent(4.5), Error);

  // {1, 4, 4, 3} -> {0, 100, 100, 66.67}
  const PercentSummary s = LikertPercentSummary({1, 4, 4, 3});
  const std::vector<double> pct = {0.0, 100.0, 100.0, 200.0 / 3.0};
  double ss = 0.0;
  for (double v : pct) ss += (v - Mean(pct)) * (v - Mean(pct));
  CHECK(s.n == 4);
  CHECK(s.mean == doctest::Approx(Mean(pct)));
  CHECK(s.sd == doctest::Approx(std::sqrt(ss / 3.0)));
}

TEST_CASE("severity aggregation") {
  const RatingMatrix m =
      Ratings({{5, 5, 1}, {5, 5, 1}, {4, 5, 1}, {5, 5, 1}, {4, 5, 1}}, kSeverityScale);
  const Eigen::VectorXd sev = AggregateSeverity(m);
  CHECK(RoundToTenth(sev(0)) == doctest::Approx(4.6));
  CHECK(sev(1) == 5.0);
  CHECK(sev(2) == 1.0);

  RatingMatrix gaps = m;
  gaps.ratings(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK(AggregateSeverity(gaps)(0) == doctest::Approx(4.5));

  RatingMatrix bad = m;
  bad.ratings(2, 1) = 6;
  CHECK_THROWS_WITH_AS(AggregateSeverity(bad), doctest::Contains("OutOfScale"),
                       Error);
  bad.ratings(2, 1) = 4.5;
  CHECK_THROWS_WITH_AS(AggregateSeverity(bad),
                       doctest::Contains("InvalidIncrement"), Error);
}

TEST_CASE("interrater correlation") {
  CHECK(InterraterCorrelation(Ratings({{1, 2, 4}, {1, 2, 4}}, kSeverityScale)).r ==
        doctest::Approx(1.0));
  CHECK(InterraterCorrelation(Ratings({{1, 3, 5}, {5, 3, 1}}, kSeverityScale)).r ==
        doctest::Approx(-1.0));
  CHECK(InterraterCorrelation(
            Ratings({{1, 3, 5}, {1, 3, 5}, {5, 3, 1}}, kSeverityScale))
            .r == doctest::Approx(-1.0 / 3.0));
  CHECK_THROWS_WITH_AS(
      InterraterCorrelation(Ratings({{3, 3, 3}, {1, 2, 3}}, kSeverityScale)),
      doctest::Contains("ZeroVariance"), Error);
  CHECK_THROWS_AS(InterraterCorrelation(Ratings({{1, 2, 3}}, kSeverityScale)),
                  Error);
}

TEST_CASE("MOS aggregation") {
  const MosSummary s = MosAggregate({3.0, 3.5, 4.0});
  CHECK(s.mean == doctest::Approx(3.5));
  CHECK(s.sd == doctest::Approx(0.5));
  CHECK(s.ci_low == doctest::Approx(3.5 - 1.96 * 0.5 / std::sqrt(3.0)));
  CHECK(s.ci_high == doctest::Approx(3.5 + 1.96 * 0.5 / std::sqrt(3.0)));
  const MosSummary one = MosAggregate({4.5});
  CHECK(one.mean == 4.5);
  CHECK(one.sd == 0.0);
  CHECK_THROWS_WITH_AS(MosAggregate({3.0, 3.25}),
                       doctest::Contains("InvalidIncrement"), Error);
  CHECK_THROWS_WITH_AS(MosAggregate({5.5}), doctest::Contains("OutOfScale"),
                       Error);
  CHECK_THROWS_AS(MosAggregate({}), Error);
}

TEST_CASE("naturalness table aggregates") {
  const std::vector<double> ppg = {3.66, 3.58, 2.89, 2.55, 2.37, 2.51, 2.09};
  const std::vector<double> gst = {3.31, 2.72, 2.63, 2.42, 2.16, 2.18, 1.86};
  const std::vector<double> gt = {4.65, 4.47, 3.79, 3.19, 3.90, 3.13, 2.99};
  const std::vector<double> severity = {4.6, 4.6, 3.8, 2.2, 1.8, 1.6, 1.0};
  CHECK(std::abs(Mean(ppg) - 2.81) <= 0.01);
  CHECK(std::abs(Mean(gst) - 2.47) <= 0.01);
  CHECK(std::abs(Mean(gt) - 3.73) <= 0.01);
  CHECK(std::abs(Pearson(severity, gt).r - 0.88) <= 0.02);
}

TEST_CASE("rating files") {
  pathvc::testing::ScratchDir dir("ratings");
  SUBCASE("severity matrix with a missing cell") {
    const auto f = ReadRatings(dir.Write(
        "s.csv", "severity,PGAF_T1,PGAF_T2\nslp1,5,4\n# comment\nslp2,4,\n"));
    CHECK(f.kind == "severity");
    CHECK(f.matrix.item_ids == std::vector<std::string>{"PGAF_T1", "PGAF_T2"});
    CHECK(f.matrix.rater_ids == std::vector<std::string>{"slp1", "slp2"});
    CHECK(std::isnan(f.matrix.ratings(1, 1)));
    CHECK(AggregateSeverity(f.matrix)(0) == doctest::Approx(4.5));
  }
  SUBCASE("out-of-scale rating names its row") {
    CHECK_THROWS_WITH_AS(
        ReadRatings(dir.Write("o.csv", "severity,A,B\nr1,1,2\nr2,6,2\n")),
        doctest::Contains("row 3"), Error);
    CHECK_THROWS_WITH_AS(
        ReadRatings(dir.Write("o2.csv", "severity,A,B\nr1,1,2\nr2,6,2\n")),
        doctest::Contains("OutOfScale"), Error);
  }
  SUBCASE("malformed input") {
    CHECK_THROWS_WITH_AS(ReadRatings(dir.Write("k.csv", "loudness,A\nr,1\n")),
                         doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(ReadRatings(dir.Write("n.csv", "mos,A\nr,abc\n")),
                         doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(ReadRatings(dir.Write("w.csv", "mos,A,B\nr,1\n")),
                         doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(ReadRatings(dir.File("absent.csv")),
                         doctest::Contains("MissingInput"), Error);
  }
  CHECK(ScaleForKind("mos").step == 0.5);
  CHECK(ScaleForKind("similarity").max == 4.0);
}
