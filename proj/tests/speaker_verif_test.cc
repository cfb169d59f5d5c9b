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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "pathvc/speaker_verif.h"
#include "synthetic.h"
#include "test_util.h"

using namespace pathvc;
using pathvc::testing::BruteForceEer;
using pathvc::testing::Choose2;
using pathvc::testing::ClusterEmbeddings;
using pathvc::testing::SyntheticManifest;

namespace {

EmbeddingRecord Rec(const std::string& spk, EmbeddingStage st, int k,
                    Eigen::VectorXd v = Eigen::VectorXd::Ones(3)) {
  const std::string id = spk + "_" + EmbeddingStageName(st) + "_" + std::to_string(k);
  return {id, spk, st, id, std::move(v)};
}

}  // namespace

TEST_CASE("cosine similarity") {
  Eigen::Vector3d a(1, 2, 3), b(-2, 0.5, 4);
  CHECK(CosineSimilarity(a, a) == doctest::Approx(1.0));
  CHECK(CosineSimilarity(a, (-a).eval()) == doctest::Approx(-1.0));
  CHECK(CosineSimilarity(a, b) == doctest::Approx(CosineSimilarity(b, a)));
  CHECK(CosineSimilarity((3.0 * a).eval(), b) ==
        doctest::Approx(CosineSimilarity(a, b)));
  CHECK(CosineSimilarity(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 5)) ==
        doctest::Approx(0.0));
  CHECK(CosineSimilarity(a, b) ==
        doctest::Approx((1 * -2 + 2 * 0.5 + 3 * 4) /
                        (std::sqrt(14.0) * std::sqrt(4 + 0.25 + 16))));
  CHECK_THROWS_WITH_AS(CosineSimilarity(Eigen::VectorXd(a), Eigen::VectorXd::Ones(2)),
                       doctest::Contains("DimensionMismatch"), Error);
  CHECK_THROWS_WITH_AS(CosineSimilarity(a, Eigen::Vector3d::Zero()),
                       doctest::Contains("ZeroVector"), Error);
}

TEST_CASE("EER worked examples") {
  const EerResult r = Eer({0.8, 0.6, 0.4}, {0.5, 0.3, 0.1});
  CHECK(r.eer == doctest::Approx(100.0 / 3.0));
  CHECK(r.threshold == doctest::Approx(0.45));
  CHECK(r.num_target == 3);
  CHECK(r.num_nontarget == 3);

  CHECK(Eer({0.8, 0.9}, {0.1, 0.2}).eer == 0.0);
  CHECK(Eer({0.1, 0.5, 0.9}, {0.1, 0.5, 0.9}).eer == 50.0);
  CHECK(Eer({0.3, 0.3}, {0.3}).eer == 50.0);
  CHECK(Eer({0.1}, {0.9}).eer == 100.0);
  CHECK_THROWS_WITH_AS(Eer({}, {0.1}), doctest::Contains("EmptyScores"), Error);
}

TEST_CASE("EER agrees with a brute-force threshold sweep") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(1, 40);
  std::uniform_int_distribution<int> coarse(0, 9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> tar(count(rng)), non(count(rng));
    const bool ties = trial % 3 == 0;
    const double shift = 0.05 * (trial % 20);
    for (auto& s : tar) s = ties ? 0.1 * coarse(rng) : g(rng) + shift;
    for (auto& s : non) s = ties ? 0.1 * coarse(rng) : g(rng) - shift;
    const EerResult r = Eer(tar, non);
    CHECK(std::abs(r.eer - BruteForceEer(tar, non)) < 1e-9);
    CHECK(r.closest_eer >= 0.0);
    CHECK(r.closest_eer <= 100.0);
  }
}

TEST_CASE("EER grows as target scores move towards non-targets") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> tar(200), non(200);
  for (auto& s : tar) s = g(rng);
  for (auto& s : non) s = g(rng);
  double prev = -1.0;
  for (double shift : {3.0, 2.0, 1.0, 0.5, 0.0}) {
    std::vector<double> moved = tar;
    for (auto& s : moved) s += shift;
    const double e = Eer(moved, non).eer;
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("trial generation") {
  CorpusManifest m = SyntheticManifest(2, 1, 1);
  std::vector<EmbeddingRecord> recs = {
      Rec("PAAA", EmbeddingStage::kT1, 0), Rec("PAAA", EmbeddingStage::kT1, 1),
      Rec("PAAA", EmbeddingStage::kT2, 0), Rec("PAAB", EmbeddingStage::kT1, 0),
      Rec("VAAA", EmbeddingStage::kControl, 0),
      Rec("RAAA", EmbeddingStage::kT3, 0)};

  SUBCASE("groups") {
    const auto trials = BuildTrials(recs, m);
    int t1 = 0, t12 = 0, non = 0;
    for (const auto& t : trials) {
      CHECK(t.a < t.b);
      t1 += t.group == TrialGroup::kT1;
      t12 += t.group == TrialGroup::kT1T2;
      non += t.group == TrialGroup::kNonTarget;
    }
    CHECK(t1 == 1);
    CHECK(t12 == 2);
    CHECK(non == 3);
    CHECK(BuildTrials(recs, m, {true}).size() == trials.size() + 4);
  }

  SUBCASE("records must match the manifest") {
    recs.push_back(Rec("PZZZ", EmbeddingStage::kT1, 0));
    CHECK_THROWS_WITH_AS(BuildTrials(recs, m),
                         doctest::Contains("UnknownSpeaker"), Error);
    recs.back() = Rec("PAAA", EmbeddingStage::kT3, 0);
    CHECK_THROWS_WITH_AS(BuildTrials(recs, m), doctest::Contains("UnknownStage"),
                         Error);
    recs.back() = Rec("XTRN", EmbeddingStage::kExternal, 0);
    CHECK_NOTHROW(BuildTrials(recs, m));
  }
}

TEST_CASE("trial counts follow the combinatorics on random manifests") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> speakers(1, 6), utts(0, 5), coin(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const CorpusManifest m =
        SyntheticManifest(speakers(rng), speakers(rng) - 1, speakers(rng) - 1);
    std::vector<EmbeddingRecord> recs;
    long t1 = 0, t12 = 0, eligible = 0, eligible_pairs_same = 0;
    const bool controls = coin(rng);
    for (const auto& spk : m.speakers) {
      long per_speaker = 0;
      auto add = [&](EmbeddingStage st, int n) {
        for (int k = 0; k < n; ++k) recs.push_back(Rec(spk.id, st, k));
      };
      if (spk.group == SpeakerGroup::kControl) {
        const int n = utts(rng);
        add(EmbeddingStage::kControl, n);
        if (controls) per_speaker += n;
      } else if (spk.group == SpeakerGroup::kPostTreatment) {
        add(EmbeddingStage::kT3, utts(rng));
      } else {
        const int n1 = utts(rng), n2 = utts(rng);
        add(EmbeddingStage::kT1, n1);
        add(EmbeddingStage::kT2, n2);
        t1 += Choose2(n1);
        t12 += static_cast<long>(n1) * n2;
        per_speaker += n1 + n2;
      }
      eligible += per_speaker;
      eligible_pairs_same += Choose2(per_speaker);
    }
    const int externals = controls ? utts(rng) : 0;
    for (int k = 0; k < externals; ++k)
      recs.push_back(Rec("XTRN", EmbeddingStage::kExternal, k));
    // External records share one speaker label.
    eligible += externals;
    eligible_pairs_same += Choose2(externals);
    std::shuffle(recs.begin(), recs.end(), rng);

    const auto trials = BuildTrials(recs, m, {controls});
    long c1 = 0, c12 = 0, cn = 0;
    for (const auto& t : trials) {
      REQUIRE(t.a < t.b);
      const bool same = recs[t.a].speaker_id == recs[t.b].speaker_id;
      CHECK(same == (t.group != TrialGroup::kNonTarget));
      c1 += t.group == TrialGroup::kT1;
      c12 += t.group == TrialGroup::kT1T2;
      cn += t.group == TrialGroup::kNonTarget;
    }
    CHECK(c1 == t1);
    CHECK(c12 == t12);
    CHECK(cn == Choose2(eligible) - eligible_pairs_same);
  }
}

TEST_CASE("drifted second-stage embeddings raise the EER") {
  std::mt19937_64 rng(5);
  const CorpusManifest m = SyntheticManifest(8, 0, 0);
  const auto recs = ClusterEmbeddings(m, {10}, rng);
  const auto scored = ScoreTrials(recs, BuildTrials(recs, m));
  const EerTable table = MakeEerTable(scored);
  REQUIRE(table.speakers.size() == 8);
  for (std::size_t s = 0; s < table.speakers.size(); ++s) {
    REQUIRE(table.t1[s].has_value());
    REQUIRE(table.t1_t2[s].has_value());
    CHECK(table.t1_t2[s]->eer >= table.t1[s]->eer);
  }
  CHECK(table.all_t1->eer < table.all_t1_t2->eer);

  const EerTable pooled = MakeEerTable(scored, false);
  CHECK(pooled.speakers.empty());
  CHECK(pooled.all_t1->eer == table.all_t1->eer);
}

TEST_CASE("per-speaker EER table pools the right trials") {
  std::vector<ScoredTrial> t = {
      {TrialGroup::kT1, "A", "A", 0.9, "a1", "a2"},
      {TrialGroup::kT1T2, "A", "A", 0.2, "a1", "a3"},
      {TrialGroup::kNonTarget, "A", "B", 0.5, "a1", "b1"},
      {TrialGroup::kNonTarget, "B", "C", 0.95, "b1", "c1"},
      {TrialGroup::kT1, "B", "B", 0.1, "b1", "b2"}};
  const EerTable table = MakeEerTable(t, true, {"A", "B"});
  CHECK(table.t1[0]->eer == Eer({0.9}, {0.5}).eer);
  CHECK(table.t1_t2[0]->eer == Eer({0.9, 0.2}, {0.5}).eer);
  CHECK(table.t1[1]->eer == Eer({0.1}, {0.5, 0.95}).eer);
  CHECK(table.all_t1->eer == Eer({0.9, 0.1}, {0.5, 0.95}).eer);
  const EerTable none = MakeEerTable({t[0]}, true, {"A"});
  CHECK_FALSE(none.t1[0].has_value());
}

TEST_CASE("embedding files") {
  pathvc::testing::ScratchDir dir("emb");
  EmbeddingRecord r = Rec("PAAA", EmbeddingStage::kT2, 3,
                          Eigen::Vector3d(0.1, -2.5, 1e-7));
  const auto path = dir.Write("e.jsonl", FormatEmbedding(r) + "\n\n" +
                                             FormatEmbedding(Rec("VAAA", EmbeddingStage::kControl, 0)) + "\n");
  const auto back = ReadEmbeddings(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == r.id);
  CHECK(back[0].stage == EmbeddingStage::kT2);
  CHECK(back[0].vector == r.vector);
  CHECK(back[1].stage == EmbeddingStage::kControl);

  const std::string bad_dim =
      "{\"id\":\"x\",\"speaker_id\":\"PAAA\",\"stage\":\"T1\","
      "\"utterance_id\":\"x\",\"dim\":3,\"values\":[1,2]}\n";
  CHECK_THROWS_WITH_AS(ReadEmbeddings(dir.Write("d.jsonl", bad_dim)),
                       doctest::Contains("DimensionMismatch"), Error);
  const std::string zero =
      "{\"id\":\"x\",\"speaker_id\":\"PAAA\",\"stage\":\"T1\","
      "\"utterance_id\":\"x\",\"dim\":2,\"values\":[0,0]}\n";
  CHECK_THROWS_WITH_AS(ReadEmbeddings(dir.Write("z.jsonl", zero)),
                       doctest::Contains("ZeroVector"), Error);
  const std::string stage =
      "{\"id\":\"x\",\"speaker_id\":\"PAAA\",\"stage\":\"T9\","
      "\"utterance_id\":\"x\",\"dim\":1,\"values\":[1]}\n";
  CHECK_THROWS_WITH_AS(ReadEmbeddings(dir.Write("s.jsonl", stage)),
                       doctest::Contains("ParseError"), Error);
  const std::string mixed =
      "{\"id\":\"x\",\"speaker_id\":\"PAAA\",\"stage\":\"T1\","
      "\"utterance_id\":\"x\",\"dim\":1,\"values\":[1]}\n"
      "{\"id\":\"y\",\"speaker_id\":\"PAAA\",\"stage\":\"T1\","
      "\"utterance_id\":\"y\",\"dim\":2,\"values\":[1,1]}\n";
  CHECK_THROWS_WITH_AS(ReadEmbeddings(dir.Write("m.jsonl", mixed)),
                       doctest::Contains("DimensionMismatch"), Error);
  CHECK_THROWS_WITH_AS(ReadEmbeddings(dir.File("none.jsonl")),
                       doctest::Contains("MissingInput"), Error);
}
