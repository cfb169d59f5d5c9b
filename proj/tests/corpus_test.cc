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

#include <cstdlib>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "pathvc/corpus.h"
#include "synthetic.h"
#include "test_util.h"

using namespace pathvc;
using nlohmann::json;
using pathvc::testing::SentenceIds;

namespace {

json BaseManifest() {
  json j;
  j["format_version"] = 1;
  j["corpus_root"] = "/data/nki";
  j["sentences"] = SentenceIds();
  j["speakers"] = json::array(
      {{{"id", "PJSM"},
        {"group", "P"},
        {"gender", "M"},
        {"stages",
         {{"T1", {{"severity", 5.0}}},
          {"T2", {{"severity", 3.0}}},
          {"T3", {{"severity", 3.0}}}}}},
       {{"id", "PIIM"},
        {"group", "P"},
        {"gender", "M"},
        {"stages", {{"T1", {{"severity", 3.8}}}, {"T2", {{"severity", 2.4}}}}}},
       {{"id", "RQNF"},
        {"group", "R"},
        {"gender", "F"},
        {"stages", {{"T3", {{"severity", 1.6}, {"premature_stop", true}}}}}},
       {{"id", "VAHM"}, {"group", "V"}, {"gender", "M"}}});
  j["utterances"] = json::array();
  const auto ids = SentenceIds();
  for (const auto& s : ids) {
    j["utterances"].push_back({{"id", "PJSM_T1_" + s},
                               {"speaker", "PJSM"},
                               {"stage", "T1"},
                               {"sentence", s},
                               {"audio", "PJSM/T1/" + s + ".wav"}});
    j["utterances"].push_back({{"id", "VAHM_" + s},
                               {"speaker", "VAHM"},
                               {"stage", "control"},
                               {"sentence", s}});
  }
  // Premature stop: only the first 10 sentences were recorded.
  for (int k = 0; k < 10; ++k)
    j["utterances"].push_back({{"id", "RQNF_T3_" + ids[k]},
                               {"speaker", "RQNF"},
                               {"stage", "T3"},
                               {"sentence", ids[k]}});
  j["partition"] = {{"seed", 11}};
  return j;
}

CorpusManifest Parse(const json& j) { return ParseManifest(j.dump()); }

}  // namespace

TEST_CASE("speaker records") {
  const CorpusManifest m = Parse(BaseManifest());
  const SpeakerRecord* pjsm = m.FindSpeaker("PJSM");
  REQUIRE(pjsm != nullptr);
  CHECK(pjsm->group == SpeakerGroup::kLongitudinal);
  CHECK(pjsm->gender == 'M');
  CHECK(pjsm->Severity(Stage::kT1) == 5.0);
  CHECK(pjsm->Severity(Stage::kT2) == 3.0);
  CHECK(pjsm->Severity(Stage::kT3) == 3.0);

  const SpeakerRecord* piim = m.FindSpeaker("PIIM");
  REQUIRE(piim != nullptr);
  CHECK(piim->HasStage(Stage::kT2));
  CHECK_FALSE(piim->HasStage(Stage::kT3));
  CHECK_FALSE(piim->Severity(Stage::kT3).has_value());

  CHECK(m.FindSpeaker("RQNF")->stages.at(Stage::kT3).premature_stop);
  CHECK(m.FindSpeaker("XXXX") == nullptr);
  CHECK(m.warnings.empty());
  CHECK(m.utterances.size() == 2 * 92 + 10);
}

TEST_CASE("manifest validation") {
  json j = BaseManifest();
  SUBCASE("duplicate speaker id") {
    j["speakers"].push_back(j["speakers"][0]);
    CHECK_THROWS_WITH_AS(Parse(j), doctest::Contains("duplicate speaker id PJSM"),
                         Error);
  }
  SUBCASE("severity outside the scale") {
    j["speakers"][0]["stages"]["T1"]["severity"] = 5.5;
    CHECK_THROWS_WITH_AS(Parse(j), doctest::Contains("ValidationError"), Error);
  }
  SUBCASE("severity precision") {
    j["speakers"][0]["stages"]["T1"]["severity"] = 4.25;
    CHECK_THROWS_WITH_AS(Parse(j), doctest::Contains("one decimal"), Error);
  }
  SUBCASE("longitudinal speaker with one stage") {
    j["speakers"][1]["stages"].erase("T2");
    CHECK_THROWS_WITH_AS(Parse(j), doctest::Contains("speakers[1]"), Error);
  }
  SUBCASE("post-treatment speaker with T1") {
    j["speakers"][2]["stages"]["T1"] = {{"severity", 2.0}};
    CHECK_THROWS_AS(Parse(j), Error);
  }
  SUBCASE("control speaker with a stage") {
    j["speakers"][3]["stages"] = {{"T1", {{"severity", 5.0}}}};
    CHECK_THROWS_AS(Parse(j), Error);
  }
  SUBCASE("utterance for an undeclared stage") {
    j["utterances"].push_back(
        {{"id", "PIIM_T3_s001"}, {"speaker", "PIIM"}, {"stage", "T3"}, {"sentence", "s001"}});
    CHECK_THROWS_WITH_AS(Parse(j), doctest::Contains("utterances["), Error);
  }
  SUBCASE("wrong sentence count") {
    j["sentences"].erase(0);
    CHECK_THROWS_WITH_AS(Parse(j), doctest::Contains("ValidationError"), Error);
  }
  SUBCASE("bad id and syntax") {
    j["speakers"][0]["id"] = "pjsm";
    CHECK_THROWS_AS(Parse(j), Error);
    CHECK_THROWS_WITH_AS(ParseManifest("{\"format_version\": 1,"),
                         doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(LoadManifest("/nonexistent/manifest.json"),
                         doctest::Contains("MissingInput"), Error);
  }
  SUBCASE("unknown fields are warnings") {
    j["recording_site"] = "NKI";
    j["speakers"][0]["age"] = 60;
    const CorpusManifest m = Parse(j);
    CHECK(m.warnings.size() == 2);
  }
}

TEST_CASE("sentence partition") {
  const auto ids = SentenceIds();
  for (uint64_t seed : {0ull, 1ull, 42ull, 123456789ull}) {
    const Partition p = PartitionSentences(ids, seed);
    const auto train = p.Sentences(Split::kTrain);
    const auto dev = p.Sentences(Split::kDev);
    const auto test = p.Sentences(Split::kTest);
    CHECK(train.size() == 78);
    CHECK(dev.size() == 7);
    CHECK(test.size() == 7);
    std::set<std::string> all(train.begin(), train.end());
    all.insert(dev.begin(), dev.end());
    all.insert(test.begin(), test.end());
    CHECK(all == std::set<std::string>(ids.begin(), ids.end()));
    CHECK(PartitionSentences(ids, seed) == p);
    auto reversed = ids;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(PartitionSentences(reversed, seed) == p);
  }
  CHECK(PartitionSentences(ids, 1).assignment !=
        PartitionSentences(ids, 2).assignment);
  auto short_ids = ids;
  short_ids.pop_back();
  CHECK_THROWS_WITH_AS(PartitionSentences(short_ids, 0),
                       doctest::Contains("WrongCount"), Error);
  auto dup = ids;
  dup.back() = dup.front();
  CHECK_THROWS_AS(PartitionSentences(dup, 0), Error);
}

TEST_CASE("utterance selection") {
  const CorpusManifest m = Parse(BaseManifest());
  const auto test = SelectUtterances(m, "PJSM", Stage::kT1, Split::kTest);
  CHECK(test.size() == 7);
  CHECK(std::is_sorted(test.begin(), test.end(),
                       [](const auto& a, const auto& b) { return a.sentence < b.sentence; }));
  for (const auto& u : test)
    CHECK(m.partition.assignment.at(u.sentence) == Split::kTest);
  CHECK(SelectUtterances(m, "PJSM", Stage::kT1, Split::kTrain).size() == 78);
  CHECK(SelectUtterances(m, "VAHM", std::nullopt, Split::kDev).size() == 7);
  CHECK(SelectUtterances(m, "PJSM", Stage::kT2, Split::kTest).empty());

  std::size_t truncated = 0;
  for (Split s : {Split::kTrain, Split::kDev, Split::kTest}) {
    const auto u = SelectUtterances(m, "RQNF", Stage::kT3, s);
    truncated += u.size();
  }
  CHECK(truncated == 10);

  CHECK_THROWS_WITH_AS(SelectUtterances(m, "VAHM", Stage::kT1, Split::kTest),
                       doctest::Contains("UnknownStage"), Error);
  CHECK_THROWS_WITH_AS(SelectUtterances(m, "PIIM", Stage::kT3, Split::kTest),
                       doctest::Contains("UnknownStage"), Error);
  CHECK_THROWS_WITH_AS(SelectUtterances(m, "PZZZ", Stage::kT1, Split::kTest),
                       doctest::Contains("UnknownSpeaker"), Error);
}

TEST_CASE("a severely truncated speaker can have an empty split") {
  json j = BaseManifest();
  const CorpusManifest full = Parse(j);
  const std::string train_sentence = full.partition.Sentences(Split::kTrain)[0];
  json utts = json::array();
  for (const auto& u : j["utterances"])
    if (u["speaker"] != "RQNF") utts.push_back(u);
  utts.push_back({{"id", "RQNF_T3_x"},
                  {"speaker", "RQNF"},
                  {"stage", "T3"},
                  {"sentence", train_sentence}});
  j["utterances"] = utts;
  const CorpusManifest m = Parse(j);
  CHECK(SelectUtterances(m, "RQNF", Stage::kT3, Split::kTest).empty());
  CHECK(SelectUtterances(m, "RQNF", Stage::kT3, Split::kTrain).size() == 1);
}

TEST_CASE("serialisation round trip") {
  pathvc::testing::ScratchDir dir("manifest");
  const CorpusManifest m = Parse(BaseManifest());
  const std::string text = SerializeManifest(m);
  const CorpusManifest back = LoadManifest(dir.Write("m.json", text));
  CHECK(back == m);
  CHECK(SerializeManifest(back) == text);

  json explicit_split = json::parse(text);
  CHECK(explicit_split["partition"]["test"].size() == 7);
  explicit_split["partition"]["test"][0] = explicit_split["partition"]["dev"][0];
  CHECK_THROWS_WITH_AS(Parse(explicit_split), doctest::Contains("two splits"),
                       Error);
}

TEST_CASE("corpus root precedence") {
  CorpusManifest m;
  m.corpus_root = "/from/manifest";
  unsetenv(kCorpusRootEnv);
  CHECK(ResolveCorpusRoot(m) == "/from/manifest");
  setenv(kCorpusRootEnv, "/from/env", 1);
  CHECK(ResolveCorpusRoot(m) == "/from/env");
  CHECK(ResolveCorpusRoot(m, "/from/flag") == "/from/flag");
  unsetenv(kCorpusRootEnv);
}
