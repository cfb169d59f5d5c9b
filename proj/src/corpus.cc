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

#include "pathvc/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pathvc/error.h"

namespace pathvc {

using nlohmann::json;

const char* StageName(Stage s) {
  switch (s) {
    case Stage::kT1: return "T1";
    case Stage::kT2: return "T2";
    case Stage::kT3: return "T3";
  }
  return "?";
}

std::optional<Stage> ParseStage(const std::string& s) {
  if (s == "T1") return Stage::kT1;
  if (s == "T2") return Stage::kT2;
  if (s == "T3") return Stage::kT3;
  return std::nullopt;
}

const char* SplitName(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> ParseSplit(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  if (s == "test") return Split::kTest;
  return std::nullopt;
}

char GroupCode(SpeakerGroup g) {
  switch (g) {
    case SpeakerGroup::kLongitudinal: return 'P';
    case SpeakerGroup::kPostTreatment: return 'R';
    case SpeakerGroup::kControl: return 'V';
  }
  return '?';
}

std::vector<std::string> Partition::Sentences(Split split) const {
  std::vector<std::string> out;
  for (const auto& [id, s] : assignment)
    if (s == split) out.push_back(id);
  return out;
}

const SpeakerRecord* CorpusManifest::FindSpeaker(const std::string& id) const {
  for (const auto& s : speakers)
    if (s.id == id) return &s;
  return nullptr;
}

const Utterance* CorpusManifest::FindUtterance(const std::string& id) const {
  for (const auto& u : utterances)
    if (u.id == id) return &u;
  return nullptr;
}

Partition PartitionSentences(const std::vector<std::string>& sentence_ids,
                             uint64_t seed) {
  std::vector<std::string> ids = sentence_ids;
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw Error(ErrorCode::kWrongCount, "sentence ids are not distinct");
  if (ids.size() != static_cast<std::size_t>(kSentenceCount))
    throw Error(ErrorCode::kWrongCount,
                "expected " + std::to_string(kSentenceCount) +
                    " sentences, got " + std::to_string(ids.size()));
  // mt19937_64 output is fully specified, unlike std::shuffle.
  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(ids[i], ids[j]);
  }
  Partition p;
  p.seed = seed;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Split s = k < static_cast<std::size_t>(kTrainCount) ? Split::kTrain
                    : k < static_cast<std::size_t>(kTrainCount + kDevCount)
                        ? Split::kDev
                        : Split::kTest;
    p.assignment[ids[k]] = s;
  }
  return p;
}

std::vector<Utterance> SelectUtterances(const CorpusManifest& manifest,
                                        const std::string& speaker,
                                        std::optional<Stage> stage,
                                        Split split) {
  const SpeakerRecord* rec = manifest.FindSpeaker(speaker);
  if (rec == nullptr)
    throw Error(ErrorCode::kUnknownSpeaker, "no speaker '" + speaker + "'");
  if (stage.has_value() && !rec->HasStage(*stage))
    throw Error(ErrorCode::kUnknownStage,
                speaker + " has no stage " + StageName(*stage));
  if (!stage.has_value() && rec->group != SpeakerGroup::kControl)
    throw Error(ErrorCode::kUnknownStage,
                speaker + " is not a control speaker; a stage is required");
  std::vector<Utterance> out;
  for (const auto& u : manifest.utterances) {
    if (u.speaker != speaker || u.stage != stage) continue;
    const auto it = manifest.partition.assignment.find(u.sentence);
    if (it != manifest.partition.assignment.end() && it->second == split)
      out.push_back(u);
  }
  std::sort(out.begin(), out.end(), [](const Utterance& a, const Utterance& b) {
    return a.sentence < b.sentence;
  });
  return out;
}

std::string ResolveCorpusRoot(const CorpusManifest& manifest,
                              const std::string& override_root) {
  if (!override_root.empty()) return override_root;
  if (const char* env = std::getenv(kCorpusRootEnv); env && *env) return env;
  return manifest.corpus_root;
}

namespace {

[[noreturn]] void Invalid(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kValidationError, where + ": " + what);
}

void WarnUnknown(const json& obj, std::initializer_list<const char*> known,
                 const std::string& where, std::vector<std::string>* warnings) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end())
      warnings->push_back(where + ": ignoring unknown field '" + key + "'");
  }
}

std::string RequireString(const json& obj, const char* key,
                          const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw Error(ErrorCode::kParseError,
                where + ": missing string field '" + key + "'");
  return obj[key].get<std::string>();
}

bool IsSpeakerCode(const std::string& id) {
  return id.size() == 4 && std::all_of(id.begin(), id.end(), [](char c) {
           return c >= 'A' && c <= 'Z';
         });
}

SpeakerRecord ParseSpeaker(const json& j, const std::string& where,
                           std::vector<std::string>* warnings) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, where + ": object expected");
  WarnUnknown(j, {"id", "group", "gender", "stages"}, where, warnings);
  SpeakerRecord s;
  s.id = RequireString(j, "id", where);
  const std::string at = where + " (" + s.id + ")";
  if (!IsSpeakerCode(s.id)) Invalid(at, "speaker id must be a 4-letter code");
  const std::string group = RequireString(j, "group", where);
  if (group == "P") s.group = SpeakerGroup::kLongitudinal;
  else if (group == "R") s.group = SpeakerGroup::kPostTreatment;
  else if (group == "V") s.group = SpeakerGroup::kControl;
  else Invalid(at, "group must be P, R or V");
  const std::string gender = RequireString(j, "gender", where);
  if (gender != "M" && gender != "F") Invalid(at, "gender must be M or F");
  s.gender = gender[0];
  if (j.contains("stages")) {
    if (!j["stages"].is_object())
      throw Error(ErrorCode::kParseError, at + ": stages must be an object");
    for (const auto& [name, info] : j["stages"].items()) {
      const auto stage = ParseStage(name);
      if (!stage) Invalid(at, "unknown stage '" + name + "'");
      if (!info.is_object() || !info.contains("severity") ||
          !info["severity"].is_number())
        Invalid(at, "stage " + name + " needs a numeric severity");
      WarnUnknown(info, {"severity", "premature_stop"}, at + "." + name,
                  warnings);
      StageInfo si;
      si.severity = info["severity"].get<double>();
      if (!(si.severity >= 1.0 && si.severity <= 5.0))
        Invalid(at, "severity " + info["severity"].dump() + " outside [1, 5]");
      if (std::abs(si.severity * 10.0 - std::round(si.severity * 10.0)) > 1e-9)
        Invalid(at, "severity has more than one decimal");
      si.premature_stop = info.value("premature_stop", false);
      s.stages[*stage] = si;
    }
  }
  switch (s.group) {
    case SpeakerGroup::kLongitudinal:
      if (s.stages.size() < 2) Invalid(at, "group P needs at least two stages");
      break;
    case SpeakerGroup::kPostTreatment:
      if (s.stages.size() != 1 || !s.HasStage(Stage::kT3))
        Invalid(at, "group R must have exactly stage T3");
      break;
    case SpeakerGroup::kControl:
      if (!s.stages.empty()) Invalid(at, "control speakers have no stages");
      break;
  }
  return s;
}

}  // namespace

CorpusManifest ParseManifest(const std::string& text,
                             const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, source + ": " + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::kParseError, source + ": top level must be an object");

  CorpusManifest m;
  WarnUnknown(j,
              {"format_version", "corpus_root", "sentences", "speakers",
               "utterances", "partition"},
              source, &m.warnings);
  if (!j.contains("format_version") || !j["format_version"].is_number_integer())
    throw Error(ErrorCode::kParseError, source + ": missing format_version");
  m.format_version = j["format_version"].get<int>();
  if (m.format_version > kManifestFormatVersion)
    m.warnings.push_back(source + ": format_version " +
                         std::to_string(m.format_version) +
                         " is newer than supported; unknown fields ignored");
  m.corpus_root = j.value("corpus_root", std::string());

  if (!j.contains("sentences") || !j["sentences"].is_array())
    throw Error(ErrorCode::kParseError, source + ": missing sentences array");
  for (const auto& s : j["sentences"]) {
    if (!s.is_string())
      throw Error(ErrorCode::kParseError, source + ": sentence ids are strings");
    m.sentences.push_back(s.get<std::string>());
  }
  const std::set<std::string> sentence_set(m.sentences.begin(),
                                           m.sentences.end());
  if (sentence_set.size() != m.sentences.size())
    Invalid(source + ".sentences", "duplicate sentence id");
  if (m.sentences.size() != static_cast<std::size_t>(kSentenceCount))
    Invalid(source + ".sentences",
            "expected " + std::to_string(kSentenceCount) + " sentences, got " +
                std::to_string(m.sentences.size()));

  if (!j.contains("speakers") || !j["speakers"].is_array())
    throw Error(ErrorCode::kParseError, source + ": missing speakers array");
  std::set<std::string> speaker_ids;
  for (std::size_t k = 0; k < j["speakers"].size(); ++k) {
    const std::string where = source + ".speakers[" + std::to_string(k) + "]";
    SpeakerRecord s = ParseSpeaker(j["speakers"][k], where, &m.warnings);
    if (!speaker_ids.insert(s.id).second)
      Invalid(where, "duplicate speaker id " + s.id);
    m.speakers.push_back(std::move(s));
  }

  if (j.contains("utterances")) {
    if (!j["utterances"].is_array())
      throw Error(ErrorCode::kParseError, source + ": utterances must be an array");
    std::set<std::string> utt_ids;
    std::map<std::pair<std::string, std::string>, int> per_stage;
    for (std::size_t k = 0; k < j["utterances"].size(); ++k) {
      const json& u = j["utterances"][k];
      const std::string where =
          source + ".utterances[" + std::to_string(k) + "]";
      if (!u.is_object())
        throw Error(ErrorCode::kParseError, where + ": object expected");
      WarnUnknown(u, {"id", "speaker", "stage", "sentence", "audio"}, where,
                  &m.warnings);
      Utterance utt;
      utt.id = RequireString(u, "id", where);
      utt.speaker = RequireString(u, "speaker", where);
      utt.sentence = RequireString(u, "sentence", where);
      utt.audio = u.value("audio", std::string());
      const std::string stage = u.value("stage", std::string());
      if (!stage.empty() && stage != "control") {
        utt.stage = ParseStage(stage);
        if (!utt.stage) Invalid(where, "unknown stage '" + stage + "'");
      }
      if (!utt_ids.insert(utt.id).second)
        Invalid(where, "duplicate utterance id " + utt.id);
      const SpeakerRecord* spk = m.FindSpeaker(utt.speaker);
      if (spk == nullptr) Invalid(where, "undeclared speaker " + utt.speaker);
      if (utt.stage.has_value() ? !spk->HasStage(*utt.stage)
                                : spk->group != SpeakerGroup::kControl)
        Invalid(where, "stage '" + stage + "' not declared for " + utt.speaker);
      if (!sentence_set.count(utt.sentence))
        Invalid(where, "undeclared sentence " + utt.sentence);
      if (++per_stage[{utt.speaker, stage}] > kSentenceCount)
        Invalid(where, "more than " + std::to_string(kSentenceCount) +
                           " utterances for " + utt.speaker + " " + stage);
      m.utterances.push_back(std::move(utt));
    }
  }

  const json partition = j.value("partition", json::object());
  const uint64_t seed = partition.value("seed", uint64_t{0});
  if (partition.contains("train")) {
    m.partition.seed = seed;
    for (Split split : {Split::kTrain, Split::kDev, Split::kTest}) {
      const char* name = SplitName(split);
      if (!partition.contains(name) || !partition[name].is_array())
        throw Error(ErrorCode::kParseError,
                    source + ".partition: missing " + name + " list");
      for (const auto& s : partition[name]) {
        const std::string id = s.get<std::string>();
        if (!sentence_set.count(id))
          Invalid(source + ".partition", "undeclared sentence " + id);
        if (!m.partition.assignment.emplace(id, split).second)
          Invalid(source + ".partition", "sentence " + id + " in two splits");
      }
    }
    if (m.partition.Sentences(Split::kTrain).size() != kTrainCount ||
        m.partition.Sentences(Split::kDev).size() != kDevCount ||
        m.partition.Sentences(Split::kTest).size() != kTestCount)
      Invalid(source + ".partition", "split sizes must be 78/7/7");
  } else {
    m.partition = PartitionSentences(m.sentences, seed);
  }
  return m;
}

CorpusManifest LoadManifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ParseManifest(ss.str(), path);
}

std::string SerializeManifest(const CorpusManifest& m) {
  nlohmann::ordered_json j;
  j["format_version"] = m.format_version;
  if (!m.corpus_root.empty()) j["corpus_root"] = m.corpus_root;
  j["sentences"] = m.sentences;
  j["speakers"] = nlohmann::ordered_json::array();
  for (const auto& s : m.speakers) {
    nlohmann::ordered_json js;
    js["id"] = s.id;
    js["group"] = std::string(1, GroupCode(s.group));
    js["gender"] = std::string(1, s.gender);
    if (!s.stages.empty()) {
      nlohmann::ordered_json stages;
      for (const auto& [stage, info] : s.stages) {
        nlohmann::ordered_json ji;
        ji["severity"] = info.severity;
        if (info.premature_stop) ji["premature_stop"] = true;
        stages[StageName(stage)] = ji;
      }
      js["stages"] = stages;
    }
    j["speakers"].push_back(js);
  }
  j["utterances"] = nlohmann::ordered_json::array();
  for (const auto& u : m.utterances) {
    nlohmann::ordered_json ju;
    ju["id"] = u.id;
    ju["speaker"] = u.speaker;
    ju["stage"] = u.stage ? StageName(*u.stage) : "control";
    ju["sentence"] = u.sentence;
    if (!u.audio.empty()) ju["audio"] = u.audio;
    j["utterances"].push_back(ju);
  }
  nlohmann::ordered_json p;
  p["seed"] = m.partition.seed;
  for (Split split : {Split::kTrain, Split::kDev, Split::kTest})
    p[SplitName(split)] = m.partition.Sentences(split);
  j["partition"] = p;
  return j.dump(2) + "\n";
}

}  // namespace pathvc
