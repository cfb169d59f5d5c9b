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

#ifndef PATHVC_CORPUS_H_
#define PATHVC_CORPUS_H_

// Manifest of the parallel pathological/control corpus: speakers, recording
// stages with severity ratings, utterance inventory and sentence partition.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pathvc {

enum class SpeakerGroup { kLongitudinal, kPostTreatment, kControl };
enum class Stage { kT1, kT2, kT3 };
enum class Split { kTrain, kDev, kTest };

const char* StageName(Stage s);
std::optional<Stage> ParseStage(const std::string& s);
const char* SplitName(Split s);
std::optional<Split> ParseSplit(const std::string& s);
char GroupCode(SpeakerGroup g);

inline constexpr int kSentenceCount = 92;
inline constexpr int kTrainCount = 78;
inline constexpr int kDevCount = 7;
inline constexpr int kTestCount = 7;

struct StageInfo {
  double severity = 0.0;
  bool premature_stop = false;
  bool operator==(const StageInfo&) const = default;
};

struct SpeakerRecord {
  std::string id;
  SpeakerGroup group = SpeakerGroup::kLongitudinal;
  char gender = 'M';
  std::map<Stage, StageInfo> stages;

  bool HasStage(Stage s) const { return stages.count(s) != 0; }
  std::optional<double> Severity(Stage s) const {
    const auto it = stages.find(s);
    if (it == stages.end()) return std::nullopt;
    return it->second.severity;
  }
  bool operator==(const SpeakerRecord&) const = default;
};

struct Utterance {
  std::string id;
  std::string speaker;
  std::optional<Stage> stage;  // empty for control recordings
  std::string sentence;
  std::string audio;  // relative to the corpus root
  bool operator==(const Utterance&) const = default;
};

struct Partition {
  uint64_t seed = 0;
  std::map<std::string, Split> assignment;

  std::vector<std::string> Sentences(Split split) const;
  bool operator==(const Partition&) const = default;
};

struct CorpusManifest {
  int format_version = 1;
  std::string corpus_root;
  std::vector<SpeakerRecord> speakers;
  std::vector<std::string> sentences;
  std::vector<Utterance> utterances;
  Partition partition;
  // Non-fatal notes gathered while loading (unknown fields etc.).
  std::vector<std::string> warnings;

  const SpeakerRecord* FindSpeaker(const std::string& id) const;
  const Utterance* FindUtterance(const std::string& id) const;

  bool operator==(const CorpusManifest& o) const {
    return format_version == o.format_version && corpus_root == o.corpus_root &&
           speakers == o.speakers && sentences == o.sentences &&
           utterances == o.utterances && partition == o.partition;
  }
};

inline constexpr int kManifestFormatVersion = 1;
inline constexpr const char* kCorpusRootEnv = "PATHVC_CORPUS_ROOT";

CorpusManifest LoadManifest(const std::string& path);
CorpusManifest ParseManifest(const std::string& text,
                             const std::string& source = "<manifest>");
std::string SerializeManifest(const CorpusManifest& manifest);

/// Seeded deterministic 78/7/7 split of exactly 92 distinct sentence ids.
/// The result does not depend on the order of `sentence_ids`.
Partition PartitionSentences(const std::vector<std::string>& sentence_ids,
                             uint64_t seed);

/// Utterances of one speaker/stage inside a split, ordered by sentence id.
/// Pass an empty stage for control speakers.
std::vector<Utterance> SelectUtterances(const CorpusManifest& manifest,
                                        const std::string& speaker,
                                        std::optional<Stage> stage,
                                        Split split);

/// Corpus root precedence: explicit override, then the environment variable,
/// then the manifest's own field.
std::string ResolveCorpusRoot(const CorpusManifest& manifest,
                              const std::string& override_root = {});

}  // namespace pathvc

#endif  // PATHVC_CORPUS_H_
