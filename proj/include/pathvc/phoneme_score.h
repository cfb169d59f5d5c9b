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

#ifndef PATHVC_PHONEME_SCORE_H_
#define PATHVC_PHONEME_SCORE_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pathvc {

struct PhonemeSequence {
  std::string utterance_id;
  std::vector<std::string> symbols;
};

struct EditSummary {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int reference_length = 0;

  int errors() const { return substitutions + deletions + insertions; }
  double per() const { return 100.0 * errors() / reference_length; }
};

/// Unit-cost Levenshtein alignment. Among minimal alignments the backtrace
/// prefers substitution (or match), then insertion, then deletion.
EditSummary EditAlign(const PhonemeSequence& reference,
                      const PhonemeSequence& hypothesis);

/// Pooled PER over one speaker's utterances: 100 * sum(S+D+I) / sum(N).
double PerSpeaker(
    const std::vector<std::pair<PhonemeSequence, PhonemeSequence>>& pairs);
double PerSpeaker(const std::vector<EditSummary>& edits);

/// Per-speaker PER for each system plus the unweighted mean over speakers.
struct PerTable {
  std::vector<std::string> systems;
  std::vector<std::string> speakers;
  // values[system][speaker index]
  std::map<std::string, std::vector<double>> values;
  std::map<std::string, double> average;
};

/// `per_system` maps system -> (speaker -> PER). Every system must cover the
/// same speakers.
PerTable MakePerTable(
    const std::vector<std::string>& systems,
    const std::map<std::string, std::map<std::string, double>>& per_system);

/// One line of a transcript file.
struct TranscriptRecord {
  std::string utterance_id;
  std::string speaker;  // optional; empty when absent
  std::vector<std::string> ref;
  std::vector<std::string> hyp;
};

// JSON-lines transcript file: {"utterance_id", "ref": [...], "hyp": [...]}.
std::vector<TranscriptRecord> ReadTranscripts(const std::string& path);
std::string FormatTranscript(const TranscriptRecord& record);

}  // namespace pathvc

#endif  // PATHVC_PHONEME_SCORE_H_
