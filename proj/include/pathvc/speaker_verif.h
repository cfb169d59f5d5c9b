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

#ifndef PATHVC_SPEAKER_VERIF_H_
#define PATHVC_SPEAKER_VERIF_H_

// Cosine scoring of speaker embeddings, trial construction for the
// pathology-impact study, and equal error rates.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathvc/corpus.h"
#include "pathvc/error.h"

namespace pathvc {

enum class EmbeddingStage { kT1, kT2, kT3, kControl, kExternal };

const char* EmbeddingStageName(EmbeddingStage s);
std::optional<EmbeddingStage> ParseEmbeddingStage(const std::string& s);

struct EmbeddingRecord {
  std::string id;
  std::string speaker_id;
  EmbeddingStage stage = EmbeddingStage::kT1;
  std::string utterance_id;
  Eigen::VectorXd vector;
};

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar CosineSimilarity(
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.size() != b.size())
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (na == Scalar(0) || nb == Scalar(0))
    throw Error(ErrorCode::kZeroVector, "cosine similarity of a zero vector");
  const Scalar c = a.dot(b) / (na * nb);
  return std::max(Scalar(-1), std::min(Scalar(1), c));
}

enum class TrialGroup { kT1, kT1T2, kNonTarget };
const char* TrialGroupName(TrialGroup g);
std::optional<TrialGroup> ParseTrialGroup(const std::string& s);

/// A pair of embedding records, by index into the record collection.
struct Trial {
  std::size_t a = 0;
  std::size_t b = 0;
  TrialGroup group = TrialGroup::kT1;
};

struct TrialOptions {
  // Also use control and external recordings as non-target impostors.
  bool include_controls = false;
};

/// T1: unordered same-speaker T1/T1 pairs. T1+T2: same-speaker pairs with one
/// T1 and one T2 utterance. Non-target: unordered cross-speaker pairs among
/// T1/T2 utterances. Order follows record order, a < b.
std::vector<Trial> BuildTrials(const std::vector<EmbeddingRecord>& records,
                               const CorpusManifest& manifest,
                               const TrialOptions& options = {});

struct ScoredTrial {
  TrialGroup group = TrialGroup::kT1;
  std::string speaker_a;
  std::string speaker_b;
  double score = 0.0;
  std::string id_a;
  std::string id_b;
};

std::vector<ScoredTrial> ScoreTrials(const std::vector<EmbeddingRecord>& records,
                                     const std::vector<Trial>& trials);

struct EerResult {
  double eer = 0.0;        // percent, interpolated at the FAR/FRR crossing
  double threshold = 0.0;  // accept when score >= threshold
  double closest_eer = 0.0;  // (FAR+FRR)/2 at the nearest operating point
  std::size_t num_target = 0;
  std::size_t num_nontarget = 0;
};

/// Equal error rate over a threshold sweep. Operating points sit at the
/// minimum score, at midpoints between consecutive distinct scores and just
/// above the maximum; EER is linearly interpolated between the last point
/// with FRR < FAR and the first with FRR >= FAR.
EerResult Eer(const std::vector<double>& target_scores,
              const std::vector<double>& nontarget_scores);

struct EerTable {
  std::vector<std::string> speakers;
  std::vector<std::optional<EerResult>> t1;
  std::vector<std::optional<EerResult>> t1_t2;
  std::optional<EerResult> all_t1;
  std::optional<EerResult> all_t1_t2;
};

/// Per speaker, targets are that speaker's T1 trials (or T1 together with
/// T1+T2), non-targets the cross-speaker trials involving the speaker. The
/// pooled column uses every trial. `speakers` fixes the row order; when
/// empty, speakers appear in order of first occurrence.
EerTable MakeEerTable(const std::vector<ScoredTrial>& trials,
                      bool per_speaker = true,
                      std::vector<std::string> speakers = {});

// JSON lines: {"id", "speaker_id", "stage", "utterance_id", "dim", "values"}.
std::vector<EmbeddingRecord> ReadEmbeddings(const std::string& path);
std::string FormatEmbedding(const EmbeddingRecord& record);

}  // namespace pathvc

#endif  // PATHVC_SPEAKER_VERIF_H_
