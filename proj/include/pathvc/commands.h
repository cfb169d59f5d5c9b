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

#ifndef PATHVC_COMMANDS_H_
#define PATHVC_COMMANDS_H_

// Experiment drivers behind the `pathvc-eval` subcommands. Each returns a
// MetricReport; file output is handled by the caller.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathvc/error.h"
#include "pathvc/report.h"
#include "pathvc/speaker_verif.h"

namespace pathvc {

struct ExperimentConfig {
  std::string command;
  std::string corpus_root;
  std::string manifest;
  std::string embeddings;
  // (system, transcript file); the system named "GT" is the reference row.
  std::vector<std::pair<std::string, std::string>> phonemes;
  std::vector<std::string> ratings;
  std::string fixtures;
  // (system, directory of converted audio named <utterance_id>.wav).
  std::vector<std::pair<std::string, std::string>> systems;
  // Speaker/stage items such as "PGAF_T2"; empty selects every
  // non-control speaker/stage in the manifest.
  std::vector<std::string> speakers;
  std::string split = "test";
  std::string out_dir;
  std::string format = "csv";
  unsigned long long seed = 0;
  int jobs = 1;
  bool include_controls = false;

  void Validate() const;
};

/// FNV-1a over the result-affecting configuration fields, as 16 hex digits.
/// Output directory, format and job count are excluded.
std::string ConfigHash(const ExperimentConfig& config);

/// One row of a long-format fixture file: system,item,value.
struct FixtureValue {
  std::string system;
  std::string item;
  double value = 0.0;
};
std::vector<FixtureValue> ReadFixtureValues(const std::string& path);

MetricReport RunPestoi(const ExperimentConfig& config);
MetricReport RunPer(const ExperimentConfig& config);

struct EerRun {
  MetricReport report;
  std::vector<ScoredTrial> scores;
};
EerRun RunEer(const ExperimentConfig& config);

struct RatingsRun {
  MetricReport report;
  // Percent-converted similarity ratings; empty when none were given.
  std::optional<MetricReport> similarity;
};
RatingsRun RunRatings(const ExperimentConfig& config);

// Score distribution file: group,speaker_a,speaker_b,id_a,id_b,score.
std::string FormatScoreDistribution(const std::vector<ScoredTrial>& trials);
std::vector<ScoredTrial> ReadScoreDistribution(const std::string& path);

/// Process exit status for an error: 2 validation, 3 missing input,
/// 4 numeric failure.
int ExitCodeFor(ErrorCode code);

}  // namespace pathvc

#endif  // PATHVC_COMMANDS_H_
