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

#include "pathvc/speaker_verif.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>

#include "json.hpp"

namespace pathvc {

const char* EmbeddingStageName(EmbeddingStage s) {
  switch (s) {
    case EmbeddingStage::kT1: return "T1";
    case EmbeddingStage::kT2: return "T2";
    case EmbeddingStage::kT3: return "T3";
    case EmbeddingStage::kControl: return "control";
    case EmbeddingStage::kExternal: return "external";
  }
  return "?";
}

std::optional<EmbeddingStage> ParseEmbeddingStage(const std::string& s) {
  if (s == "T1") return EmbeddingStage::kT1;
  if (s == "T2") return EmbeddingStage::kT2;
  if (s == "T3") return EmbeddingStage::kT3;
  if (s == "control") return EmbeddingStage::kControl;
  if (s == "external") return EmbeddingStage::kExternal;
  return std::nullopt;
}

const char* TrialGroupName(TrialGroup g) {
  switch (g) {
    case TrialGroup::kT1: return "T1";
    case TrialGroup::kT1T2: return "T1+T2";
    case TrialGroup::kNonTarget: return "nontarget";
  }
  return "?";
}

std::optional<TrialGroup> ParseTrialGroup(const std::string& s) {
  if (s == "T1") return TrialGroup::kT1;
  if (s == "T1+T2") return TrialGroup::kT1T2;
  if (s == "nontarget") return TrialGroup::kNonTarget;
  return std::nullopt;
}

std::vector<Trial> BuildTrials(const std::vector<EmbeddingRecord>& records,
                               const CorpusManifest& manifest,
                               const TrialOptions& options) {
  for (const auto& r : records) {
    if (r.stage == EmbeddingStage::kExternal) continue;
    const SpeakerRecord* spk = manifest.FindSpeaker(r.speaker_id);
    if (spk == nullptr)
      throw Error(ErrorCode::kUnknownSpeaker,
                  "embedding '" + r.id + "': no speaker '" + r.speaker_id + "'");
    const bool ok =
        r.stage == EmbeddingStage::kControl
            ? spk->group == SpeakerGroup::kControl
            : spk->HasStage(static_cast<Stage>(static_cast<int>(r.stage)));
    if (!ok)
      throw Error(ErrorCode::kUnknownStage,
                  "embedding '" + r.id + "': " + r.speaker_id + " has no stage " +
                      EmbeddingStageName(r.stage));
  }

  auto pathological = [](const EmbeddingRecord& r) {
    return r.stage == EmbeddingStage::kT1 || r.stage == EmbeddingStage::kT2;
  };
  auto impostor = [&](const EmbeddingRecord& r) {
    return pathological(r) ||
           (options.include_controls && (r.stage == EmbeddingStage::kControl ||
                                         r.stage == EmbeddingStage::kExternal));
  };

  std::vector<Trial> trials;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t j = i + 1; j < records.size(); ++j) {
      const auto& a = records[i];
      const auto& b = records[j];
      if (a.speaker_id == b.speaker_id) {
        if (a.stage == EmbeddingStage::kT1 && b.stage == EmbeddingStage::kT1)
          trials.push_back({i, j, TrialGroup::kT1});
        else if ((a.stage == EmbeddingStage::kT1 &&
                  b.stage == EmbeddingStage::kT2) ||
                 (a.stage == EmbeddingStage::kT2 &&
                  b.stage == EmbeddingStage::kT1))
          trials.push_back({i, j, TrialGroup::kT1T2});
      } else if (impostor(a) && impostor(b)) {
        trials.push_back({i, j, TrialGroup::kNonTarget});
      }
    }
  }
  return trials;
}

std::vector<ScoredTrial> ScoreTrials(const std::vector<EmbeddingRecord>& records,
                                     const std::vector<Trial>& trials) {
  std::vector<ScoredTrial> out;
  out.reserve(trials.size());
  for (const auto& t : trials) {
    const auto& a = records.at(t.a);
    const auto& b = records.at(t.b);
    out.push_back({t.group, a.speaker_id, b.speaker_id,
                   CosineSimilarity(a.vector, b.vector), a.id, b.id});
  }
  return out;
}

EerResult Eer(const std::vector<double>& target_scores,
              const std::vector<double>& nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty())
    throw Error(ErrorCode::kEmptyScores, "EER needs target and non-target scores");
  std::vector<double> tar = target_scores, non = nontarget_scores;
  std::sort(tar.begin(), tar.end());
  std::sort(non.begin(), non.end());
  std::vector<double> unique;
  std::merge(tar.begin(), tar.end(), non.begin(), non.end(),
             std::back_inserter(unique));
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  const double nt = static_cast<double>(tar.size());
  const double nn = static_cast<double>(non.size());
  struct Point {
    double threshold, frr, far;
  };
  std::vector<Point> points;
  points.reserve(unique.size() + 1);
  points.push_back({unique.front(), 0.0, 1.0});
  for (std::size_t k = 0; k + 1 < unique.size(); ++k) {
    const double below =
        std::upper_bound(tar.begin(), tar.end(), unique[k]) - tar.begin();
    const double above =
        non.end() - std::lower_bound(non.begin(), non.end(), unique[k + 1]);
    points.push_back(
        {0.5 * (unique[k] + unique[k + 1]), below / nt, above / nn});
  }
  points.push_back({std::nextafter(unique.back(),
                                   std::numeric_limits<double>::infinity()),
                    1.0, 0.0});

  EerResult res;
  res.num_target = tar.size();
  res.num_nontarget = non.size();
  for (std::size_t k = 1; k < points.size(); ++k) {
    const Point& hi = points[k];
    if (hi.frr < hi.far) continue;
    if (hi.frr == hi.far) {
      res.eer = 100.0 * hi.frr;
      res.threshold = hi.threshold;
    } else {
      const Point& lo = points[k - 1];
      const double gap_lo = lo.far - lo.frr;
      const double gap_hi = hi.far - hi.frr;
      const double alpha = gap_lo / (gap_lo - gap_hi);
      res.eer = 100.0 * (lo.frr + alpha * (hi.frr - lo.frr));
      res.threshold = lo.threshold + alpha * (hi.threshold - lo.threshold);
    }
    break;
  }
  double best_gap = std::numeric_limits<double>::infinity();
  for (const Point& p : points) {
    const double gap = std::abs(p.frr - p.far);
    if (gap < best_gap) {
      best_gap = gap;
      res.closest_eer = 50.0 * (p.frr + p.far);
    }
  }
  return res;
}

EerTable MakeEerTable(const std::vector<ScoredTrial>& trials, bool per_speaker,
                      std::vector<std::string> speakers) {
  EerTable table;
  if (speakers.empty()) {
    for (const auto& t : trials) {
      if (t.group == TrialGroup::kNonTarget) continue;
      if (std::find(speakers.begin(), speakers.end(), t.speaker_a) ==
          speakers.end())
        speakers.push_back(t.speaker_a);
    }
  }

  auto eer_or_empty = [](const std::vector<double>& tar,
                         const std::vector<double>& non)
      -> std::optional<EerResult> {
    if (tar.empty() || non.empty()) return std::nullopt;
    return Eer(tar, non);
  };

  std::vector<double> all_t1, all_t12, all_non;
  for (const auto& t : trials) {
    switch (t.group) {
      case TrialGroup::kT1:
        all_t1.push_back(t.score);
        all_t12.push_back(t.score);
        break;
      case TrialGroup::kT1T2:
        all_t12.push_back(t.score);
        break;
      case TrialGroup::kNonTarget:
        all_non.push_back(t.score);
        break;
    }
  }
  table.all_t1 = eer_or_empty(all_t1, all_non);
  table.all_t1_t2 = eer_or_empty(all_t12, all_non);
  if (!per_speaker) return table;

  table.speakers = std::move(speakers);
  for (const auto& spk : table.speakers) {
    std::vector<double> t1, t12, non;
    for (const auto& t : trials) {
      if (t.group == TrialGroup::kNonTarget) {
        if (t.speaker_a == spk || t.speaker_b == spk) non.push_back(t.score);
      } else if (t.speaker_a == spk) {
        if (t.group == TrialGroup::kT1) t1.push_back(t.score);
        t12.push_back(t.score);
      }
    }
    table.t1.push_back(eer_or_empty(t1, non));
    table.t1_t2.push_back(eer_or_empty(t12, non));
  }
  return table;
}

std::vector<EmbeddingRecord> ReadEmbeddings(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::vector<EmbeddingRecord> records;
  std::string line;
  int line_no = 0;
  Eigen::Index dim = -1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParseError, where + ": " + e.what());
    }
    EmbeddingRecord r;
    try {
      r.id = j.at("id").get<std::string>();
      r.speaker_id = j.at("speaker_id").get<std::string>();
      r.utterance_id = j.at("utterance_id").get<std::string>();
      const auto stage = ParseEmbeddingStage(j.at("stage").get<std::string>());
      if (!stage)
        throw Error(ErrorCode::kParseError, where + ": unknown stage");
      r.stage = *stage;
      const auto values = j.at("values").get<std::vector<double>>();
      const auto declared = j.at("dim").get<long>();
      if (declared <= 0 || static_cast<std::size_t>(declared) != values.size())
        throw Error(ErrorCode::kDimensionMismatch,
                    where + ": dim " + std::to_string(declared) + " but " +
                        std::to_string(values.size()) + " values");
      r.vector = Eigen::Map<const Eigen::VectorXd>(
          values.data(), static_cast<Eigen::Index>(values.size()));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, where + ": " + e.what());
    }
    if (dim < 0) dim = r.vector.size();
    if (r.vector.size() != dim)
      throw Error(ErrorCode::kDimensionMismatch,
                  where + ": dimension " + std::to_string(r.vector.size()) +
                      " differs from " + std::to_string(dim));
    if (!r.vector.allFinite())
      throw Error(ErrorCode::kParseError, where + ": non-finite component");
    if (r.vector.norm() == 0.0)
      throw Error(ErrorCode::kZeroVector, where + ": zero embedding");
    records.push_back(std::move(r));
  }
  return records;
}

std::string FormatEmbedding(const EmbeddingRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["speaker_id"] = r.speaker_id;
  j["stage"] = EmbeddingStageName(r.stage);
  j["utterance_id"] = r.utterance_id;
  j["dim"] = r.vector.size();
  j["values"] = std::vector<double>(r.vector.data(),
                                    r.vector.data() + r.vector.size());
  return j.dump();
}

}  // namespace pathvc
