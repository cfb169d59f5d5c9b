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

#ifndef PATHVC_TESTS_SYNTHETIC_H_
#define PATHVC_TESTS_SYNTHETIC_H_

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "pathvc/corpus.h"
#include "pathvc/speaker_verif.h"

namespace pathvc::testing {

inline std::vector<std::string> SentenceIds(int n = kSentenceCount) {
  std::vector<std::string> ids;
  for (int k = 1; k <= n; ++k) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "s%03d", k);
    ids.emplace_back(buf);
  }
  return ids;
}

// Group letter followed by three letters spelling `index` in base 26.
inline std::string SpeakerId(char group, int index) {
  std::string id(1, group);
  for (int d : {676, 26, 1}) id += static_cast<char>('A' + (index / d) % 26);
  return id;
}

// Manifest with the given speaker counts and no utterances. Longitudinal
// speakers get T1 and T2, post-treatment speakers T3 only.
inline CorpusManifest SyntheticManifest(int longitudinal, int post_treatment,
                                        int controls, uint64_t seed = 7) {
  CorpusManifest m;
  m.sentences = SentenceIds();
  m.partition = PartitionSentences(m.sentences, seed);
  for (int k = 0; k < longitudinal; ++k) {
    SpeakerRecord s{SpeakerId('P', k), SpeakerGroup::kLongitudinal,
                    k % 2 ? 'F' : 'M', {}};
    s.stages[Stage::kT1] = {3.0, false};
    s.stages[Stage::kT2] = {4.0, false};
    m.speakers.push_back(s);
  }
  for (int k = 0; k < post_treatment; ++k) {
    SpeakerRecord s{SpeakerId('R', k), SpeakerGroup::kPostTreatment, 'M', {}};
    s.stages[Stage::kT3] = {2.5, false};
    m.speakers.push_back(s);
  }
  for (int k = 0; k < controls; ++k)
    m.speakers.push_back(
        {SpeakerId('V', k), SpeakerGroup::kControl, 'F', {}});
  return m;
}

struct ClusterOptions {
  int dim = 32;
  double spread = 0.35;  // within-speaker noise relative to unit means
  double drift = 0.6;    // T2 pull towards the global mean, 0..1
};

// Gaussian speaker clusters. T1 (and control) vectors scatter around the
// speaker mean; T2 vectors scatter around a mean moved towards the global
// mean of all speakers.
inline std::vector<EmbeddingRecord> ClusterEmbeddings(
    const CorpusManifest& m, const std::vector<int>& per_stage,
    std::mt19937_64& rng, const ClusterOptions& opt = {}) {
  std::normal_distribution<double> g;
  auto gaussian = [&](double sd) {
    Eigen::VectorXd v(opt.dim);
    for (int i = 0; i < opt.dim; ++i) v(i) = sd * g(rng);
    return v;
  };
  std::vector<Eigen::VectorXd> means;
  Eigen::VectorXd global = Eigen::VectorXd::Zero(opt.dim);
  for (std::size_t s = 0; s < m.speakers.size(); ++s) {
    means.push_back(gaussian(1.0 / std::sqrt(opt.dim)) +
                    Eigen::VectorXd::Constant(opt.dim, 0.5 / std::sqrt(opt.dim)));
    global += means.back();
  }
  global /= static_cast<double>(m.speakers.size());

  std::vector<EmbeddingRecord> out;
  for (std::size_t s = 0; s < m.speakers.size(); ++s) {
    const SpeakerRecord& spk = m.speakers[s];
    const int n = per_stage[s % per_stage.size()];
    auto emit = [&](EmbeddingStage stage, const Eigen::VectorXd& mean) {
      for (int k = 0; k < n; ++k) {
        EmbeddingRecord r;
        r.speaker_id = spk.id;
        r.stage = stage;
        r.utterance_id = spk.id + "_" + EmbeddingStageName(stage) + "_" +
                         std::to_string(k);
        r.id = r.utterance_id;
        r.vector = mean + gaussian(opt.spread / std::sqrt(opt.dim));
        out.push_back(std::move(r));
      }
    };
    if (spk.group == SpeakerGroup::kControl) {
      emit(EmbeddingStage::kControl, means[s]);
      continue;
    }
    for (const auto& [stage, info] : spk.stages) {
      const auto es = static_cast<EmbeddingStage>(static_cast<int>(stage));
      emit(es, stage == Stage::kT2
                   ? Eigen::VectorXd((1.0 - opt.drift) * means[s] +
                                     opt.drift * global)
                   : means[s]);
    }
  }
  return out;
}

}  // namespace pathvc::testing

#endif  // PATHVC_TESTS_SYNTHETIC_H_
