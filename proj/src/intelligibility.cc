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

#include "pathvc/intelligibility.h"

namespace pathvc {

SpeakerSeverityScore PEstoiSpeaker(
    const std::vector<IntelligibilityScore>& scores, const std::string& stage) {
  if (scores.empty())
    throw Error(ErrorCode::kEmptyInput, "no utterance scores to average");
  SpeakerSeverityScore out;
  out.speaker_id = scores.front().speaker_id;
  out.stage = stage;
  double sum = 0.0;
  for (const auto& s : scores) {
    if (s.speaker_id != out.speaker_id)
      throw Error(ErrorCode::kMixedSpeakers,
                  "'" + s.speaker_id + "' mixed with '" + out.speaker_id + "'");
    sum += s.value;
  }
  out.value = sum / static_cast<double>(scores.size());
  out.utterance_count = static_cast<int>(scores.size());
  return out;
}

}  // namespace pathvc
