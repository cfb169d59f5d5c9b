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

#include "pathvc/phoneme_score.h"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "json.hpp"
#include "pathvc/error.h"

namespace pathvc {

EditSummary EditAlign(const PhonemeSequence& reference,
                      const PhonemeSequence& hypothesis) {
  const auto& r = reference.symbols;
  const auto& h = hypothesis.symbols;
  if (r.empty())
    throw Error(ErrorCode::kEmptyReference,
                "reference for '" + reference.utterance_id + "' is empty");
  const std::size_t n = r.size(), m = h.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j - 1] + (r[i - 1] != h[j - 1]),
                          d[i][j - 1] + 1, d[i - 1][j] + 1});

  EditSummary s;
  s.reference_length = static_cast<int>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const int sub = r[i - 1] != h[j - 1];
      if (d[i][j] == d[i - 1][j - 1] + sub) {
        s.substitutions += sub;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && d[i][j] == d[i][j - 1] + 1) {
      ++s.insertions;
      --j;
    } else {
      ++s.deletions;
      --i;
    }
  }
  return s;
}

double PerSpeaker(const std::vector<EditSummary>& edits) {
  if (edits.empty())
    throw Error(ErrorCode::kEmptyInput, "no utterances for speaker");
  long errors = 0, length = 0;
  for (const auto& e : edits) {
    if (e.reference_length <= 0)
      throw Error(ErrorCode::kEmptyReference, "empty reference");
    errors += e.errors();
    length += e.reference_length;
  }
  return 100.0 * static_cast<double>(errors) / static_cast<double>(length);
}

double PerSpeaker(
    const std::vector<std::pair<PhonemeSequence, PhonemeSequence>>& pairs) {
  std::vector<EditSummary> edits;
  edits.reserve(pairs.size());
  for (const auto& [ref, hyp] : pairs) edits.push_back(EditAlign(ref, hyp));
  return PerSpeaker(edits);
}

PerTable MakePerTable(
    const std::vector<std::string>& systems,
    const std::map<std::string, std::map<std::string, double>>& per_system) {
  if (systems.empty()) throw Error(ErrorCode::kEmptyInput, "no systems");
  PerTable table;
  table.systems = systems;
  const auto first = per_system.find(systems.front());
  if (first == per_system.end() || first->second.empty())
    throw Error(ErrorCode::kEmptyInput, "no speakers for " + systems.front());
  for (const auto& [speaker, _] : first->second)
    table.speakers.push_back(speaker);

  for (const auto& system : systems) {
    const auto it = per_system.find(system);
    if (it == per_system.end())
      throw Error(ErrorCode::kSpeakerSetMismatch, "no values for " + system);
    if (it->second.size() != table.speakers.size())
      throw Error(ErrorCode::kSpeakerSetMismatch,
                  system + " covers " + std::to_string(it->second.size()) +
                      " speakers, expected " +
                      std::to_string(table.speakers.size()));
    auto& column = table.values[system];
    double sum = 0.0;
    for (const auto& speaker : table.speakers) {
      const auto v = it->second.find(speaker);
      if (v == it->second.end())
        throw Error(ErrorCode::kSpeakerSetMismatch,
                    system + " has no value for " + speaker);
      column.push_back(v->second);
      sum += v->second;
    }
    table.average[system] = sum / static_cast<double>(column.size());
  }
  return table;
}

namespace {

std::vector<std::string> ReadTokens(const nlohmann::json& field,
                                    const std::string& where) {
  std::vector<std::string> tokens;
  if (field.is_string()) {
    std::string tok;
    for (char c : field.get<std::string>()) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) tokens.push_back(std::move(tok));
        tok.clear();
      } else {
        tok.push_back(c);
      }
    }
    if (!tok.empty()) tokens.push_back(std::move(tok));
    return tokens;
  }
  if (!field.is_array())
    throw Error(ErrorCode::kParseError, where + ": token list expected");
  for (const auto& t : field) {
    if (!t.is_string())
      throw Error(ErrorCode::kParseError, where + ": tokens must be strings");
    const auto s = t.get<std::string>();
    if (s.empty() || std::any_of(s.begin(), s.end(), [](char c) {
          return std::isspace(static_cast<unsigned char>(c));
        }))
      throw Error(ErrorCode::kValidationError,
                  where + ": token '" + s + "' is empty or contains spaces");
    tokens.push_back(s);
  }
  return tokens;
}

}  // namespace

std::vector<TranscriptRecord> ReadTranscripts(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::vector<TranscriptRecord> records;
  std::string line;
  int line_no = 0;
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
    if (!j.is_object() || !j.contains("utterance_id") || !j.contains("ref") ||
        !j.contains("hyp") || !j["utterance_id"].is_string())
      throw Error(ErrorCode::kParseError,
                  where + ": need utterance_id, ref and hyp");
    TranscriptRecord r;
    r.utterance_id = j["utterance_id"].get<std::string>();
    if (j.contains("speaker") && j["speaker"].is_string())
      r.speaker = j["speaker"].get<std::string>();
    r.ref = ReadTokens(j["ref"], where);
    r.hyp = ReadTokens(j["hyp"], where);
    if (r.ref.empty())
      throw Error(ErrorCode::kEmptyReference, where + ": empty reference");
    records.push_back(std::move(r));
  }
  return records;
}

std::string FormatTranscript(const TranscriptRecord& record) {
  nlohmann::ordered_json j;
  j["utterance_id"] = record.utterance_id;
  if (!record.speaker.empty()) j["speaker"] = record.speaker;
  j["ref"] = record.ref;
  j["hyp"] = record.hyp;
  return j.dump();
}

}  // namespace pathvc
