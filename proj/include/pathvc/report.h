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

#ifndef PATHVC_REPORT_H_
#define PATHVC_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "pathvc/error.h"

namespace pathvc {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct ReportRow {
  enum class Kind { kSpeaker, kAggregate };
  Kind kind = Kind::kSpeaker;
  std::string label;
  std::vector<std::optional<double>> values;  // one per report column
  std::vector<std::string> flags;             // e.g. "PPG:overenhanced"
  std::string note;
  bool operator==(const ReportRow&) const = default;
};

struct Provenance {
  std::string version = kToolkitVersion;
  std::string config_hash;
  unsigned long long seed = 0;
  bool operator==(const Provenance&) const = default;
};

/// A result table: per-speaker rows followed by aggregate rows.
struct MetricReport {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<ReportRow> rows;
  Provenance provenance;

  std::optional<double> Value(const std::string& label,
                              const std::string& column) const;
  const ReportRow* Row(const std::string& label) const;
  int ColumnIndex(const std::string& column) const;
  bool HasFlag(const std::string& label, const std::string& flag) const;

  // Machine-readable forms keep full precision and parse back losslessly.
  std::string ToCsv() const;
  static MetricReport FromCsv(const std::string& text);
  std::string ToStructured() const;
  // Two-decimal console table.
  std::string ToTable() const;

  bool operator==(const MetricReport&) const = default;
};

}  // namespace pathvc

#endif  // PATHVC_REPORT_H_
