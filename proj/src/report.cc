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

#include "pathvc/report.h"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "pathvc/csv.h"
#include "pathvc/error.h"

namespace pathvc {

namespace {

const char* KindName(ReportRow::Kind k) {
  return k == ReportRow::Kind::kSpeaker ? "speaker" : "aggregate";
}

std::string JoinFlags(const std::vector<std::string>& flags) {
  std::string out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) out.push_back(';');
    out += flags[i];
  }
  return out;
}

std::vector<std::string> SplitFlags(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int MetricReport::ColumnIndex(const std::string& column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

const ReportRow* MetricReport::Row(const std::string& label) const {
  for (const auto& r : rows)
    if (r.label == label) return &r;
  return nullptr;
}

std::optional<double> MetricReport::Value(const std::string& label,
                                          const std::string& column) const {
  const ReportRow* r = Row(label);
  const int c = ColumnIndex(column);
  if (r == nullptr || c < 0) return std::nullopt;
  return r->values[c];
}

bool MetricReport::HasFlag(const std::string& label,
                           const std::string& flag) const {
  const ReportRow* r = Row(label);
  return r && std::find(r->flags.begin(), r->flags.end(), flag) != r->flags.end();
}

std::string MetricReport::ToCsv() const {
  std::ostringstream os;
  os << "# experiment=" << experiment << "\n";
  os << "# version=" << provenance.version << "\n";
  os << "# config_hash=" << provenance.config_hash << "\n";
  os << "# seed=" << provenance.seed << "\n";
  std::vector<std::string> header = {"kind", "label"};
  header.insert(header.end(), columns.begin(), columns.end());
  header.push_back("flags");
  header.push_back("note");
  os << csv::JoinLine(header) << "\n";
  for (const auto& row : rows) {
    std::vector<std::string> fields = {KindName(row.kind), row.label};
    for (const auto& v : row.values)
      fields.push_back(v ? csv::FormatExact(*v) : std::string());
    fields.push_back(JoinFlags(row.flags));
    fields.push_back(row.note);
    os << csv::JoinLine(fields) << "\n";
  }
  return os.str();
}

MetricReport MetricReport::FromCsv(const std::string& text) {
  MetricReport rep;
  std::istringstream is(text);
  std::string line;
  bool have_header = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string where = "report line " + std::to_string(line_no);
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "experiment") rep.experiment = value;
      else if (key == "version") rep.provenance.version = value;
      else if (key == "config_hash") rep.provenance.config_hash = value;
      else if (key == "seed") rep.provenance.seed = std::stoull(value);
      continue;
    }
    if (line.empty()) continue;
    const auto fields = csv::SplitLine(line);
    if (!have_header) {
      if (fields.size() < 4 || fields[0] != "kind" || fields[1] != "label")
        throw Error(ErrorCode::kParseError, where + ": bad report header");
      rep.columns.assign(fields.begin() + 2, fields.end() - 2);
      have_header = true;
      continue;
    }
    if (fields.size() != rep.columns.size() + 4)
      throw Error(ErrorCode::kParseError, where + ": wrong field count");
    ReportRow row;
    if (fields[0] == "speaker") row.kind = ReportRow::Kind::kSpeaker;
    else if (fields[0] == "aggregate") row.kind = ReportRow::Kind::kAggregate;
    else throw Error(ErrorCode::kParseError, where + ": bad row kind");
    row.label = fields[1];
    for (std::size_t c = 0; c < rep.columns.size(); ++c) {
      const std::string& cell = fields[2 + c];
      if (cell.empty()) {
        row.values.emplace_back();
        continue;
      }
      double v = 0.0;
      if (!csv::ParseDouble(cell, &v))
        throw Error(ErrorCode::kParseError, where + ": bad number '" + cell + "'");
      row.values.emplace_back(v);
    }
    row.flags = SplitFlags(fields[fields.size() - 2]);
    row.note = fields.back();
    rep.rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorCode::kParseError, "report has no header");
  return rep;
}

std::string MetricReport::ToStructured() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["provenance"] = {{"version", provenance.version},
                     {"config_hash", provenance.config_hash},
                     {"seed", provenance.seed}};
  j["columns"] = columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json jr;
    jr["kind"] = KindName(row.kind);
    jr["label"] = row.label;
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < columns.size(); ++c)
      values[columns[c]] = row.values[c] ? nlohmann::ordered_json(*row.values[c])
                                         : nlohmann::ordered_json(nullptr);
    jr["values"] = values;
    if (!row.flags.empty()) jr["flags"] = row.flags;
    if (!row.note.empty()) jr["note"] = row.note;
    j["rows"].push_back(jr);
  }
  return j.dump(2) + "\n";
}

std::string MetricReport::ToTable() const {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {""};
  header.insert(header.end(), columns.begin(), columns.end());
  cells.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> line = {row.label};
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::string cell =
          row.values[c] ? csv::FormatFixed(*row.values[c]) : std::string("-");
      const std::string prefix = columns[c] + ":";
      for (const auto& f : row.flags)
        if (f.rfind(prefix, 0) == 0) cell += "*";
      line.push_back(cell);
    }
    if (!row.note.empty()) line.push_back(row.note);
    cells.push_back(line);
  }
  std::vector<std::size_t> width;
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], line[c].size());
    }
  std::ostringstream os;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      const std::string& s = cells[r][c];
      if (c == 0)
        os << s << std::string(width[c] - s.size(), ' ');
      else
        os << "  " << std::string(width[c] - s.size(), ' ') << s;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace pathvc
