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

#include "pathvc/commands.h"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "pathvc/corpus.h"
#include "pathvc/csv.h"
#include "pathvc/intelligibility.h"
#include "pathvc/phoneme_score.h"
#include "pathvc/signal.h"
#include "pathvc/stats.h"

namespace pathvc {

namespace {

constexpr const char* kGroundTruth = "GT";
constexpr const char* kSeverity = "Severity";

// Runs fn(0..n-1) on up to `jobs` threads. The exception from the lowest
// failing index is rethrown so failures are reported deterministically.
template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void AddUnique(std::vector<std::string>* list, const std::string& value) {
  if (std::find(list->begin(), list->end(), value) == list->end())
    list->push_back(value);
}

// system -> item -> value, with first-appearance order of systems and items.
struct ValueGrid {
  std::vector<std::string> systems;
  std::vector<std::string> items;
  std::map<std::string, std::map<std::string, double>> values;

  void Set(const std::string& system, const std::string& item, double v) {
    AddUnique(&systems, system);
    AddUnique(&items, item);
    values[system][item] = v;
  }
  std::optional<double> Get(const std::string& system,
                            const std::string& item) const {
    const auto s = values.find(system);
    if (s == values.end()) return std::nullopt;
    const auto i = s->second.find(item);
    if (i == s->second.end()) return std::nullopt;
    return i->second;
  }
  bool HasSystem(const std::string& system) const {
    return values.count(system) != 0;
  }
};

ValueGrid GridFromFixture(const std::string& path) {
  ValueGrid grid;
  for (const auto& v : ReadFixtureValues(path)) grid.Set(v.system, v.item, v.value);
  return grid;
}

MetricReport NewReport(const std::string& experiment,
                       const ExperimentConfig& config) {
  MetricReport rep;
  rep.experiment = experiment;
  rep.provenance.config_hash = ConfigHash(config);
  rep.provenance.seed = config.seed;
  return rep;
}

ReportRow SpeakerRow(const ValueGrid& grid, const std::string& item) {
  ReportRow row;
  row.label = item;
  for (const auto& system : grid.systems) row.values.push_back(grid.Get(system, item));
  return row;
}

// Pearson over the items where both columns have values; empty when fewer
// than two such items exist or a column is constant.
std::optional<double> ColumnCorrelation(const ValueGrid& grid,
                                        const std::vector<std::string>& items,
                                        const std::string& a,
                                        const std::string& b) {
  std::vector<double> x, y;
  for (const auto& item : items) {
    const auto va = grid.Get(a, item);
    const auto vb = grid.Get(b, item);
    if (va && vb) {
      x.push_back(*va);
      y.push_back(*vb);
    }
  }
  if (x.size() < 2) return std::nullopt;
  try {
    return Pearson(x, y).r;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kZeroVariance) return std::nullopt;
    throw;
  }
}

std::pair<std::string, Stage> SplitItem(const std::string& item) {
  const auto pos = item.rfind('_');
  if (pos == std::string::npos)
    throw Error(ErrorCode::kValidationError,
                "item '" + item + "' is not SPEAKER_STAGE");
  const auto stage = ParseStage(item.substr(pos + 1));
  if (!stage)
    throw Error(ErrorCode::kUnknownStage, "item '" + item + "' has no T stage");
  return {item.substr(0, pos), *stage};
}

std::string JoinPath(const std::string& root, const std::string& rel) {
  if (root.empty() || std::filesystem::path(rel).is_absolute()) return rel;
  return (std::filesystem::path(root) / rel).string();
}

AudioBufferd LoadOrMissing(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::kMissingInput, "missing audio " + path);
  return LoadWav(path);
}

Error WithContext(const Error& e, const std::string& context) {
  std::string what = e.what();
  const auto colon = what.find(": ");
  if (colon != std::string::npos) what = what.substr(colon + 2);
  return Error(e.code(), context + ": " + what);
}

CorpusManifest RequireManifest(const ExperimentConfig& config) {
  if (config.manifest.empty())
    throw Error(ErrorCode::kMissingInput, "--manifest is required");
  return LoadManifest(config.manifest);
}

MetricReport PestoiReportFromGrid(const ValueGrid& grid,
                                  const ExperimentConfig& config,
                                  const std::map<std::string, std::string>& notes) {
  if (grid.items.empty())
    throw Error(ErrorCode::kEmptySelection, "no speakers selected");
  MetricReport rep = NewReport("pestoi", config);
  rep.columns = grid.systems;
  for (const auto& item : grid.items) {
    ReportRow row = SpeakerRow(grid, item);
    if (const auto it = notes.find(item); it != notes.end()) row.note = it->second;
    rep.rows.push_back(std::move(row));
  }
  if (grid.HasSystem(kGroundTruth) && grid.systems.size() > 1) {
    ReportRow agg;
    agg.kind = ReportRow::Kind::kAggregate;
    agg.label = "r_GT";
    for (const auto& system : grid.systems)
      agg.values.push_back(system == kGroundTruth
                               ? std::nullopt
                               : ColumnCorrelation(grid, grid.items, system,
                                                   kGroundTruth));
    rep.rows.push_back(std::move(agg));
  }
  return rep;
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (jobs < 1)
    throw Error(ErrorCode::kValidationError, "--jobs must be at least 1");
  if (format != "csv" && format != "structured")
    throw Error(ErrorCode::kValidationError,
                "--format must be csv or structured");
  if (!ParseSplit(split))
    throw Error(ErrorCode::kValidationError, "--split must be train, dev or test");
  auto must_exist = [](const std::string& path, const char* flag) {
    if (!path.empty() && !std::filesystem::exists(path))
      throw Error(ErrorCode::kMissingInput,
                  std::string(flag) + " path does not exist: " + path);
  };
  must_exist(manifest, "--manifest");
  must_exist(embeddings, "--embeddings");
  must_exist(fixtures, "--fixtures");
  for (const auto& [_, p] : phonemes) must_exist(p, "--phonemes");
  for (const auto& p : ratings) must_exist(p, "--ratings");
  for (const auto& [_, p] : systems) must_exist(p, "--system");
}

std::string ConfigHash(const ExperimentConfig& c) {
  std::ostringstream os;
  os << c.command << '\x1f' << c.corpus_root << '\x1f' << c.manifest << '\x1f'
     << c.embeddings << '\x1f' << c.fixtures << '\x1f' << c.split << '\x1f'
     << c.seed << '\x1f' << c.include_controls << '\x1f';
  for (const auto& [s, p] : c.phonemes) os << s << '=' << p << '\x1e';
  os << '\x1f';
  for (const auto& p : c.ratings) os << p << '\x1e';
  os << '\x1f';
  for (const auto& [s, p] : c.systems) os << s << '=' << p << '\x1e';
  os << '\x1f';
  for (const auto& s : c.speakers) os << s << '\x1e';
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<FixtureValue> ReadFixtureValues(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::vector<FixtureValue> out;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
      continue;
    const auto f = csv::SplitLine(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (!header) {
      if (f.size() != 3 || f[0] != "system" || f[1] != "item" || f[2] != "value")
        throw Error(ErrorCode::kParseError,
                    where + ": header must be system,item,value");
      header = true;
      continue;
    }
    if (f.size() != 3)
      throw Error(ErrorCode::kParseError, where + ": expected 3 fields");
    FixtureValue v{f[0], f[1], 0.0};
    if (!csv::ParseDouble(f[2], &v.value) || !std::isfinite(v.value))
      throw Error(ErrorCode::kParseError, where + ": bad value '" + f[2] + "'");
    out.push_back(std::move(v));
  }
  return out;
}

MetricReport RunPestoi(const ExperimentConfig& config) {
  config.Validate();
  if (!config.fixtures.empty())
    return PestoiReportFromGrid(GridFromFixture(config.fixtures), config, {});

  const CorpusManifest manifest = RequireManifest(config);
  const std::string root = ResolveCorpusRoot(manifest, config.corpus_root);
  const Split split = *ParseSplit(config.split);

  std::vector<std::string> items = config.speakers;
  if (items.empty()) {
    for (const auto& s : manifest.speakers)
      for (const auto& [stage, _] : s.stages)
        items.push_back(s.id + "_" + StageName(stage));
  }

  struct Job {
    std::string item;
    Utterance utt;
  };
  std::vector<Job> jobs;
  std::map<std::string, std::string> notes;
  for (const auto& item : items) {
    const auto [speaker, stage] = SplitItem(item);
    const auto utts = SelectUtterances(manifest, speaker, stage, split);
    const SpeakerRecord* rec = manifest.FindSpeaker(speaker);
    std::string note = "n=" + std::to_string(utts.size());
    if (rec->stages.at(stage).premature_stop) note += " (premature stop)";
    notes[item] = note;
    for (const auto& u : utts) jobs.push_back({item, u});
  }
  if (jobs.empty())
    throw Error(ErrorCode::kEmptySelection,
                "no utterances in the " + config.split + " split for the selection");

  // One healthy reference per sentence, built from every control speaker.
  std::vector<std::string> sentences;
  for (const auto& j : jobs) AddUnique(&sentences, j.utt.sentence);
  std::vector<ReferenceModel<double>> references(sentences.size());
  const FrontEndConfig fe;
  ParallelFor(sentences.size(), config.jobs, [&](std::size_t k) {
    std::vector<AudioBufferd> controls;
    for (const auto& u : manifest.utterances) {
      if (u.sentence != sentences[k] || u.stage.has_value()) continue;
      controls.push_back(LoadOrMissing(JoinPath(root, u.audio)));
    }
    try {
      references[k] = BuildReference(controls, fe, sentences[k]);
    } catch (const Error& e) {
      throw WithContext(e, "reference for sentence " + sentences[k]);
    }
  });
  std::map<std::string, std::size_t> ref_index;
  for (std::size_t k = 0; k < sentences.size(); ++k) ref_index[sentences[k]] = k;

  std::vector<std::string> systems;
  for (const auto& [name, _] : config.systems) systems.push_back(name);
  systems.push_back(kGroundTruth);

  std::vector<std::vector<double>> scores(jobs.size(),
                                          std::vector<double>(systems.size()));
  ParallelFor(jobs.size(), config.jobs, [&](std::size_t k) {
    const Job& job = jobs[k];
    const auto& reference = references[ref_index.at(job.utt.sentence)];
    for (std::size_t s = 0; s < systems.size(); ++s) {
      const std::string path =
          s + 1 == systems.size()
              ? JoinPath(root, job.utt.audio)
              : (std::filesystem::path(config.systems[s].second) /
                 (job.utt.id + ".wav"))
                    .string();
      try {
        scores[k][s] = PEstoiUtterance(LoadOrMissing(path), reference, fe).value;
      } catch (const Error& e) {
        throw WithContext(e, systems[s] + " utterance " + job.utt.id);
      }
    }
  });

  ValueGrid grid;
  for (const auto& s : systems) grid.systems.push_back(s);
  for (const auto& item : items) {
    std::vector<std::vector<IntelligibilityScore>> per_system(systems.size());
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (jobs[k].item != item) continue;
      for (std::size_t s = 0; s < systems.size(); ++s)
        per_system[s].push_back(
            {scores[k][s], Metric::kPEstoi, jobs[k].utt.id, item});
    }
    if (per_system[0].empty()) continue;
    for (std::size_t s = 0; s < systems.size(); ++s)
      grid.Set(systems[s], item, PEstoiSpeaker(per_system[s], "").value);
  }
  return PestoiReportFromGrid(grid, config, notes);
}

MetricReport RunPer(const ExperimentConfig& config) {
  config.Validate();
  ValueGrid grid;
  if (!config.fixtures.empty()) {
    grid = GridFromFixture(config.fixtures);
  } else {
    if (config.phonemes.empty())
      throw Error(ErrorCode::kMissingInput,
                  "MissingTranscripts: no --phonemes files given");
    std::optional<CorpusManifest> manifest;
    if (!config.manifest.empty()) manifest = LoadManifest(config.manifest);
    for (const auto& [system, path] : config.phonemes) {
      std::map<std::string, std::vector<EditSummary>> edits;
      std::vector<std::string> order;
      for (const auto& rec : ReadTranscripts(path)) {
        std::string item = rec.speaker;
        if (item.empty() && manifest) {
          if (const Utterance* u = manifest->FindUtterance(rec.utterance_id);
              u && u->stage)
            item = u->speaker + "_" + StageName(*u->stage);
        }
        if (item.empty())
          throw Error(ErrorCode::kValidationError,
                      path + ": cannot resolve speaker of " + rec.utterance_id);
        AddUnique(&order, item);
        edits[item].push_back(EditAlign({rec.utterance_id, rec.ref},
                                        {rec.utterance_id, rec.hyp}));
      }
      for (const auto& item : order) grid.Set(system, item, PerSpeaker(edits[item]));
    }
  }
  if (grid.items.empty())
    throw Error(ErrorCode::kEmptySelection, "no speakers in PER input");

  const PerTable table = MakePerTable(grid.systems, grid.values);
  MetricReport rep = NewReport("per", config);
  rep.columns = grid.systems;
  const bool have_gt = grid.HasSystem(kGroundTruth);
  auto flag_row = [&](ReportRow& row) {
    if (!have_gt) return;
    const int gt = rep.ColumnIndex(kGroundTruth);
    for (std::size_t c = 0; c < rep.columns.size(); ++c) {
      if (rep.columns[c] == kGroundTruth) continue;
      if (*row.values[c] < *row.values[gt])
        row.flags.push_back(rep.columns[c] + ":overenhanced");
    }
  };
  for (const auto& item : grid.items) {
    ReportRow row = SpeakerRow(grid, item);
    flag_row(row);
    rep.rows.push_back(std::move(row));
  }
  ReportRow avg;
  avg.kind = ReportRow::Kind::kAggregate;
  avg.label = "Average";
  for (const auto& system : grid.systems) avg.values.push_back(table.average.at(system));
  flag_row(avg);
  rep.rows.push_back(std::move(avg));
  return rep;
}

std::string FormatScoreDistribution(const std::vector<ScoredTrial>& trials) {
  std::ostringstream os;
  os << "group,speaker_a,speaker_b,id_a,id_b,score\n";
  for (const auto& t : trials)
    os << csv::JoinLine({TrialGroupName(t.group), t.speaker_a, t.speaker_b,
                         t.id_a, t.id_b, csv::FormatExact(t.score)})
       << "\n";
  return os.str();
}

std::vector<ScoredTrial> ReadScoreDistribution(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::vector<ScoredTrial> out;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
      continue;
    const auto f = csv::SplitLine(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (!header) {
      if (f.size() != 6 || f[0] != "group")
        throw Error(ErrorCode::kParseError,
                    where + ": header must be group,speaker_a,speaker_b,id_a,id_b,score");
      header = true;
      continue;
    }
    if (f.size() != 6)
      throw Error(ErrorCode::kParseError, where + ": expected 6 fields");
    const auto group = ParseTrialGroup(f[0]);
    if (!group) throw Error(ErrorCode::kParseError, where + ": bad group " + f[0]);
    ScoredTrial t;
    t.group = *group;
    t.speaker_a = f[1];
    t.speaker_b = f[2];
    t.id_a = f[3];
    t.id_b = f[4];
    if (!csv::ParseDouble(f[5], &t.score) || !std::isfinite(t.score))
      throw Error(ErrorCode::kParseError, where + ": bad score");
    if (t.group != TrialGroup::kNonTarget && t.speaker_a != t.speaker_b)
      throw Error(ErrorCode::kValidationError,
                  where + ": target trial across two speakers");
    if (t.group == TrialGroup::kNonTarget && t.speaker_a == t.speaker_b)
      throw Error(ErrorCode::kValidationError,
                  where + ": non-target trial within one speaker");
    out.push_back(std::move(t));
  }
  return out;
}

EerRun RunEer(const ExperimentConfig& config) {
  config.Validate();
  EerRun run;
  std::vector<std::string> order;
  if (!config.fixtures.empty()) {
    run.scores = ReadScoreDistribution(config.fixtures);
    if (!config.manifest.empty()) {
      for (const auto& s : LoadManifest(config.manifest).speakers)
        order.push_back(s.id);
    }
  } else {
    if (config.embeddings.empty())
      throw Error(ErrorCode::kMissingInput,
                  "MissingEmbeddings: --embeddings is required");
    const CorpusManifest manifest = RequireManifest(config);
    const auto records = ReadEmbeddings(config.embeddings);
    TrialOptions opts;
    opts.include_controls = config.include_controls;
    run.scores = ScoreTrials(records, BuildTrials(records, manifest, opts));
    for (const auto& s : manifest.speakers) order.push_back(s.id);
  }
  std::set<std::string> with_targets;
  for (const auto& t : run.scores)
    if (t.group != TrialGroup::kNonTarget) with_targets.insert(t.speaker_a);
  std::vector<std::string> speakers;
  for (const auto& s : order)
    if (with_targets.count(s)) speakers.push_back(s);
  for (const auto& t : run.scores)
    if (with_targets.count(t.speaker_a) && t.group != TrialGroup::kNonTarget)
      AddUnique(&speakers, t.speaker_a);
  if (speakers.empty())
    throw Error(ErrorCode::kEmptySelection, "no target trials");

  const EerTable table = MakeEerTable(run.scores, true, speakers);
  MetricReport& rep = run.report;
  rep = NewReport("eer", config);
  rep.columns = {"T1", "T1-T2", "T1 closest", "T1-T2 closest"};
  auto make_row = [](const std::string& label,
                     const std::optional<EerResult>& t1,
                     const std::optional<EerResult>& t12) {
    ReportRow row;
    row.label = label;
    row.values = {t1 ? std::optional(t1->eer) : std::nullopt,
                  t12 ? std::optional(t12->eer) : std::nullopt,
                  t1 ? std::optional(t1->closest_eer) : std::nullopt,
                  t12 ? std::optional(t12->closest_eer) : std::nullopt};
    if (t12)
      row.note = "target=" + std::to_string(t12->num_target) +
                 " nontarget=" + std::to_string(t12->num_nontarget);
    return row;
  };
  for (std::size_t k = 0; k < table.speakers.size(); ++k)
    rep.rows.push_back(make_row(table.speakers[k], table.t1[k], table.t1_t2[k]));
  ReportRow all = make_row("All", table.all_t1, table.all_t1_t2);
  all.kind = ReportRow::Kind::kAggregate;
  rep.rows.push_back(std::move(all));
  return run;
}

namespace {

MetricReport RatingsReportFromGrid(const ValueGrid& grid,
                                   const ExperimentConfig& config,
                                   std::optional<double> interrater) {
  if (grid.items.empty())
    throw Error(ErrorCode::kEmptySelection, "no rated items");
  MetricReport rep = NewReport("ratings", config);
  rep.columns = grid.systems;
  for (const auto& item : grid.items) rep.rows.push_back(SpeakerRow(grid, item));

  // Rows without a severity label (external reference speakers) are listed
  // but left out of the averages.
  const bool have_severity = grid.HasSystem(kSeverity);
  std::vector<std::string> averaged;
  for (const auto& item : grid.items)
    if (!have_severity || grid.Get(kSeverity, item)) averaged.push_back(item);

  ReportRow avg;
  avg.kind = ReportRow::Kind::kAggregate;
  avg.label = "Average";
  for (const auto& system : grid.systems) {
    if (system == kSeverity) {
      avg.values.emplace_back();
      continue;
    }
    double sum = 0.0;
    int n = 0;
    for (const auto& item : averaged)
      if (const auto v = grid.Get(system, item)) {
        sum += *v;
        ++n;
      }
    avg.values.push_back(n ? std::optional(sum / n) : std::nullopt);
  }
  avg.note = "over " + std::to_string(averaged.size()) + " items";
  rep.rows.push_back(std::move(avg));

  if (have_severity && grid.HasSystem(kGroundTruth)) {
    const auto r = ColumnCorrelation(grid, grid.items, kSeverity, kGroundTruth);
    if (r) {
      ReportRow row;
      row.kind = ReportRow::Kind::kAggregate;
      row.label = "r_severity_GT";
      for (const auto& system : grid.systems)
        row.values.push_back(system == kGroundTruth ? r : std::nullopt);
      rep.rows.push_back(std::move(row));
    }
  }
  if (interrater && have_severity) {
    ReportRow row;
    row.kind = ReportRow::Kind::kAggregate;
    row.label = "interrater_r";
    for (const auto& system : grid.systems)
      row.values.push_back(system == kSeverity ? interrater : std::nullopt);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace

RatingsRun RunRatings(const ExperimentConfig& config) {
  config.Validate();
  RatingsRun run;
  if (!config.fixtures.empty()) {
    run.report = RatingsReportFromGrid(GridFromFixture(config.fixtures), config,
                                       std::nullopt);
    return run;
  }
  if (config.ratings.empty())
    throw Error(ErrorCode::kMissingInput, "no --ratings files given");

  // (system, speaker) -> raw ratings, in first-appearance order.
  std::vector<std::pair<std::string, std::string>> mos_keys;
  std::map<std::pair<std::string, std::string>, std::vector<double>> mos;
  std::vector<std::pair<std::string, double>> severity;
  std::optional<double> interrater;
  std::vector<std::string> sim_items;
  std::map<std::string, std::vector<double>> sim;

  for (const auto& path : config.ratings) {
    const RatingFile file = ReadRatings(path);
    const RatingMatrix& m = file.matrix;
    if (file.kind == "mos") {
      for (std::size_t c = 0; c < m.item_ids.size(); ++c) {
        const std::string& id = m.item_ids[c];
        const auto colon = id.find(':');
        if (colon == std::string::npos)
          throw Error(ErrorCode::kParseError,
                      path + ": MOS item '" + id + "' must be SYSTEM:SPEAKER");
        const auto rest = id.substr(colon + 1);
        const std::pair key{id.substr(0, colon), rest.substr(0, rest.find(':'))};
        if (!mos.count(key)) mos_keys.push_back(key);
        auto& bucket = mos[key];
        for (Eigen::Index r = 0; r < m.ratings.rows(); ++r)
          if (!std::isnan(m.ratings(r, c))) bucket.push_back(m.ratings(r, c));
      }
    } else if (file.kind == "severity") {
      const Eigen::VectorXd means = AggregateSeverity(m);
      for (std::size_t c = 0; c < m.item_ids.size(); ++c)
        severity.emplace_back(m.item_ids[c], RoundToTenth(means(c)));
      if (m.ratings.rows() >= 2 && m.ratings.cols() >= 2 && !m.ratings.hasNaN())
        interrater = InterraterCorrelation(m).r;
    } else {
      for (std::size_t c = 0; c < m.item_ids.size(); ++c) {
        AddUnique(&sim_items, m.item_ids[c]);
        for (Eigen::Index r = 0; r < m.ratings.rows(); ++r)
          if (!std::isnan(m.ratings(r, c)))
            sim[m.item_ids[c]].push_back(m.ratings(r, c));
      }
    }
  }

  ValueGrid grid;
  for (const auto& key : mos_keys) {
    const auto& bucket = mos[key];
    if (bucket.empty()) continue;
    grid.Set(key.first, key.second, MosAggregate(bucket).mean);
  }
  for (const auto& [item, value] : severity) grid.Set(kSeverity, item, value);
  run.report = RatingsReportFromGrid(grid, config, interrater);

  if (!sim_items.empty()) {
    MetricReport rep = NewReport("similarity", config);
    rep.columns = {"mean_percent", "sd_percent", "n"};
    for (const auto& item : sim_items) {
      if (sim[item].empty()) continue;
      const PercentSummary s = LikertPercentSummary(sim[item]);
      ReportRow row;
      row.label = item;
      row.values = {s.mean, s.sd, static_cast<double>(s.n)};
      rep.rows.push_back(std::move(row));
    }
    run.similarity = std::move(rep);
  }
  return run;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingInput:
    case ErrorCode::kIoError:
      return 3;
    case ErrorCode::kNumericFailure:
    case ErrorCode::kZeroVariance:
      return 4;
    default:
      return 2;
  }
}

}  // namespace pathvc
