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

// Command-line driver: runs one experiment and writes its report.
//
//   pathvc-eval per --fixtures fixtures/table3_per.csv --out results
//   pathvc-eval eer --manifest corpus.json --embeddings xvectors.jsonl
//   pathvc-eval pestoi --manifest corpus.json --system PPG=conv/ppg --jobs 4

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pathvc/commands.h"

namespace {

std::pair<std::string, std::string> SplitAssignment(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos)
    return {std::filesystem::path(arg).stem().string(), arg};
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw pathvc::Error(pathvc::ErrorCode::kIoError,
                        "cannot write " + path.string());
  os << content;
}

void Emit(const pathvc::MetricReport& report,
          const pathvc::ExperimentConfig& config) {
  std::cout << "[" << report.experiment << "]\n" << report.ToTable();
  if (config.out_dir.empty()) return;
  std::filesystem::create_directories(config.out_dir);
  const bool structured = config.format == "structured";
  const auto path = std::filesystem::path(config.out_dir) /
                    (report.experiment + (structured ? ".json" : ".csv"));
  WriteFile(path, structured ? report.ToStructured() : report.ToCsv());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Objective and subjective evaluation for pathological voice "
               "conversion experiments"};
  app.require_subcommand(1);

  pathvc::ExperimentConfig config;
  std::vector<std::string> phonemes, systems;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--manifest", config.manifest, "Corpus manifest (JSON)");
    sub->add_option("--corpus-root", config.corpus_root,
                    "Audio root; overrides $PATHVC_CORPUS_ROOT and the manifest");
    sub->add_option("--fixtures", config.fixtures,
                    "Precomputed values instead of raw inputs");
    sub->add_option("--out", config.out_dir, "Output directory");
    sub->add_option("--format", config.format, "csv or structured")
        ->check(CLI::IsMember({"csv", "structured"}));
    sub->add_option("--seed", config.seed, "Partition seed recorded in outputs");
    sub->add_option("--jobs", config.jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* pestoi = app.add_subcommand("pestoi", "P-ESTOI severity table");
  add_common(pestoi);
  pestoi->add_option("--system", systems,
                     "NAME=DIR of converted audio (<utterance_id>.wav)");
  pestoi->add_option("--speakers", config.speakers,
                     "Speaker/stage items, e.g. PGAF_T2")
      ->delimiter(',');
  pestoi->add_option("--split", config.split, "train, dev or test");

  CLI::App* per = app.add_subcommand("per", "Phoneme error rate table");
  add_common(per);
  per->add_option("--phonemes", phonemes, "SYSTEM=transcripts.jsonl");

  CLI::App* eer = app.add_subcommand("eer", "Speaker-embedding EER table");
  add_common(eer);
  eer->add_option("--embeddings", config.embeddings, "Embedding file (JSON lines)");
  eer->add_flag("--include-controls", config.include_controls,
                "Use control/external recordings as extra non-targets");

  CLI::App* ratings = app.add_subcommand("ratings", "Listening-test statistics");
  add_common(ratings);
  ratings->add_option("--ratings", config.ratings, "Rating files (CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (const auto& p : phonemes) config.phonemes.push_back(SplitAssignment(p));
    for (const auto& s : systems) config.systems.push_back(SplitAssignment(s));
    config.command = app.get_subcommands().front()->get_name();

    if (config.command == "pestoi") {
      Emit(pathvc::RunPestoi(config), config);
    } else if (config.command == "per") {
      Emit(pathvc::RunPer(config), config);
    } else if (config.command == "eer") {
      const auto run = pathvc::RunEer(config);
      Emit(run.report, config);
      if (!config.out_dir.empty())
        WriteFile(std::filesystem::path(config.out_dir) / "eer_scores.csv",
                  pathvc::FormatScoreDistribution(run.scores));
    } else {
      const auto run = pathvc::RunRatings(config);
      Emit(run.report, config);
      if (run.similarity) Emit(*run.similarity, config);
    }
  } catch (const pathvc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pathvc::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
