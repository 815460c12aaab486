// Copyright 2026 The locmt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "locmt/backend.hpp"
#include "locmt/corpus.hpp"
#include "locmt/metrics.hpp"
#include "locmt/textprep.hpp"
#include "locmt/trainctl.hpp"

// The three end-to-end experiments: translation quality of the localization models, a
// classifier trained on a localized corpus and tested on native data, and two dialect models
// compared on the same native corpus.
namespace locmt::evalharness {

using Json = nlohmann::json;

enum class ScenarioKind { nmt_eval, localized_sentiment, crossdialect_hate };
std::string to_string(ScenarioKind k);
// Accepts the long names and the CLI short forms nmt, sentiment, hate.
ScenarioKind parse_scenario_kind(std::string_view s);

struct ModelSpec {
  corpus::LangTag target;
  // Trains and serves this model's classifier.
  backend::BackendConfig backend;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::nmt_eval;
  std::string name = "scenario";
  std::uint64_t seed = 42;
  // nmt_eval: test; the others: source, external.
  std::map<std::string, std::filesystem::path> inputs;
  // Translation backend.
  backend::BackendConfig backend;
  std::vector<ModelSpec> models;
  // nmt_eval only: split the test input and score the named split.
  std::optional<corpus::SplitSpec> split;
  std::string test_split;
  // Template for classifier training; task, corpora, backend and output_dir are filled in.
  trainctl::ExperimentConfig training;
  std::size_t top_k = 50;
  double max_failure_rate = 0.0;
  std::filesystem::path output_dir = "out";
};

void validate(const Scenario& s);
// Relative paths resolve against base_dir; LOCMT_BACKEND replaces every endpoint.
Scenario scenario_from_yaml(std::string_view yaml, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);
Json to_json(const Scenario& s);

using WordCounts = std::vector<std::pair<std::string, std::int64_t>>;

// Per class, the k most frequent whitespace tokens; ties go to the lexicographically smaller
// token. Every class in `classes` gets an entry, possibly empty.
std::map<std::string, WordCounts> word_frequencies(const std::vector<std::string>& texts,
                                                  const std::vector<std::string>& labels,
                                                  const std::vector<std::string>& classes, std::size_t k,
                                                  const textprep::StopwordSet& stopwords);
std::map<std::string, WordCounts> word_frequencies(const corpus::Corpus& labeled, std::size_t k,
                                                  const textprep::StopwordSet& stopwords);

// Ids predicted `positive` by exactly one of the two models, sorted.
std::vector<std::string> disagreement_set(const std::map<std::string, std::string>& a,
                                          const std::map<std::string, std::string>& b, const std::string& positive);

struct TranslationResult {
  std::string direction;  // e.g. fr->ar-lev
  std::size_t pairs = 0;
  metrics::TranslationScores scores;
};

struct ModelResult {
  std::string name;  // e.g. fr->ar-lev
  corpus::LangTag target;
  std::string model_id;
  std::string manifest_path;  // relative to the scenario output directory
  std::size_t localized = 0;
  std::vector<std::string> localization_failures;
  metrics::ClassReport report;
  std::map<std::string, std::string> predictions;  // external id -> label
  std::map<std::string, WordCounts> top_words;
};

struct EvalReport {
  ScenarioKind kind = ScenarioKind::nmt_eval;
  std::string name;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<TranslationResult> translation;
  std::optional<metrics::TranslationScores> translation_overall;
  std::vector<ModelResult> models;
  std::vector<std::string> disagreements;
  std::vector<std::string> notes;
};

Json to_json(const EvalReport& r);
std::string render_text(const EvalReport& r);

EvalReport run_nmt_eval(const Scenario& s);
EvalReport run_localized_sentiment(const Scenario& s);
EvalReport run_crossdialect_hate(const Scenario& s);

inline constexpr const char* kReportJson = "report.json";
inline constexpr const char* kReportText = "report.txt";
inline constexpr const char* kIndexFile = "index.json";

// Runs the scenario for s.kind and writes report.json, report.txt and index.json under
// s.output_dir.
EvalReport run_scenario(const Scenario& s);

}  // namespace locmt::evalharness
