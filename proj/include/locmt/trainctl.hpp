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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "locmt/backend.hpp"
#include "locmt/corpus.hpp"
#include "locmt/textprep.hpp"

// Experiment orchestration: split wiring, job submission and polling, early stopping and
// checkpoint selection. All model work happens behind the backend.
namespace locmt::trainctl {

using Json = nlohmann::json;

enum class ExperimentTask { nmt, sentiment, hate };
std::string to_string(ExperimentTask t);
ExperimentTask parse_experiment_task(std::string_view s);

struct EarlyStopPolicy {
  int patience = 5;
  double min_delta = 1e-4;
  // Only maximization is supported.
  std::string mode = "maximize";
};
void validate(const EarlyStopPolicy& policy);

struct EarlyStopState {
  double best_value = -std::numeric_limits<double>::infinity();
  // 1-based; 0 before the first evaluation.
  int best_eval_index = 0;
  int staleness = 0;
  int evaluations = 0;

  friend bool operator==(const EarlyStopState&, const EarlyStopState&) = default;
};

enum class Decision { proceed, stop };

std::pair<EarlyStopState, Decision> early_stop_update(EarlyStopState state, const EarlyStopPolicy& policy, double value);

// 1-based index of the first maximum; 0 for an empty history.
int select_checkpoint(const std::vector<double>& history);

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentTask task = ExperimentTask::sentiment;
  // corpus name -> JSONL path
  std::map<std::string, std::filesystem::path> corpora;
  corpus::SplitSpec split;
  textprep::PipelineSpec pipeline;
  int eval_every = 100;
  EarlyStopPolicy early_stop;
  backend::BackendConfig backend;
  std::uint64_t seed = 42;
  // Passed to the service untouched.
  std::map<std::string, std::string> hyperparams;
  std::filesystem::path output_dir = "out";
  int poll_interval_ms = 500;
  double job_timeout_s = 3600.0;
};

void validate(const ExperimentConfig& cfg);
// Relative paths in the document resolve against base_dir; LOCMT_BACKEND replaces the endpoint.
ExperimentConfig experiment_config_from_yaml(std::string_view yaml, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
// Effective configuration, output location excluded.
Json to_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);
// Metric the controller monitors for a task (combined F for nmt, macro-F1 otherwise).
std::string monitored_metric(ExperimentTask task);

struct SplitRecord {
  std::size_t size = 0;
  std::map<std::string, std::int64_t> counts;
  std::string path;  // relative to the output directory
};

struct RunManifest {
  std::string name;
  std::string task;
  std::string config_hash;
  std::uint64_t seed = 0;
  Json config;
  // corpus -> split -> record
  std::map<std::string, std::map<std::string, SplitRecord>> splits;
  std::vector<std::string> pipeline_steps;
  std::string pipeline_name;
  EarlyStopPolicy early_stop;
  std::string metric_name;
  int eval_every = 0;
  std::string job_id;
  std::vector<backend::Evaluation> history;
  int best_eval_index = 0;
  bool stopped_early = false;
  std::string chosen_model;
  std::string service_model;
  std::string status = "pending";  // finished | failed
  // For failed runs: which stage, and "validation" or "backend:<kind>".
  std::string error_stage;
  std::string error_kind;
  std::string error_message;
  std::string started_at;
  std::string finished_at;

  bool ok() const { return status == "finished"; }
};

Json to_json(const RunManifest& m, bool include_timestamps = true);
RunManifest run_manifest_from_json(const Json& j);

inline constexpr const char* kManifestFile = "run_manifest.json";
inline constexpr const char* kMetricLogFile = "metrics.log.jsonl";

// Never throws for corpus or backend failures: those produce a failed manifest. The manifest
// and metric log are written under cfg.output_dir. When `client` is null one is built from
// cfg.backend.
RunManifest run_experiment(const ExperimentConfig& cfg, backend::BackendClient* client = nullptr);

}  // namespace locmt::trainctl
