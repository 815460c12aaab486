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

#include "locmt/trainctl.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include "locmt/error.hpp"
#include "locmt/util.hpp"
#include "locmt/yamljson.hpp"

namespace locmt::trainctl {

namespace fs = std::filesystem;
using backend::Evaluation;
using backend::JobState;
using backend::JobStatus;

std::string to_string(ExperimentTask t) {
  switch (t) {
    case ExperimentTask::nmt: return "nmt";
    case ExperimentTask::sentiment: return "sentiment";
    case ExperimentTask::hate: return "hate";
  }
  return "?";
}

ExperimentTask parse_experiment_task(std::string_view s) {
  if (s == "nmt") return ExperimentTask::nmt;
  if (s == "sentiment") return ExperimentTask::sentiment;
  if (s == "hate") return ExperimentTask::hate;
  throw ValidationError("unknown experiment task '" + std::string(s) + "'");
}

std::string monitored_metric(ExperimentTask task) { return task == ExperimentTask::nmt ? "combined_f" : "macro_f1"; }

void validate(const EarlyStopPolicy& policy) {
  if (policy.patience < 1) throw ValidationError("early_stop.patience must be >= 1");
  if (!(policy.min_delta >= 0.0) || !std::isfinite(policy.min_delta)) throw ValidationError("early_stop.min_delta must be >= 0");
  if (policy.mode != "maximize") throw ValidationError("early_stop.mode must be 'maximize'");
}

std::pair<EarlyStopState, Decision> early_stop_update(EarlyStopState state, const EarlyStopPolicy& policy, double value) {
  if (!std::isfinite(value)) throw ValidationError("non-finite validation metric");
  ++state.evaluations;
  if (value > state.best_value + policy.min_delta) {
    state.best_value = value;
    state.best_eval_index = state.evaluations;
    state.staleness = 0;
  } else {
    ++state.staleness;
  }
  return {state, state.staleness >= policy.patience ? Decision::stop : Decision::proceed};
}

int select_checkpoint(const std::vector<double>& history) {
  int best = 0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (best == 0 || history[i] > history[static_cast<std::size_t>(best - 1)]) best = static_cast<int>(i) + 1;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Config

void validate(const ExperimentConfig& cfg) {
  if (cfg.corpora.empty()) throw ValidationError("config has no corpora");
  if (cfg.eval_every < 1) throw ValidationError("eval_every must be >= 1");
  if (cfg.split.ratios.empty()) throw ValidationError("config has no split ratios");
  if (cfg.poll_interval_ms < 0) throw ValidationError("poll_interval_ms must be >= 0");
  if (!(cfg.job_timeout_s > 0)) throw ValidationError("job_timeout_s must be > 0");
  validate(cfg.early_stop);
  backend::validate(cfg.backend);
}

namespace {

fs::path resolve_against(const fs::path& base, const std::string& p) { return resolve_path(base, p); }

std::string resolve_endpoint(const fs::path& base, std::string endpoint) {
  if (endpoint.rfind("mock:", 0) == 0) return "mock:" + resolve_against(base, endpoint.substr(5)).string();
  return endpoint;
}

textprep::PipelineSpec pipeline_from_node(const YAML::Node& node, const fs::path& base) {
  if (!node) throw ValidationError("config has no pipeline");
  if (node.IsScalar()) {
    const std::string name = node.as<std::string>();
    const fs::path local = resolve_against(base, name);
    if (name.find('/') != std::string::npos || name.ends_with(".yaml")) return textprep::load_pipeline(local);
    return textprep::resolve_pipeline(name);
  }
  return textprep::pipeline_from_yaml(YAML::Dump(node));
}

}  // namespace

ExperimentConfig experiment_config_from_yaml(std::string_view yaml, const fs::path& base_dir) {
  const YAML::Node root = parse_yaml(yaml, "experiment config");
  if (!root.IsMap()) throw ValidationError("experiment config must be a mapping");
  ExperimentConfig cfg;
  try {
    if (root["name"]) cfg.name = root["name"].as<std::string>();
    if (!root["task"]) throw ValidationError("config has no task");
    cfg.task = parse_experiment_task(root["task"].as<std::string>());
    if (root["seed"]) cfg.seed = root["seed"].as<std::uint64_t>();
    if (const auto corpora = root["corpora"]) {
      if (!corpora.IsMap()) throw ValidationError("corpora must map names to paths");
      for (const auto& kv : corpora) cfg.corpora[kv.first.as<std::string>()] = resolve_against(base_dir, kv.second.as<std::string>());
    }
    if (const auto split = root["split"]) {
      const auto ratios = split["ratios"] ? split["ratios"] : split;
      for (const auto& kv : ratios) {
        if (kv.first.as<std::string>() == "stratified") continue;
        cfg.split.ratios.emplace_back(kv.first.as<std::string>(), kv.second.as<double>());
      }
      if (split["stratified"]) cfg.split.stratified = split["stratified"].as<bool>();
    } else {
      cfg.split.ratios = {{"train", 0.8}, {"validation", 0.2}};
    }
    cfg.split.seed = cfg.seed;
    cfg.pipeline = pipeline_from_node(root["pipeline"], base_dir);
    if (root["eval_every"]) cfg.eval_every = root["eval_every"].as<int>();
    if (const auto es = root["early_stop"]) {
      if (es["patience"]) cfg.early_stop.patience = es["patience"].as<int>();
      if (es["min_delta"]) cfg.early_stop.min_delta = es["min_delta"].as<double>();
      if (es["mode"]) cfg.early_stop.mode = es["mode"].as<std::string>();
    }
    if (const auto b = root["backend"]) {
      cfg.backend = b.IsScalar() ? backend::BackendConfig{b.as<std::string>()} : backend::backend_config_from_json(yaml_to_json(b));
      cfg.backend.endpoint = resolve_endpoint(base_dir, cfg.backend.endpoint);
    }
    cfg.backend = backend::with_env_override(cfg.backend);
    if (const auto hp = root["hyperparams"]) {
      for (const auto& kv : hp) cfg.hyperparams[kv.first.as<std::string>()] = kv.second.as<std::string>();
    }
    if (root["output_dir"]) cfg.output_dir = resolve_against(base_dir, root["output_dir"].as<std::string>());
    if (root["poll_interval_ms"]) cfg.poll_interval_ms = root["poll_interval_ms"].as<int>();
    if (root["job_timeout_s"]) cfg.job_timeout_s = root["job_timeout_s"].as<double>();
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("experiment config: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("experiment config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  return experiment_config_from_yaml(read_file(path), fs::absolute(path).parent_path());
}

Json to_json(const ExperimentConfig& cfg) {
  Json corpora = Json::object();
  for (const auto& [name, path] : cfg.corpora) corpora[name] = path.string();
  Json ratios = Json::array();
  for (const auto& [name, r] : cfg.split.ratios) ratios.push_back({name, r});
  return Json{{"name", cfg.name},
              {"task", to_string(cfg.task)},
              {"corpora", corpora},
              {"split", {{"ratios", ratios}, {"seed", cfg.split.seed}, {"stratified", cfg.split.stratified}}},
              {"pipeline", textprep::to_yaml(cfg.pipeline)},
              {"eval_every", cfg.eval_every},
              {"early_stop", {{"patience", cfg.early_stop.patience}, {"min_delta", cfg.early_stop.min_delta}, {"mode", cfg.early_stop.mode}}},
              {"backend", backend::to_json(cfg.backend)},
              {"seed", cfg.seed},
              {"hyperparams", cfg.hyperparams},
              {"poll_interval_ms", cfg.poll_interval_ms},
              {"job_timeout_s", cfg.job_timeout_s}};
}

std::string config_hash(const ExperimentConfig& cfg) { return to_hex(fnv1a64(to_json(cfg).dump())); }

// ---------------------------------------------------------------------------
// Manifest

Json to_json(const RunManifest& m, bool include_timestamps) {
  Json splits = Json::object();
  for (const auto& [corpus_name, by_split] : m.splits) {
    for (const auto& [split_name, rec] : by_split) {
      splits[corpus_name][split_name] = {{"size", rec.size}, {"counts", rec.counts}, {"path", rec.path}};
    }
  }
  Json history = Json::array();
  for (const auto& e : m.history) {
    history.push_back({{"index", e.index}, {"step", e.step}, {"metric", e.metric}, {"checkpoint", e.checkpoint}});
  }
  Json j{{"kind", "run_manifest"},
         {"schema_version", 1},
         {"name", m.name},
         {"task", m.task},
         {"config_hash", m.config_hash},
         {"seed", m.seed},
         {"config", m.config},
         {"splits", splits},
         {"split_scope", "each corpus is split separately with the same ratios and seed"},
         {"pipeline", {{"name", m.pipeline_name}, {"steps", m.pipeline_steps}}},
         {"early_stop", {{"patience", m.early_stop.patience}, {"min_delta", m.early_stop.min_delta}, {"mode", m.early_stop.mode}}},
         {"monitored_metric", m.metric_name},
         {"eval_every", m.eval_every},
         {"job_id", m.job_id},
         {"metric_history", history},
         {"metric_log", kMetricLogFile},
         {"best_eval_index", m.best_eval_index},
         {"selection", "first argmax of the logged validation metric"},
         {"stopped_early", m.stopped_early},
         {"chosen_model", m.chosen_model},
         {"service_model", m.service_model},
         {"status", m.status}};
  if (!m.error_kind.empty()) j["error"] = {{"stage", m.error_stage}, {"kind", m.error_kind}, {"message", m.error_message}};
  if (include_timestamps) {
    j["started_at"] = m.started_at;
    j["finished_at"] = m.finished_at;
  }
  return j;
}

RunManifest run_manifest_from_json(const Json& j) {
  RunManifest m;
  m.name = j.at("name").get<std::string>();
  m.task = j.at("task").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.config = j.value("config", Json::object());
  for (const auto& [corpus_name, by_split] : j.at("splits").items()) {
    for (const auto& [split_name, rec] : by_split.items()) {
      m.splits[corpus_name][split_name] = {rec.at("size").get<std::size_t>(),
                                           rec.at("counts").get<std::map<std::string, std::int64_t>>(),
                                           rec.at("path").get<std::string>()};
    }
  }
  m.pipeline_name = j.at("pipeline").at("name").get<std::string>();
  m.pipeline_steps = j.at("pipeline").at("steps").get<std::vector<std::string>>();
  m.early_stop.patience = j.at("early_stop").at("patience").get<int>();
  m.early_stop.min_delta = j.at("early_stop").at("min_delta").get<double>();
  m.early_stop.mode = j.at("early_stop").at("mode").get<std::string>();
  m.metric_name = j.at("monitored_metric").get<std::string>();
  m.eval_every = j.at("eval_every").get<int>();
  m.job_id = j.at("job_id").get<std::string>();
  for (const auto& e : j.at("metric_history")) {
    m.history.push_back({e.at("index").get<int>(), e.at("step").get<std::int64_t>(), e.at("metric").get<double>(),
                         e.at("checkpoint").get<std::string>()});
  }
  m.best_eval_index = j.at("best_eval_index").get<int>();
  m.stopped_early = j.at("stopped_early").get<bool>();
  m.chosen_model = j.at("chosen_model").get<std::string>();
  m.service_model = j.value("service_model", "");
  m.status = j.at("status").get<std::string>();
  if (j.contains("error")) {
    m.error_stage = j["error"].at("stage").get<std::string>();
    m.error_kind = j["error"].at("kind").get<std::string>();
    m.error_message = j["error"].at("message").get<std::string>();
  }
  m.started_at = j.value("started_at", "");
  m.finished_at = j.value("finished_at", "");
  return m;
}

// ---------------------------------------------------------------------------
// Run

namespace {

void check_corpus_for_task(const corpus::Corpus& c, ExperimentTask task) {
  if (task == ExperimentTask::nmt) {
    if (c.kind() != corpus::CorpusKind::parallel) throw ValidationError("corpus " + c.name + " is not parallel; nmt needs parallel corpora");
    return;
  }
  if (c.kind() != corpus::CorpusKind::labeled) throw ValidationError("corpus " + c.name + " is not labeled");
  const auto want = task == ExperimentTask::sentiment ? corpus::Task::sentiment : corpus::Task::hate;
  for (const auto& e : c.examples()) {
    if (e.task != want) throw ValidationError("record " + e.utterance.id + " in " + c.name + " is not a " + to_string(task) + " example");
  }
}

class MetricLog {
 public:
  explicit MetricLog(const fs::path& path) : out_(path, std::ios::trunc) {
    if (!out_) throw ValidationError("cannot write " + path.string());
  }
  void append(const Evaluation& e, const EarlyStopState& state, Decision d) {
    out_ << Json{{"index", e.index},
                 {"step", e.step},
                 {"metric", e.metric},
                 {"checkpoint", e.checkpoint},
                 {"best_eval_index", state.best_eval_index},
                 {"staleness", state.staleness},
                 {"decision", d == Decision::stop ? "stop" : "continue"}}
                .dump()
         << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg, backend::BackendClient* client) {
  RunManifest m;
  m.started_at = utc_timestamp();
  m.name = cfg.name;
  m.task = to_string(cfg.task);
  m.seed = cfg.seed;
  m.pipeline_name = cfg.pipeline.name;
  for (const auto& s : cfg.pipeline.steps) m.pipeline_steps.push_back(textprep::to_string(s.id));
  m.early_stop = cfg.early_stop;
  m.metric_name = monitored_metric(cfg.task);
  m.eval_every = cfg.eval_every;

  std::string stage = "config";
  auto write_manifest = [&] {
    m.finished_at = utc_timestamp();
    write_file(cfg.output_dir / kManifestFile, to_json(m).dump(2) + "\n");
  };

  try {
    fs::create_directories(cfg.output_dir);
    m.config = to_json(cfg);
    m.config_hash = config_hash(cfg);
    validate(cfg);

    stage = "corpus";
    corpus::SplitSpec split = cfg.split;
    split.seed = cfg.seed;
    backend::TrainingJob job;
    job.task = to_string(cfg.task);
    job.pipeline = cfg.pipeline;
    job.eval_every = cfg.eval_every;
    job.seed = cfg.seed;
    job.hyperparams = cfg.hyperparams;
    for (const auto& [name, path] : cfg.corpora) {
      corpus::Corpus c = corpus::load_corpus(path);
      c.name = name;
      check_corpus_for_task(c, cfg.task);
      for (auto& [split_name, part] : corpus::split_corpus(c, split)) {
        if (part.empty()) throw ValidationError("split '" + split_name + "' of corpus " + name + " is empty");
        const fs::path rel = fs::path("splits") / (name + "." + split_name + ".jsonl");
        corpus::save_corpus(part, cfg.output_dir / rel);
        m.splits[name][split_name] = {part.size(), part.manifest.counts, rel.string()};
        job.corpora[name][split_name] = fs::absolute(cfg.output_dir / rel).string();
      }
    }

    stage = "submit";
    std::optional<backend::BackendClient> owned;
    if (!client) client = &owned.emplace(cfg.backend);
    m.job_id = client->submit_training_job(job);

    stage = "train";
    MetricLog log(cfg.output_dir / kMetricLogFile);
    EarlyStopState state;
    bool stop_sent = false;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(cfg.job_timeout_s);
    JobStatus status = client->poll_job(m.job_id);
    for (;;) {
      for (const auto& e : status.evaluations) {
        if (e.index <= static_cast<int>(m.history.size())) continue;
        if (e.index != static_cast<int>(m.history.size()) + 1) {
          throw BackendError(BackendErrorKind::bad_response, "evaluation index " + std::to_string(e.index) + " out of sequence");
        }
        m.history.push_back(e);
        Decision d = Decision::proceed;
        if (!m.stopped_early) {
          std::tie(state, d) = early_stop_update(state, cfg.early_stop, e.metric);
          if (d == Decision::stop) m.stopped_early = true;
        }
        log.append(e, state, d);
      }
      if (status.state == JobState::failed) throw BackendError(BackendErrorKind::internal, "training job failed: " + status.reason);
      if (status.state == JobState::finished) break;
      if (m.stopped_early && !stop_sent) {
        stop_sent = true;
        status = client->stop_job(m.job_id);
        continue;
      }
      if (std::chrono::steady_clock::now() > deadline) {
        client->stop_job(m.job_id);
        throw BackendError(BackendErrorKind::timeout, "training job exceeded " + std::to_string(cfg.job_timeout_s) + " s");
      }
      if (cfg.poll_interval_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(cfg.poll_interval_ms));
      status = client->poll_job(m.job_id);
    }

    stage = "select";
    std::vector<double> values;
    for (const auto& e : m.history) values.push_back(e.metric);
    m.best_eval_index = select_checkpoint(values);
    m.service_model = status.model_id;
    m.chosen_model = m.best_eval_index > 0 ? m.history[static_cast<std::size_t>(m.best_eval_index - 1)].checkpoint : status.model_id;
    if (m.chosen_model.empty()) throw BackendError(BackendErrorKind::bad_response, "finished job reported no model");
    m.status = "finished";
  } catch (const ValidationError& e) {
    m.status = "failed";
    m.error_stage = stage;
    m.error_kind = "validation";
    m.error_message = e.what();
  } catch (const BackendError& e) {
    m.status = "failed";
    m.error_stage = stage;
    m.error_kind = std::string("backend:") + to_string(e.kind());
    m.error_message = e.what();
  }
  try {
    write_manifest();
  } catch (const std::exception&) {
    if (m.ok()) throw;
  }
  return m;
}

}  // namespace locmt::trainctl
