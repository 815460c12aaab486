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

#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <utility>
#include <vector>

#include "locmt/corpus.hpp"
#include "locmt/error.hpp"
#include "locmt/textprep.hpp"

// Client side of the model-service wire protocol (HTTP + JSON under /v1/) and an in-process
// mock service that speaks the same protocol.
namespace locmt::backend {

using Json = nlohmann::json;

inline constexpr const char* kEndpointEnvVar = "LOCMT_BACKEND";

struct BackendConfig {
  // `http://host:port[/prefix]` or `mock:<path>`.
  std::string endpoint;
  double timeout_s = 30.0;
  std::size_t max_in_flight = 4;
  int max_attempts = 3;
  int backoff_ms = 200;
  std::size_t batch_size = 32;
};

void validate(const BackendConfig& cfg);
// LOCMT_BACKEND, when set, replaces the configured endpoint.
BackendConfig with_env_override(BackendConfig cfg);
Json to_json(const BackendConfig& cfg);
BackendConfig backend_config_from_json(const Json& j);

struct TextItem {
  std::string id;
  std::string text;
};

struct TranslateRequest {
  std::vector<TextItem> items;
  corpus::LangTag src;
  corpus::LangTag tgt;
  std::string model_id;  // empty: the service default
};

struct Translation {
  std::string id;
  std::string translation;
};

struct TranslateResponse {
  std::vector<Translation> items;
  std::string model_id;
};

struct ClassifyRequest {
  std::vector<TextItem> items;
  corpus::Task task = corpus::Task::sentiment;
  std::string model_id;
};

struct Classification {
  std::string id;
  corpus::Label label;
  // In task class order.
  std::vector<std::pair<corpus::Label, double>> probabilities;
};

struct ClassifyResponse {
  std::vector<Classification> items;
  std::string model_id;
};

struct TrainingJob {
  // nmt, sentiment or hate
  std::string task;
  // corpus name -> split name -> path/URI
  std::map<std::string, std::map<std::string, std::string>> corpora;
  textprep::PipelineSpec pipeline;
  int eval_every = 100;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> hyperparams;
};

struct Evaluation {
  int index = 0;  // 1-based
  std::int64_t step = 0;
  double metric = 0.0;
  std::string checkpoint;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

enum class JobState { queued, running, finished, failed };
std::string to_string(JobState s);
JobState parse_job_state(std::string_view s);

struct JobStatus {
  std::string job_id;
  JobState state = JobState::queued;
  std::int64_t step = 0;
  std::optional<double> latest_metric;
  std::vector<Evaluation> evaluations;
  std::string model_id;  // finished
  std::string reason;    // failed
};

// Wire encodings (exact field names of the protocol).
Json to_json(const TranslateRequest& r);
Json to_json(const TranslateResponse& r);
Json to_json(const ClassifyRequest& r);
Json to_json(const ClassifyResponse& r);
Json to_json(const TrainingJob& j);
Json to_json(const JobStatus& s);
TranslateRequest translate_request_from_json(const Json& j);
TranslateResponse translate_response_from_json(const Json& j);
ClassifyRequest classify_request_from_json(const Json& j);
ClassifyResponse classify_response_from_json(const Json& j, corpus::Task task);
TrainingJob training_job_from_json(const Json& j);
JobStatus job_status_from_json(const Json& j);
Json error_body(BackendErrorKind kind, const std::string& detail);

struct WireResponse {
  int status = 200;
  Json body;
};

// One request/response exchange. Implementations throw BackendError(timeout|transport)
// when no response arrives; HTTP-level errors come back as a status code and error body.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual WireResponse post(const std::string& path, const Json& body) = 0;
  virtual WireResponse get(const std::string& path) = 0;
};

std::shared_ptr<Transport> make_http_transport(const std::string& base_url, double timeout_s);

// Deterministic in-process service. Configured by a mock file:
//   source<TAB>target            lexicon entry (word-by-word translation)
//   %pair<TAB>fr<TAB>ar-lev      supported pair; any pair when none are listed
//   %rule<TAB>keyword<TAB>label  classifier keyword rule
//   %label<TAB>id<TAB>label      scripted label for an item id (wins over rules)
//   %default<TAB>task<TAB>label  fallback label (first task class otherwise)
//   %metrics<TAB>0.6 0.62 ...    validation metric per evaluation for training jobs
//   %fail<TAB>token              translating text containing token fails
//   %empty                       every translation is the empty string
//   %model<TAB>prefix            model id prefix (default "mock")
class MockService : public Transport {
 public:
  static std::shared_ptr<MockService> from_file(const std::filesystem::path& path);
  static std::shared_ptr<MockService> from_text(std::string_view text);

  WireResponse post(const std::string& path, const Json& body) override;
  WireResponse get(const std::string& path) override;

 private:
  struct Job {
    TrainingJob spec;
    std::string hash;
    int polls = 0;
    bool stop_requested = false;
    JobStatus status;
  };

  MockService() = default;
  WireResponse translate(const Json& body);
  WireResponse classify(const Json& body);
  WireResponse train(const Json& body);
  WireResponse job(const std::string& id, bool advance, bool stop);
  std::string translate_text(const std::string& text) const;
  void advance(Job& job);

  std::mutex mutex_;
  std::map<std::string, std::string> lexicon_;
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::vector<std::pair<std::string, corpus::Label>> rules_;
  std::map<std::string, corpus::Label> scripted_labels_;
  std::map<corpus::Task, corpus::Label> defaults_;
  std::vector<double> metrics_{0.5, 0.6, 0.7};
  std::vector<std::string> fail_tokens_;
  bool empty_translations_ = false;
  std::string model_prefix_ = "mock";
  std::map<std::string, Job> jobs_;
};

std::shared_ptr<Transport> make_transport(const BackendConfig& cfg);

// Batching, bounded concurrency, retries and response validation over a Transport.
// Safe for concurrent use.
class BackendClient {
 public:
  explicit BackendClient(BackendConfig cfg);
  BackendClient(BackendConfig cfg, std::shared_ptr<Transport> transport);

  const BackendConfig& config() const { return cfg_; }

  TranslateResponse translate_batch(const TranslateRequest& req);
  ClassifyResponse classify_batch(const ClassifyRequest& req);
  std::string submit_training_job(const TrainingJob& job);
  JobStatus poll_job(const std::string& job_id);
  // Asks the service to stop training; it finishes with its best checkpoint.
  JobStatus stop_job(const std::string& job_id);

 private:
  WireResponse send(const std::string& path, const Json* body, bool idempotent);
  JobStatus checked_status(const std::string& job_id, const WireResponse& resp);

  BackendConfig cfg_;
  std::shared_ptr<Transport> transport_;
  std::counting_semaphore<1 << 16> in_flight_;
  std::mutex jobs_mutex_;
  std::map<std::string, JobState> last_state_;
};

}  // namespace locmt::backend
