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

#include "locmt/backend.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <set>
#include <thread>

#include "locmt/error.hpp"

namespace locmt::backend {

using corpus::Label;
using corpus::LangTag;
using corpus::Task;

void validate(const BackendConfig& cfg) {
  if (cfg.endpoint.empty()) throw ValidationError("backend endpoint is empty");
  if (!(cfg.timeout_s > 0.0)) throw ValidationError("backend timeout must be > 0");
  if (cfg.max_in_flight < 1) throw ValidationError("backend max_in_flight must be >= 1");
  if (cfg.max_attempts < 1) throw ValidationError("backend retry count must be >= 1");
  if (cfg.batch_size < 1) throw ValidationError("backend batch_size must be >= 1");
  const bool mock = cfg.endpoint.rfind("mock:", 0) == 0;
  const bool http = cfg.endpoint.rfind("http://", 0) == 0 || cfg.endpoint.rfind("https://", 0) == 0;
  if (!mock && !http) throw ValidationError("backend endpoint must be http(s)://... or mock:<file>, got '" + cfg.endpoint + "'");
}

BackendConfig with_env_override(BackendConfig cfg) {
  if (const char* env = std::getenv(kEndpointEnvVar); env && *env) cfg.endpoint = env;
  return cfg;
}

Json to_json(const BackendConfig& cfg) {
  return {{"endpoint", cfg.endpoint},         {"timeout", cfg.timeout_s},
          {"max_in_flight", cfg.max_in_flight}, {"retry", {{"attempts", cfg.max_attempts}, {"backoff_ms", cfg.backoff_ms}}},
          {"batch_size", cfg.batch_size}};
}

BackendConfig backend_config_from_json(const Json& j) {
  BackendConfig cfg;
  cfg.endpoint = j.value("endpoint", "");
  cfg.timeout_s = j.value("timeout", cfg.timeout_s);
  cfg.max_in_flight = j.value("max_in_flight", cfg.max_in_flight);
  if (j.contains("retry")) {
    cfg.max_attempts = j["retry"].value("attempts", cfg.max_attempts);
    cfg.backoff_ms = j["retry"].value("backoff_ms", cfg.backoff_ms);
  }
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  return cfg;
}

std::string to_string(JobState s) {
  switch (s) {
    case JobState::queued: return "queued";
    case JobState::running: return "running";
    case JobState::finished: return "finished";
    case JobState::failed: return "failed";
  }
  return "failed";
}

JobState parse_job_state(std::string_view s) {
  if (s == "queued") return JobState::queued;
  if (s == "running") return JobState::running;
  if (s == "finished") return JobState::finished;
  if (s == "failed") return JobState::failed;
  throw BackendError(BackendErrorKind::bad_response, "unknown job status '" + std::string(s) + "'");
}

namespace {

Json items_to_json(const std::vector<TextItem>& items) {
  Json arr = Json::array();
  for (const auto& it : items) arr.push_back({{"id", it.id}, {"text", it.text}});
  return arr;
}

std::vector<TextItem> items_from_json(const Json& j) {
  std::vector<TextItem> out;
  for (const auto& it : j.at("items")) out.push_back({it.at("id").get<std::string>(), it.at("text").get<std::string>()});
  return out;
}

// Wraps json access errors so a malformed body is reported as such.
template <typename F>
auto decode(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw BackendError(BackendErrorKind::bad_response, std::string(what) + ": " + e.what());
  } catch (const ValidationError& e) {
    throw BackendError(BackendErrorKind::bad_response, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const TranslateRequest& r) {
  Json j = {{"items", items_to_json(r.items)}, {"src", r.src.str()}, {"tgt", r.tgt.str()}};
  if (!r.model_id.empty()) j["model_id"] = r.model_id;
  return j;
}

Json to_json(const TranslateResponse& r) {
  Json arr = Json::array();
  for (const auto& it : r.items) arr.push_back({{"id", it.id}, {"translation", it.translation}});
  return {{"items", arr}, {"model_id", r.model_id}};
}

Json to_json(const ClassifyRequest& r) {
  Json j = {{"items", items_to_json(r.items)}, {"task", corpus::to_string(r.task)}};
  if (!r.model_id.empty()) j["model_id"] = r.model_id;
  return j;
}

Json to_json(const ClassifyResponse& r) {
  Json arr = Json::array();
  for (const auto& it : r.items) {
    Json probs = Json::object();
    for (const auto& [label, p] : it.probabilities) probs[corpus::to_string(label)] = p;
    arr.push_back({{"id", it.id}, {"label", corpus::to_string(it.label)}, {"probabilities", probs}});
  }
  return {{"items", arr}, {"model_id", r.model_id}};
}

Json to_json(const TrainingJob& job) {
  return {{"task", job.task},         {"corpora", job.corpora},
          {"pipeline", textprep::to_yaml(job.pipeline)},
          {"eval_every", job.eval_every}, {"seed", job.seed},
          {"hyperparams", job.hyperparams}};
}

Json to_json(const JobStatus& s) {
  Json evals = Json::array();
  for (const auto& e : s.evaluations) {
    evals.push_back({{"index", e.index}, {"step", e.step}, {"metric", e.metric}, {"checkpoint", e.checkpoint}});
  }
  Json j = {{"job_id", s.job_id}, {"status", to_string(s.state)}, {"step", s.step}, {"evaluations", evals}};
  j["latest_metric"] = s.latest_metric ? Json(*s.latest_metric) : Json(nullptr);
  if (s.state == JobState::finished) j["model_id"] = s.model_id;
  if (s.state == JobState::failed) j["reason"] = s.reason;
  return j;
}

TranslateRequest translate_request_from_json(const Json& j) {
  TranslateRequest r;
  r.items = items_from_json(j);
  r.src = LangTag::parse(j.at("src").get<std::string>());
  r.tgt = LangTag::parse(j.at("tgt").get<std::string>());
  r.model_id = j.value("model_id", "");
  return r;
}

TranslateResponse translate_response_from_json(const Json& j) {
  return decode("translate response", [&] {
    TranslateResponse r;
    for (const auto& it : j.at("items")) {
      r.items.push_back({it.at("id").get<std::string>(), it.at("translation").get<std::string>()});
    }
    r.model_id = j.value("model_id", "");
    return r;
  });
}

ClassifyRequest classify_request_from_json(const Json& j) {
  ClassifyRequest r;
  r.items = items_from_json(j);
  r.task = corpus::parse_task(j.at("task").get<std::string>());
  r.model_id = j.value("model_id", "");
  return r;
}

ClassifyResponse classify_response_from_json(const Json& j, Task task) {
  return decode("classify response", [&] {
    ClassifyResponse r;
    const auto classes = corpus::task_classes(task);
    for (const auto& it : j.at("items")) {
      Classification c;
      c.id = it.at("id").get<std::string>();
      const auto& probs = it.at("probabilities");
      double sum = 0.0;
      for (auto label : classes) {
        const double p = probs.at(corpus::to_string(label)).get<double>();
        if (!(p >= 0.0 && p <= 1.0)) throw BackendError(BackendErrorKind::bad_response, "probability out of range for " + c.id);
        c.probabilities.emplace_back(label, p);
        sum += p;
      }
      if (probs.size() != classes.size()) {
        throw BackendError(BackendErrorKind::bad_response, "unexpected classes in probabilities for " + c.id);
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        throw BackendError(BackendErrorKind::bad_response, "probabilities for " + c.id + " sum to " + std::to_string(sum));
      }
      // First class wins ties.
      auto best = std::max_element(c.probabilities.begin(), c.probabilities.end(),
                                   [](const auto& a, const auto& b) { return a.second < b.second; });
      c.label = best->first;
      r.items.push_back(std::move(c));
    }
    r.model_id = j.value("model_id", "");
    return r;
  });
}

TrainingJob training_job_from_json(const Json& j) {
  TrainingJob job;
  job.task = j.at("task").get<std::string>();
  job.corpora = j.at("corpora").get<std::map<std::string, std::map<std::string, std::string>>>();
  if (j.contains("pipeline") && j["pipeline"].is_string()) job.pipeline = textprep::pipeline_from_yaml(j["pipeline"].get<std::string>());
  job.eval_every = j.value("eval_every", 100);
  job.seed = j.value("seed", std::uint64_t{0});
  job.hyperparams = j.value("hyperparams", std::map<std::string, std::string>{});
  return job;
}

JobStatus job_status_from_json(const Json& j) {
  return decode("job status", [&] {
    JobStatus s;
    s.job_id = j.at("job_id").get<std::string>();
    s.state = parse_job_state(j.at("status").get<std::string>());
    s.step = j.value("step", std::int64_t{0});
    if (j.contains("latest_metric") && !j["latest_metric"].is_null()) s.latest_metric = j["latest_metric"].get<double>();
    if (j.contains("evaluations")) {
      for (const auto& e : j["evaluations"]) {
        s.evaluations.push_back({e.at("index").get<int>(), e.value("step", std::int64_t{0}), e.at("metric").get<double>(),
                                 e.value("checkpoint", "")});
      }
    }
    s.model_id = j.value("model_id", "");
    s.reason = j.value("reason", "");
    if (s.state == JobState::finished && s.model_id.empty()) {
      throw BackendError(BackendErrorKind::bad_response, "finished job without model_id");
    }
    return s;
  });
}

Json error_body(BackendErrorKind kind, const std::string& detail) {
  return {{"error", {{"kind", to_string(kind)}, {"detail", detail}}}};
}

std::shared_ptr<Transport> make_transport(const BackendConfig& cfg) {
  validate(cfg);
  if (cfg.endpoint.rfind("mock:", 0) == 0) return MockService::from_file(cfg.endpoint.substr(5));
  return make_http_transport(cfg.endpoint, cfg.timeout_s);
}

BackendClient::BackendClient(BackendConfig cfg) : BackendClient(cfg, make_transport(cfg)) {}

BackendClient::BackendClient(BackendConfig cfg, std::shared_ptr<Transport> transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)), in_flight_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, std::min<std::size_t>(cfg_.max_in_flight, 1 << 16)))) {
  validate(cfg_);
}

WireResponse BackendClient::send(const std::string& path, const Json* body, bool idempotent) {
  const int attempts = idempotent ? cfg_.max_attempts : 1;
  for (int attempt = 1;; ++attempt) {
    bool retryable = false;
    std::exception_ptr failure;
    WireResponse resp;
    in_flight_.acquire();
    try {
      resp = body ? transport_->post(path, *body) : transport_->get(path);
    } catch (const BackendError& e) {
      failure = std::current_exception();
      retryable = e.kind() == BackendErrorKind::timeout || e.kind() == BackendErrorKind::transport;
    }
    in_flight_.release();

    if (!failure) {
      if (resp.status >= 200 && resp.status < 300) return resp;
      BackendErrorKind kind = resp.status >= 500 ? BackendErrorKind::internal : BackendErrorKind::bad_request;
      std::string detail = "HTTP " + std::to_string(resp.status);
      if (resp.body.is_object() && resp.body.contains("error") && resp.body["error"].is_object()) {
        kind = backend_error_kind_from_string(resp.body["error"].value("kind", ""));
        detail = resp.body["error"].value("detail", detail);
      }
      failure = std::make_exception_ptr(BackendError(kind, detail));
      retryable = resp.status >= 500 && kind == BackendErrorKind::internal;
    }
    if (!retryable || attempt >= attempts) std::rethrow_exception(failure);
    std::this_thread::sleep_for(std::chrono::milliseconds(cfg_.backoff_ms * (1 << (attempt - 1))));
  }
}

namespace {

template <typename Item>
std::vector<Item> reorder_by_request(std::vector<Item> got, const std::vector<TextItem>& requested) {
  std::map<std::string, Item> by_id;
  for (auto& it : got) {
    const std::string id = it.id;
    if (!by_id.try_emplace(id, std::move(it)).second) {
      throw BackendError(BackendErrorKind::bad_response, "duplicate id '" + id + "' in response");
    }
  }
  if (by_id.size() != requested.size()) {
    throw BackendError(BackendErrorKind::bad_response, "response has " + std::to_string(by_id.size()) + " items for " +
                                                           std::to_string(requested.size()) + " requested");
  }
  std::vector<Item> out;
  out.reserve(requested.size());
  for (const auto& r : requested) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) throw BackendError(BackendErrorKind::bad_response, "response is missing id '" + r.id + "'");
    out.push_back(std::move(it->second));
  }
  return out;
}

// Runs fn(chunk_index) for every chunk with at most `workers` threads; rethrows the first failure.
template <typename F>
void for_each_chunk(std::size_t chunks, std::size_t workers, F&& fn) {
  if (chunks == 1 || workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex m;
  std::exception_ptr failure;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(chunks, workers); ++w) {
    pool.emplace_back([&] {
      for (std::size_t c; (c = next.fetch_add(1)) < chunks;) {
        try {
          fn(c);
        } catch (...) {
          std::lock_guard lock(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

void check_unique_ids(const std::vector<TextItem>& items) {
  std::set<std::string> seen;
  for (const auto& it : items) {
    if (!seen.insert(it.id).second) throw ValidationError("duplicate item id '" + it.id + "' in request");
  }
}

}  // namespace

TranslateResponse BackendClient::translate_batch(const TranslateRequest& req) {
  TranslateResponse out;
  out.model_id = req.model_id;
  if (req.items.empty()) return out;
  check_unique_ids(req.items);

  const std::size_t chunks = (req.items.size() + cfg_.batch_size - 1) / cfg_.batch_size;
  std::vector<TranslateResponse> parts(chunks);
  for_each_chunk(chunks, cfg_.max_in_flight, [&](std::size_t c) {
    TranslateRequest sub = req;
    const auto begin = req.items.begin() + static_cast<std::ptrdiff_t>(c * cfg_.batch_size);
    const auto end = req.items.begin() + static_cast<std::ptrdiff_t>(std::min(req.items.size(), (c + 1) * cfg_.batch_size));
    sub.items.assign(begin, end);
    const Json body = to_json(sub);
    auto resp = translate_response_from_json(send("/v1/translate", &body, true).body);
    resp.items = reorder_by_request(std::move(resp.items), sub.items);
    parts[c] = std::move(resp);
  });
  for (auto& p : parts) {
    if (out.model_id.empty()) out.model_id = p.model_id;
    for (auto& it : p.items) out.items.push_back(std::move(it));
  }
  return out;
}

ClassifyResponse BackendClient::classify_batch(const ClassifyRequest& req) {
  ClassifyResponse out;
  out.model_id = req.model_id;
  if (req.items.empty()) return out;
  check_unique_ids(req.items);

  const std::size_t chunks = (req.items.size() + cfg_.batch_size - 1) / cfg_.batch_size;
  std::vector<ClassifyResponse> parts(chunks);
  for_each_chunk(chunks, cfg_.max_in_flight, [&](std::size_t c) {
    ClassifyRequest sub = req;
    const auto begin = req.items.begin() + static_cast<std::ptrdiff_t>(c * cfg_.batch_size);
    const auto end = req.items.begin() + static_cast<std::ptrdiff_t>(std::min(req.items.size(), (c + 1) * cfg_.batch_size));
    sub.items.assign(begin, end);
    const Json body = to_json(sub);
    auto resp = classify_response_from_json(send("/v1/classify", &body, true).body, req.task);
    resp.items = reorder_by_request(std::move(resp.items), sub.items);
    parts[c] = std::move(resp);
  });
  for (auto& p : parts) {
    if (out.model_id.empty()) out.model_id = p.model_id;
    for (auto& it : p.items) out.items.push_back(std::move(it));
  }
  return out;
}

std::string BackendClient::submit_training_job(const TrainingJob& job) {
  const Json body = to_json(job);
  const auto resp = send("/v1/train", &body, false);
  return decode("train response", [&] { return resp.body.at("job_id").get<std::string>(); });
}

JobStatus BackendClient::checked_status(const std::string& job_id, const WireResponse& resp) {
  JobStatus s = job_status_from_json(resp.body);
  if (s.job_id != job_id) throw BackendError(BackendErrorKind::bad_response, "status for '" + s.job_id + "' when polling '" + job_id + "'");
  std::lock_guard lock(jobs_mutex_);
  auto [it, inserted] = last_state_.emplace(job_id, s.state);
  if (!inserted) {
    const JobState prev = it->second;
    const bool terminal = prev == JobState::finished || prev == JobState::failed;
    if ((terminal && s.state != prev) || static_cast<int>(s.state) < static_cast<int>(prev)) {
      throw BackendError(BackendErrorKind::bad_response,
                         "job " + job_id + " regressed from " + to_string(prev) + " to " + to_string(s.state));
    }
    it->second = s.state;
  }
  return s;
}

JobStatus BackendClient::poll_job(const std::string& job_id) {
  return checked_status(job_id, send("/v1/jobs/" + job_id, nullptr, false));
}

JobStatus BackendClient::stop_job(const std::string& job_id) {
  const Json body = {{"action", "stop"}};
  return checked_status(job_id, send("/v1/jobs/" + job_id, &body, false));
}

}  // namespace locmt::backend
