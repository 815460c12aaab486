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

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "locmt/backend.hpp"
#include "locmt/error.hpp"
#include "locmt/locrules.hpp"
#include "locmt/unicode.hpp"
#include "locmt/util.hpp"

namespace locmt::backend {

using corpus::Label;
using corpus::Task;
namespace u = locmt::unicode;

namespace {

std::string lower_utf8(std::string_view s) { return u::encode(u::to_lower(u::decode(s))); }

WireResponse error_response(int status, BackendErrorKind kind, const std::string& detail) {
  return {status, error_body(kind, detail)};
}

bool is_placeholder_char(char32_t c) {
  return c == locrules::kPlaceholderOpen || c == locrules::kPlaceholderClose;
}

}  // namespace

std::shared_ptr<MockService> MockService::from_file(const std::filesystem::path& path) {
  try {
    return from_text(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError("mock backend " + path.string() + ": " + e.what());
  }
}

std::shared_ptr<MockService> MockService::from_text(std::string_view text) {
  std::shared_ptr<MockService> svc(new MockService());
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    auto bad = [&](const std::string& why) {
      return ValidationError("line " + std::to_string(lineno) + ": " + why);
    };
    if (line[0] != '%') {
      if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) throw bad("expected source<TAB>target");
      svc->lexicon_[lower_utf8(fields[0])] = fields[1];
      continue;
    }
    const std::string& directive = fields[0];
    if (directive == "%pair" && fields.size() == 3) {
      svc->pairs_.emplace_back(corpus::LangTag::parse(fields[1]).str(), corpus::LangTag::parse(fields[2]).str());
    } else if (directive == "%rule" && fields.size() == 3) {
      svc->rules_.emplace_back(lower_utf8(fields[1]), corpus::parse_label(fields[2]));
    } else if (directive == "%label" && fields.size() == 3) {
      svc->scripted_labels_[fields[1]] = corpus::parse_label(fields[2]);
    } else if (directive == "%default" && fields.size() == 3) {
      const Task task = corpus::parse_task(fields[1]);
      const Label label = corpus::parse_label(fields[2]);
      if (!corpus::label_legal_for(task, label)) throw bad("default label not legal for task");
      svc->defaults_[task] = label;
    } else if (directive == "%metrics" && fields.size() == 2) {
      svc->metrics_.clear();
      std::istringstream vs(fields[1]);
      for (double v; vs >> v;) svc->metrics_.push_back(v);
      if (svc->metrics_.empty()) throw bad("%metrics needs at least one value");
    } else if (directive == "%fail" && fields.size() == 2) {
      svc->fail_tokens_.push_back(fields[1]);
    } else if (directive == "%empty" && fields.size() == 1) {
      svc->empty_translations_ = true;
    } else if (directive == "%model" && fields.size() == 2) {
      svc->model_prefix_ = fields[1];
    } else {
      throw bad("unknown or malformed directive '" + directive + "'");
    }
  }
  return svc;
}

std::string MockService::translate_text(const std::string& text) const {
  if (empty_translations_) return {};
  std::vector<std::u32string> out_tokens;
  for (const auto& tok : u::tokens(u::decode(text))) {
    // Placeholders are atoms; translate the word material between them.
    std::u32string out;
    std::size_t i = 0;
    while (i < tok.size()) {
      if (tok[i] == locrules::kPlaceholderOpen) {
        const auto close = tok.find(locrules::kPlaceholderClose, i);
        const std::size_t end = close == std::u32string::npos ? tok.size() : close + 1;
        out += tok.substr(i, end - i);
        i = end;
        continue;
      }
      std::size_t j = i;
      while (j < tok.size() && tok[j] != locrules::kPlaceholderOpen) ++j;
      std::u32string word = tok.substr(i, j - i);
      std::size_t b = 0, e = word.size();
      while (b < e && u::is_punct_or_symbol(word[b]) && !is_placeholder_char(word[b])) ++b;
      while (e > b && u::is_punct_or_symbol(word[e - 1]) && !is_placeholder_char(word[e - 1])) --e;
      const std::string core = u::encode(u::to_lower(word.substr(b, e - b)));
      if (auto it = lexicon_.find(core); !core.empty() && it != lexicon_.end()) {
        word = word.substr(0, b) + u::decode(it->second) + word.substr(e);
      }
      out += word;
      i = j;
    }
    out_tokens.push_back(std::move(out));
  }
  return u::encode(u::join(out_tokens, U' '));
}

WireResponse MockService::translate(const Json& body) {
  TranslateRequest req;
  try {
    req = translate_request_from_json(body);
  } catch (const std::exception& e) {
    return error_response(400, BackendErrorKind::bad_request, e.what());
  }
  if (!pairs_.empty()) {
    const auto pair = std::make_pair(req.src.str(), req.tgt.str());
    if (std::find(pairs_.begin(), pairs_.end(), pair) == pairs_.end()) {
      return error_response(400, BackendErrorKind::unsupported_pair, pair.first + "->" + pair.second);
    }
  }
  TranslateResponse resp;
  resp.model_id = req.model_id.empty() ? model_prefix_ + "-base" : req.model_id;
  for (const auto& item : req.items) {
    for (const auto& bad : fail_tokens_) {
      if (item.text.find(bad) != std::string::npos) {
        return error_response(422, BackendErrorKind::item_failure, "cannot translate item '" + item.id + "'");
      }
    }
    resp.items.push_back({item.id, translate_text(item.text)});
  }
  return {200, to_json(resp)};
}

WireResponse MockService::classify(const Json& body) {
  ClassifyRequest req;
  try {
    req = classify_request_from_json(body);
  } catch (const std::exception& e) {
    return error_response(400, BackendErrorKind::bad_request, e.what());
  }
  const auto classes = corpus::task_classes(req.task);
  ClassifyResponse resp;
  resp.model_id = req.model_id.empty() ? model_prefix_ + "-base" : req.model_id;
  for (const auto& item : req.items) {
    Label label = defaults_.count(req.task) ? defaults_.at(req.task) : classes.front();
    if (auto it = scripted_labels_.find(item.id); it != scripted_labels_.end() && corpus::label_legal_for(req.task, it->second)) {
      label = it->second;
    } else {
      const std::string text = lower_utf8(item.text);
      std::vector<int> hits(classes.size(), 0);
      for (const auto& [keyword, rule_label] : rules_) {
        for (std::size_t k = 0; k < classes.size(); ++k) {
          if (classes[k] == rule_label && text.find(keyword) != std::string::npos) ++hits[k];
        }
      }
      const auto best = std::max_element(hits.begin(), hits.end());
      if (*best > 0) label = classes[static_cast<std::size_t>(best - hits.begin())];
    }
    Classification c{item.id, label, {}};
    for (auto cls : classes) {
      c.probabilities.emplace_back(cls, cls == label ? 0.9 : 0.1 / static_cast<double>(classes.size() - 1));
    }
    resp.items.push_back(std::move(c));
  }
  return {200, to_json(resp)};
}

WireResponse MockService::train(const Json& body) {
  TrainingJob spec;
  try {
    spec = training_job_from_json(body);
  } catch (const std::exception& e) {
    return error_response(400, BackendErrorKind::bad_request, e.what());
  }
  // Key the job on corpus contents rather than their paths, so the same data staged in another
  // directory trains the same model.
  Json key = body;
  for (auto& [name, splits] : key["corpora"].items()) {
    for (auto& [split_name, uri] : splits.items()) {
      std::error_code ec;
      if (std::filesystem::is_regular_file(uri.get<std::string>(), ec)) uri = to_hex(fnv1a64(read_file(uri.get<std::string>())));
    }
  }
  const std::string hash = to_hex(fnv1a64(key.dump())).substr(0, 12);
  const std::string id = "job-" + hash;
  if (!jobs_.count(id)) {
    Job job;
    job.spec = std::move(spec);
    job.hash = hash;
    job.status.job_id = id;
    jobs_.emplace(id, std::move(job));
  }
  return {200, {{"job_id", id}}};
}

namespace {

void finish(JobStatus& status, const std::string& prefix, const std::string& hash) {
  status.state = JobState::finished;
  if (status.evaluations.empty()) {
    status.model_id = prefix + "-" + hash + "-init";
    return;
  }
  auto best = status.evaluations.begin();
  for (auto it = status.evaluations.begin(); it != status.evaluations.end(); ++it) {
    if (it->metric > best->metric) best = it;
  }
  status.model_id = best->checkpoint;
}

}  // namespace

void MockService::advance(Job& job) {
  JobStatus& st = job.status;
  if (st.state == JobState::finished || st.state == JobState::failed) return;
  ++job.polls;
  if (job.polls == 1) {
    const auto& task = job.spec.task;
    if (task != "nmt" && task != "sentiment" && task != "hate") {
      st.state = JobState::failed;
      st.reason = "unknown task '" + task + "'";
      return;
    }
    for (const auto& [name, splits] : job.spec.corpora) {
      for (const auto& [split_name, uri] : splits) {
        if (!std::filesystem::is_regular_file(uri)) {
          st.state = JobState::failed;
          st.reason = "corpus not readable: " + uri;
          return;
        }
      }
    }
    st.state = JobState::queued;
    return;
  }
  if (job.stop_requested || st.evaluations.size() >= metrics_.size()) {
    finish(st, model_prefix_, job.hash);
    return;
  }
  const int index = static_cast<int>(st.evaluations.size()) + 1;
  Evaluation e;
  e.index = index;
  e.step = static_cast<std::int64_t>(index) * job.spec.eval_every;
  e.metric = metrics_[static_cast<std::size_t>(index - 1)];
  e.checkpoint = model_prefix_ + "-" + job.hash + "-ckpt-" + std::to_string(index);
  st.evaluations.push_back(e);
  st.state = JobState::running;
  st.step = e.step;
  st.latest_metric = e.metric;
}

WireResponse MockService::job(const std::string& id, bool advance_job, bool stop) {
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return error_response(404, BackendErrorKind::unknown_job, id);
  Job& job = it->second;
  if (stop) {
    job.stop_requested = true;
    if (job.status.state == JobState::queued || job.status.state == JobState::running) {
      finish(job.status, model_prefix_, job.hash);
    }
  } else if (advance_job) {
    advance(job);
  }
  return {200, to_json(job.status)};
}

WireResponse MockService::post(const std::string& path, const Json& body) {
  std::lock_guard lock(mutex_);
  if (path == "/v1/translate") return translate(body);
  if (path == "/v1/classify") return classify(body);
  if (path == "/v1/train") return train(body);
  if (path.rfind("/v1/jobs/", 0) == 0) {
    if (!body.is_object() || body.value("action", "") != "stop") {
      return error_response(400, BackendErrorKind::bad_request, "expected {\"action\": \"stop\"}");
    }
    return job(path.substr(9), false, true);
  }
  return error_response(404, BackendErrorKind::bad_request, "no route " + path);
}

WireResponse MockService::get(const std::string& path) {
  std::lock_guard lock(mutex_);
  if (path.rfind("/v1/jobs/", 0) == 0) return job(path.substr(9), true, false);
  return error_response(404, BackendErrorKind::bad_request, "no route " + path);
}

}  // namespace locmt::backend
