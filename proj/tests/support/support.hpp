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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "locmt/backend.hpp"
#include "locmt/corpus.hpp"

namespace locmt::testing {

namespace fs = std::filesystem;

fs::path fixture_dir();

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_text(const fs::path& path, const std::string& text);

// ---------------------------------------------------------------------------
// Generators

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
bool coin(Rng& rng, double p = 0.5);
template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[uniform(rng, 0, xs.size() - 1)];
}

// Emoji sequences of every shape the extractor must treat as one cluster.
const std::vector<std::string>& sample_emoji();
// Mixed Latin/Arabic text with diacritics, hamza forms, digits, punctuation, URLs, mentions,
// hashtags, HTML entities, zero-width characters and emoji.
std::string random_mixed_text(Rng& rng, std::size_t max_pieces = 14);
// Words only: Latin and Arabic, separated by single spaces.
std::string random_plain_text(Rng& rng, std::size_t max_words = 8);
std::vector<std::vector<std::string>> random_token_corpus(Rng& rng, std::size_t pairs, std::size_t vocab, std::size_t max_len);

corpus::Corpus labeled_corpus(const std::string& name, corpus::Task task,
                              const std::vector<std::pair<corpus::Label, std::size_t>>& counts, const std::string& lang,
                              std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Oracles, written from the definitions without sharing code with the library.

double oracle_bleu(const std::vector<std::vector<std::string>>& hyps, const std::vector<std::vector<std::string>>& refs);
double oracle_rouge1(const std::vector<std::vector<std::string>>& hyps, const std::vector<std::vector<std::string>>& refs);

struct EarlyStopOutcome {
  int stop_at = 0;  // 1-based evaluation that triggers the stop; 0 when never
  int best_index = 0;
};
EarlyStopOutcome simulate_early_stop(const std::vector<double>& values, int patience, double min_delta);

std::map<std::string, std::vector<std::pair<std::string, std::int64_t>>> oracle_word_counts(
    const std::vector<std::string>& texts, const std::vector<std::string>& labels, std::size_t k);

// Code points of every emoji-like character in the text, sorted.
std::vector<char32_t> emoji_multiset(const std::string& text);

// ---------------------------------------------------------------------------
// Transports

// Wraps another transport and records the peak number of concurrent exchanges.
class CountingTransport : public backend::Transport {
 public:
  CountingTransport(std::shared_ptr<backend::Transport> inner, std::chrono::milliseconds hold)
      : inner_(std::move(inner)), hold_(hold) {}
  backend::WireResponse post(const std::string& path, const backend::Json& body) override;
  backend::WireResponse get(const std::string& path) override;
  int peak() const { return peak_.load(); }
  int calls() const { return calls_.load(); }

 private:
  template <class F>
  backend::WireResponse counted(F&& f);
  std::shared_ptr<backend::Transport> inner_;
  std::chrono::milliseconds hold_;
  std::atomic<int> current_{0};
  std::atomic<int> peak_{0};
  std::atomic<int> calls_{0};
};

// Replies from a script of canned responses, then falls through to an inner transport.
class ScriptedTransport : public backend::Transport {
 public:
  using Step = std::function<backend::WireResponse(const std::string& path, const backend::Json* body)>;
  explicit ScriptedTransport(std::shared_ptr<backend::Transport> inner) : inner_(std::move(inner)) {}
  void push(Step step);
  backend::WireResponse post(const std::string& path, const backend::Json& body) override;
  backend::WireResponse get(const std::string& path) override;
  int calls() const { return calls_.load(); }

 private:
  std::mutex mutex_;
  std::vector<Step> script_;
  std::shared_ptr<backend::Transport> inner_;
  std::atomic<int> calls_{0};
};

// A real HTTP server on localhost that forwards /v1/* to a transport (usually a MockService),
// with hooks to delay or fail requests.
class FakeHttpServer {
 public:
  explicit FakeHttpServer(std::shared_ptr<backend::Transport> handler);
  ~FakeHttpServer();
  std::string url() const;
  void set_delay(std::chrono::milliseconds d) { delay_ms_ = static_cast<int>(d.count()); }
  // The next n requests get this HTTP status with an error body of the given kind.
  void fail_next(int n, int status, BackendErrorKind kind);
  // The next n requests get a 200 with a body that is not JSON.
  void garble_next(int n) { garble_ = n; }
  int requests() const { return requests_.load(); }
  std::vector<std::string> paths() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<int> delay_ms_{0};
  std::atomic<int> fail_count_{0};
  std::atomic<int> fail_status_{500};
  std::atomic<int> fail_kind_{0};
  std::atomic<int> garble_{0};
  std::atomic<int> requests_{0};
};

// A port on localhost that refuses connections.
std::string unreachable_url();

}  // namespace locmt::testing
