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
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace locmt::corpus {

inline constexpr int kSchemaVersion = 1;

// ISO-639-1 language plus an optional Arabic dialect (`lev`, `glf`).
// Serialized as `fr`, `ar`, `ar-lev`, `ar-glf`.
struct LangTag {
  std::string language;
  std::optional<std::string> dialect;

  static LangTag parse(std::string_view tag);
  std::string str() const;

  friend bool operator==(const LangTag&, const LangTag&) = default;
};

struct Utterance {
  std::string id;
  std::string text;
  LangTag lang;
  std::optional<std::string> source;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct ParallelPair {
  std::string pair_id;
  Utterance source;
  Utterance target;

  friend bool operator==(const ParallelPair&, const ParallelPair&) = default;
};

enum class Task { sentiment, hate };
enum class Label { positive, negative, hate, no_hate };

std::string to_string(Task t);
std::string to_string(Label l);
Task parse_task(std::string_view s);
Label parse_label(std::string_view s);
std::optional<Label> try_parse_label(std::string_view s);
bool label_legal_for(Task task, Label label);
// Class order used throughout reports: sentiment -> {positive, negative}, hate -> {hate, no_hate}.
std::vector<Label> task_classes(Task task);
std::vector<std::string> task_class_names(Task task);

struct LabeledExample {
  Utterance utterance;
  Task task;
  Label label;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

enum class CorpusKind { parallel, labeled };
std::string to_string(CorpusKind k);
CorpusKind parse_corpus_kind(std::string_view s);

struct CorpusManifest {
  std::string name;
  CorpusKind kind = CorpusKind::labeled;
  // Per-class counts for labeled corpora plus "total".
  std::map<std::string, std::int64_t> counts;
  int schema_version = kSchemaVersion;
  std::optional<std::int64_t> seed;
  std::int64_t token_count = 0;
  double mean_length = 0.0;
  std::int64_t dropped = 0;

  friend bool operator==(const CorpusManifest&, const CorpusManifest&) = default;
};

struct Corpus {
  std::string name;
  std::variant<std::vector<ParallelPair>, std::vector<LabeledExample>> records;
  CorpusManifest manifest;

  CorpusKind kind() const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  const std::vector<ParallelPair>& pairs() const;
  const std::vector<LabeledExample>& examples() const;
  std::vector<std::string> ids() const;
};

Corpus make_parallel(std::string name, std::vector<ParallelPair> pairs);
Corpus make_labeled(std::string name, std::vector<LabeledExample> examples, std::int64_t dropped = 0);

// Checks the record-level invariants (unique ids, non-empty text, legal tags and labels).
void validate(const Corpus& corpus);

// Newline-delimited JSON records. Records whose label is not legal for their task are dropped
// and counted in manifest.dropped.
Corpus load_corpus(const std::filesystem::path& path, CorpusKind kind);
// Detects the kind from the first record's fields.
Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

std::filesystem::path manifest_path_for(const std::filesystem::path& corpus_path);
std::string manifest_to_json(const CorpusManifest& m);
CorpusManifest manifest_from_json(std::string_view json);

// Class counts, whitespace token count after the osb-clean pipeline, mean tokens per utterance.
CorpusManifest corpus_stats(const Corpus& corpus);

struct SplitSpec {
  std::vector<std::pair<std::string, double>> ratios;
  std::uint64_t seed = 42;
  bool stratified = false;
};

// Sizes per split by largest remainder: each within one item of ratio * n, summing to n.
std::vector<std::size_t> split_sizes(std::size_t n, const std::vector<std::pair<std::string, double>>& ratios);

// Assignment ranks records by a seeded hash of their id, so it depends only on (seed, ids);
// each split keeps the input's relative record order.
std::vector<std::pair<std::string, Corpus>> split_corpus(const Corpus& corpus, const SplitSpec& spec);

}  // namespace locmt::corpus
