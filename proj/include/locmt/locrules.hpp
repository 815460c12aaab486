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

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "locmt/corpus.hpp"

namespace locmt::backend {
class BackendClient;
}

// Mechanics of content localization: shield social-media artifacts from the translator,
// put them back in order, and transliterate code-borrowed tokens.
namespace locmt::locrules {

// Placeholders are U+E000, the decimal ordinal, U+E001. Both brackets are private-use code
// points; the model service treats each placeholder as one atomic symbol.
inline constexpr char32_t kPlaceholderOpen = 0xE000;
inline constexpr char32_t kPlaceholderClose = 0xE001;
std::string placeholder(std::size_t ordinal);

enum class SpanKind { emoji, emoticon, hashtag, mention, url, borrowed, reserved };
std::string to_string(SpanKind k);

struct ProtectedSpan {
  SpanKind kind;
  // Code-point offsets into the original text, [start, end).
  std::size_t start = 0;
  std::size_t end = 0;
  std::string payload;

  friend bool operator==(const ProtectedSpan&, const ProtectedSpan&) = default;
};

// Case-insensitive whole-token map from source tokens to target-script tokens.
class BorrowLexicon {
 public:
  BorrowLexicon() = default;
  explicit BorrowLexicon(corpus::LangTag target) : target_(std::move(target)) {}

  // Lines `source<TAB>target`; `#` at line start is a comment.
  static BorrowLexicon load(const std::filesystem::path& path, corpus::LangTag target);
  // Shipped slang table for the target plus the shared names table.
  static BorrowLexicon shipped(const corpus::LangTag& target);

  void add(std::string_view source, std::string_view target);
  void merge(const BorrowLexicon& other);

  const corpus::LangTag& target() const { return target_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::string* find(std::u32string_view lowered_source) const;
  // Longest entry that matches `text` at `pos` as a whole token; returns its length in code points.
  std::size_t match_at(std::u32string_view text, std::size_t pos, const std::string** value) const;

 private:
  corpus::LangTag target_{"ar", std::nullopt};
  std::map<std::u32string, std::string> entries_;
  std::vector<std::size_t> key_lengths_;  // descending, unique
};

struct Extraction {
  std::string templated;
  std::vector<ProtectedSpan> spans;
};

// Emoticons shipped as data (<data>/emoticons.txt).
const std::vector<std::u32string>& shipped_emoticons();

Extraction extract_protected_spans(std::string_view text, const BorrowLexicon& lexicon = {});

// Replaces placeholder k with renderings[k]. Every ordinal 0..n-1 must occur exactly once.
std::string reinsert_spans(std::string_view templated, const std::vector<ProtectedSpan>& spans,
                           const std::vector<std::string>& renderings);

std::string transliterate_borrowed(std::string_view text, const BorrowLexicon& lexicon);

// "SunsetBeach_2024" -> "Sunset Beach 2024"
std::string segment_hashtag_body(std::string_view body);

struct LocalizeOptions {
  bool translate_hashtags = true;
};

std::string localize_text(std::string_view text, const corpus::LangTag& src, const corpus::LangTag& tgt,
                          backend::BackendClient& backend, const BorrowLexicon& lexicon,
                          const LocalizeOptions& options = {});

struct LocalizeCorpusOptions {
  LocalizeOptions text;
  // Fraction of records allowed to fail before the whole run fails.
  double max_failure_rate = 0.0;
  // Upper bound on concurrently localized records; 0 uses the backend's max_in_flight.
  std::size_t concurrency = 0;
};

struct LocalizeFailure {
  std::string id;
  std::string reason;
};

struct LocalizedCorpus {
  corpus::Corpus corpus;
  std::vector<LocalizeFailure> failures;
};

// Records keep their ids, tasks and labels; failed records are left out and reported.
LocalizedCorpus localize_corpus(const corpus::Corpus& source, const corpus::LangTag& src, const corpus::LangTag& tgt,
                                backend::BackendClient& backend, const BorrowLexicon& lexicon,
                                const LocalizeCorpusOptions& options = {});

}  // namespace locmt::locrules
