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

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

// Text cleaning steps for the translation side (steps 1-6) and the classification side
// (steps 1-9). Every step is idempotent. Token-removal steps re-join the surviving tokens
// with single spaces.
namespace locmt::textprep {

enum class StepId {
  collapse_whitespace,
  strip_encoding_artifacts,
  strip_urls,
  lowercase,
  strip_diacritics,
  normalize_hamza,
  strip_mentions,
  strip_specials_numbers,
  remove_stopwords,
};

inline constexpr StepId kAllSteps[] = {
    StepId::collapse_whitespace, StepId::strip_encoding_artifacts, StepId::strip_urls,
    StepId::lowercase,           StepId::strip_diacritics,         StepId::normalize_hamza,
    StepId::strip_mentions,      StepId::strip_specials_numbers,   StepId::remove_stopwords,
};

std::string to_string(StepId id);
StepId parse_step_id(std::string_view s);

struct StepSpec {
  StepId id;
  std::map<std::string, std::string> params;

  friend bool operator==(const StepSpec&, const StepSpec&) = default;
};

struct PipelineSpec {
  std::string name;
  std::vector<StepSpec> steps;

  friend bool operator==(const PipelineSpec&, const PipelineSpec&) = default;
};

enum class DiacriticSet {
  // U+064B-U+065F, U+0670, U+0610-U+061A, U+06D6-U+06ED
  full,
  // U+064B-U+0652 only
  harakat,
};

bool is_diacritic(char32_t c, DiacriticSet set = DiacriticSet::full);

std::string collapse_whitespace(std::string_view text);
std::string strip_encoding_artifacts(std::string_view text);
std::string strip_urls(std::string_view text);
std::string lowercase(std::string_view text);
std::string strip_diacritics(std::string_view text, DiacriticSet set = DiacriticSet::full);
// U+0622, U+0623, U+0625 -> U+0627. With `waw_yeh`, also U+0624 -> U+0648 and U+0626 -> U+064A.
std::string normalize_hamza(std::string_view text, bool waw_yeh = false);
std::string strip_mentions(std::string_view text);
std::string strip_specials_numbers(std::string_view text);

using StopwordSet = std::unordered_set<std::string>;
// Entries are normalized (lowercase, diacritics, hamza) the same way text is before step 9.
StopwordSet load_stopwords(const std::filesystem::path& path);
// `lang` is fr, es, ar, or `all` for the union of the shipped lists.
StopwordSet default_stopwords(std::string_view lang);
std::string remove_stopwords(std::string_view text, const StopwordSet& stopwords);

// A pipeline with its parameters validated and stopword lists loaded once.
class Pipeline {
 public:
  explicit Pipeline(PipelineSpec spec);
  ~Pipeline();
  Pipeline(Pipeline&&) noexcept;
  Pipeline& operator=(Pipeline&&) noexcept;

  const PipelineSpec& spec() const { return spec_; }
  std::string apply(std::string_view text) const;

 private:
  struct Step;
  PipelineSpec spec_;
  std::vector<std::unique_ptr<Step>> steps_;
};

std::string apply_step(const StepSpec& step, std::string_view text);
std::string apply_pipeline(const PipelineSpec& spec, std::string_view text);

// Batch application: OpenMP across texts. `serial::apply_pipeline_batch` is the reference.
std::vector<std::string> apply_pipeline_batch(const Pipeline& pipeline, std::span<const std::string> texts);
namespace serial {
std::vector<std::string> apply_pipeline_batch(const Pipeline& pipeline, std::span<const std::string> texts);
}

std::string to_yaml(const PipelineSpec& spec);
PipelineSpec pipeline_from_yaml(std::string_view yaml);
PipelineSpec load_pipeline(const std::filesystem::path& path);
// `nmt-clean`, `osb-clean`, or any preset file under <data>/presets; otherwise a file path.
PipelineSpec resolve_pipeline(std::string_view preset_or_path);
PipelineSpec preset(std::string_view name);
// Points every remove_stopwords step at the list for `lang` (language code, e.g. `fr`).
PipelineSpec with_language(PipelineSpec spec, std::string_view lang);

}  // namespace locmt::textprep
