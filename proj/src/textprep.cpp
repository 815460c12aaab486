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

#include "locmt/textprep.hpp"

#include <yaml-cpp/yaml.h>

#include <functional>

#include "locmt/error.hpp"
#include "locmt/unicode.hpp"
#include "locmt/util.hpp"

namespace locmt::textprep {

namespace {

struct StepName {
  StepId id;
  const char* name;
};

constexpr StepName kStepNames[] = {
    {StepId::collapse_whitespace, "collapse_whitespace"},
    {StepId::strip_encoding_artifacts, "strip_encoding_artifacts"},
    {StepId::strip_urls, "strip_urls"},
    {StepId::lowercase, "lowercase"},
    {StepId::strip_diacritics, "strip_diacritics"},
    {StepId::normalize_hamza, "normalize_hamza"},
    {StepId::strip_mentions, "strip_mentions"},
    {StepId::strip_specials_numbers, "strip_specials_numbers"},
    {StepId::remove_stopwords, "remove_stopwords"},
};

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("parameter " + key + " expects a boolean, got '" + v + "'");
}

void reject_unknown_params(const StepSpec& step, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : step.params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("step " + to_string(step.id) + " does not take parameter '" + key + "'");
  }
}

}  // namespace

std::string to_string(StepId id) {
  for (const auto& s : kStepNames) {
    if (s.id == id) return s.name;
  }
  return "unknown";
}

StepId parse_step_id(std::string_view s) {
  for (const auto& n : kStepNames) {
    if (s == n.name) return n.id;
  }
  throw ValidationError("unknown step id '" + std::string(s) + "'");
}

struct Pipeline::Step {
  std::function<std::string(std::string_view)> fn;
};

namespace {

std::function<std::string(std::string_view)> compile(const StepSpec& step) {
  switch (step.id) {
    case StepId::collapse_whitespace:
      reject_unknown_params(step, {});
      return [](std::string_view t) { return collapse_whitespace(t); };
    case StepId::strip_encoding_artifacts:
      reject_unknown_params(step, {});
      return [](std::string_view t) { return strip_encoding_artifacts(t); };
    case StepId::strip_urls:
      reject_unknown_params(step, {});
      return [](std::string_view t) { return strip_urls(t); };
    case StepId::lowercase:
      reject_unknown_params(step, {});
      return [](std::string_view t) { return lowercase(t); };
    case StepId::strip_diacritics: {
      reject_unknown_params(step, {"set"});
      DiacriticSet set = DiacriticSet::full;
      if (auto it = step.params.find("set"); it != step.params.end()) {
        if (it->second == "harakat") {
          set = DiacriticSet::harakat;
        } else if (it->second != "default") {
          throw ValidationError("unknown diacritic set '" + it->second + "'");
        }
      }
      return [set](std::string_view t) { return strip_diacritics(t, set); };
    }
    case StepId::normalize_hamza: {
      reject_unknown_params(step, {"waw_yeh"});
      bool waw_yeh = false;
      if (auto it = step.params.find("waw_yeh"); it != step.params.end()) waw_yeh = parse_bool("waw_yeh", it->second);
      return [waw_yeh](std::string_view t) { return normalize_hamza(t, waw_yeh); };
    }
    case StepId::strip_mentions:
      reject_unknown_params(step, {});
      return [](std::string_view t) { return strip_mentions(t); };
    case StepId::strip_specials_numbers:
      reject_unknown_params(step, {});
      return [](std::string_view t) { return strip_specials_numbers(t); };
    case StepId::remove_stopwords: {
      reject_unknown_params(step, {"lang", "path", "words"});
      auto words = std::make_shared<StopwordSet>();
      if (auto it = step.params.find("lang"); it != step.params.end()) words->merge(default_stopwords(it->second));
      if (auto it = step.params.find("path"); it != step.params.end()) words->merge(load_stopwords(it->second));
      if (auto it = step.params.find("words"); it != step.params.end()) {
        for (const auto& w : split(it->second, ',')) {
          if (auto t = trim(w); !t.empty()) words->insert(normalize_hamza(strip_diacritics(lowercase(t))));
        }
      }
      if (step.params.empty()) throw ValidationError("remove_stopwords needs one of lang, path, words");
      return [words](std::string_view t) { return remove_stopwords(t, *words); };
    }
  }
  throw ValidationError("unknown step");
}

}  // namespace

Pipeline::Pipeline(PipelineSpec spec) : spec_(std::move(spec)) {
  for (const auto& step : spec_.steps) steps_.push_back(std::make_unique<Step>(Step{compile(step)}));
}

Pipeline::~Pipeline() = default;
Pipeline::Pipeline(Pipeline&&) noexcept = default;
Pipeline& Pipeline::operator=(Pipeline&&) noexcept = default;

std::string Pipeline::apply(std::string_view text) const {
  if (!unicode::is_valid_utf8(text)) throw ValidationError("input is not valid UTF-8");
  std::string cur(text);
  for (const auto& step : steps_) cur = step->fn(cur);
  return cur;
}

std::string apply_step(const StepSpec& step, std::string_view text) {
  if (!unicode::is_valid_utf8(text)) throw ValidationError("input is not valid UTF-8");
  return compile(step)(text);
}

std::string apply_pipeline(const PipelineSpec& spec, std::string_view text) { return Pipeline(spec).apply(text); }

std::string to_yaml(const PipelineSpec& spec) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << spec.name;
  out << YAML::Key << "steps" << YAML::Value << YAML::BeginSeq;
  for (const auto& step : spec.steps) {
    out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << to_string(step.id);
    if (!step.params.empty()) {
      out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
      for (const auto& [k, v] : step.params) out << YAML::Key << k << YAML::Value << YAML::DoubleQuoted << v;
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

PipelineSpec pipeline_from_yaml(std::string_view yaml) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("pipeline document: ") + e.what());
  }
  if (!root.IsMap() || !root["steps"] || !root["steps"].IsSequence()) {
    throw ValidationError("pipeline document needs a 'steps' list");
  }
  PipelineSpec spec;
  if (root["name"]) spec.name = root["name"].as<std::string>();
  for (const auto& node : root["steps"]) {
    StepSpec step{};
    if (node.IsScalar()) {
      step.id = parse_step_id(node.as<std::string>());
    } else if (node.IsMap() && node["id"]) {
      step.id = parse_step_id(node["id"].as<std::string>());
      if (const auto params = node["params"]) {
        if (!params.IsMap()) throw ValidationError("step params must be a map");
        for (const auto& kv : params) step.params[kv.first.as<std::string>()] = kv.second.as<std::string>();
      }
    } else {
      throw ValidationError("each step is an id or a map with 'id'");
    }
    spec.steps.push_back(std::move(step));
  }
  // Compile once so bad parameters surface at load time.
  (void)Pipeline(spec);
  return spec;
}

PipelineSpec load_pipeline(const std::filesystem::path& path) { return pipeline_from_yaml(read_file(path)); }

PipelineSpec preset(std::string_view name) {
  const auto path = data_dir() / "presets" / (std::string(name) + ".pipeline.yaml");
  if (!std::filesystem::exists(path)) throw ValidationError("unknown pipeline preset '" + std::string(name) + "'");
  return load_pipeline(path);
}

PipelineSpec resolve_pipeline(std::string_view preset_or_path) {
  const auto as_preset = data_dir() / "presets" / (std::string(preset_or_path) + ".pipeline.yaml");
  if (std::filesystem::exists(as_preset)) return load_pipeline(as_preset);
  if (std::filesystem::exists(std::filesystem::path(preset_or_path))) return load_pipeline(preset_or_path);
  throw ValidationError("no pipeline preset or file named '" + std::string(preset_or_path) + "'");
}

PipelineSpec with_language(PipelineSpec spec, std::string_view lang) {
  for (auto& step : spec.steps) {
    if (step.id != StepId::remove_stopwords) continue;
    step.params.erase("path");
    step.params["lang"] = std::string(lang);
  }
  return spec;
}

}  // namespace locmt::textprep
