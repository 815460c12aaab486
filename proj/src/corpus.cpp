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

#include "locmt/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "locmt/error.hpp"
#include "locmt/textprep.hpp"
#include "locmt/unicode.hpp"
#include "locmt/util.hpp"

namespace locmt::corpus {

using nlohmann::json;

LangTag LangTag::parse(std::string_view tag) {
  const auto dash = tag.find('-');
  LangTag out;
  out.language = std::string(tag.substr(0, dash));
  if (dash != std::string_view::npos) out.dialect = std::string(tag.substr(dash + 1));
  const bool two_lower = out.language.size() == 2 && std::islower(static_cast<unsigned char>(out.language[0])) &&
                         std::islower(static_cast<unsigned char>(out.language[1]));
  if (!two_lower) throw ValidationError("language tag '" + std::string(tag) + "' is not a lowercase 2-letter code");
  if (out.dialect) {
    if (out.language != "ar") throw ValidationError("dialect only allowed for ar: '" + std::string(tag) + "'");
    if (*out.dialect != "lev" && *out.dialect != "glf") {
      throw ValidationError("unknown Arabic dialect '" + *out.dialect + "'");
    }
  }
  return out;
}

std::string LangTag::str() const { return dialect ? language + "-" + *dialect : language; }

std::string to_string(Task t) { return t == Task::sentiment ? "sentiment" : "hate"; }

std::string to_string(Label l) {
  switch (l) {
    case Label::positive: return "positive";
    case Label::negative: return "negative";
    case Label::hate: return "hate";
    case Label::no_hate: return "no_hate";
  }
  return "?";
}

Task parse_task(std::string_view s) {
  if (s == "sentiment") return Task::sentiment;
  if (s == "hate") return Task::hate;
  throw ValidationError("unknown task '" + std::string(s) + "'");
}

std::optional<Label> try_parse_label(std::string_view s) {
  if (s == "positive") return Label::positive;
  if (s == "negative") return Label::negative;
  if (s == "hate") return Label::hate;
  if (s == "no_hate") return Label::no_hate;
  return std::nullopt;
}

Label parse_label(std::string_view s) {
  if (auto l = try_parse_label(s)) return *l;
  throw ValidationError("unknown label '" + std::string(s) + "'");
}

bool label_legal_for(Task task, Label label) {
  if (task == Task::sentiment) return label == Label::positive || label == Label::negative;
  return label == Label::hate || label == Label::no_hate;
}

std::vector<Label> task_classes(Task task) {
  if (task == Task::sentiment) return {Label::positive, Label::negative};
  return {Label::hate, Label::no_hate};
}

std::vector<std::string> task_class_names(Task task) {
  std::vector<std::string> out;
  for (auto l : task_classes(task)) out.push_back(to_string(l));
  return out;
}

std::string to_string(CorpusKind k) { return k == CorpusKind::parallel ? "parallel" : "labeled"; }

CorpusKind parse_corpus_kind(std::string_view s) {
  if (s == "parallel") return CorpusKind::parallel;
  if (s == "labeled") return CorpusKind::labeled;
  throw ValidationError("unknown corpus kind '" + std::string(s) + "'");
}

CorpusKind Corpus::kind() const {
  return std::holds_alternative<std::vector<ParallelPair>>(records) ? CorpusKind::parallel : CorpusKind::labeled;
}

std::size_t Corpus::size() const {
  return std::visit([](const auto& v) { return v.size(); }, records);
}

const std::vector<ParallelPair>& Corpus::pairs() const {
  if (kind() != CorpusKind::parallel) throw ValidationError("corpus '" + name + "' is not parallel");
  return std::get<std::vector<ParallelPair>>(records);
}

const std::vector<LabeledExample>& Corpus::examples() const {
  if (kind() != CorpusKind::labeled) throw ValidationError("corpus '" + name + "' is not labeled");
  return std::get<std::vector<LabeledExample>>(records);
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(size());
  if (kind() == CorpusKind::parallel) {
    for (const auto& p : pairs()) out.push_back(p.pair_id);
  } else {
    for (const auto& e : examples()) out.push_back(e.utterance.id);
  }
  return out;
}

namespace {

bool blank(std::string_view text) {
  for (char32_t c : unicode::decode(text)) {
    if (!unicode::is_whitespace(c)) return false;
  }
  return true;
}

void check_utterance(const Utterance& u, const std::string& where) {
  if (!unicode::is_valid_utf8(u.text)) throw ValidationError(where + ": text is not valid UTF-8");
  if (blank(u.text)) throw ValidationError(where + ": empty text");
}

json record_to_json(const ParallelPair& p) {
  json j = {{"pair_id", p.pair_id},
            {"src_text", p.source.text},
            {"src_lang", p.source.lang.str()},
            {"tgt_text", p.target.text},
            {"tgt_lang", p.target.lang.str()}};
  if (p.source.source) j["source"] = *p.source.source;
  return j;
}

json record_to_json(const LabeledExample& e) {
  json j = {{"id", e.utterance.id},
            {"text", e.utterance.text},
            {"lang", e.utterance.lang.str()},
            {"task", to_string(e.task)},
            {"label", to_string(e.label)}};
  if (e.utterance.source) j["source"] = *e.utterance.source;
  return j;
}

std::string required_string(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) throw ValidationError(std::string("missing string field '") + field + "'");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ValidationError(std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

void validate(const Corpus& corpus) {
  std::set<std::string> seen;
  auto check_id = [&](const std::string& id) {
    if (id.empty()) throw ValidationError("empty record id in corpus '" + corpus.name + "'");
    if (!seen.insert(id).second) throw ValidationError("duplicate id '" + id + "' in corpus '" + corpus.name + "'");
  };
  if (corpus.kind() == CorpusKind::parallel) {
    for (const auto& p : corpus.pairs()) {
      check_id(p.pair_id);
      check_utterance(p.source, "pair " + p.pair_id + " source");
      check_utterance(p.target, "pair " + p.pair_id + " target");
      if (p.source.lang == p.target.lang) throw ValidationError("pair " + p.pair_id + ": source and target share a language tag");
    }
  } else {
    for (const auto& e : corpus.examples()) {
      check_id(e.utterance.id);
      check_utterance(e.utterance, "record " + e.utterance.id);
      if (!label_legal_for(e.task, e.label)) {
        throw ValidationError("record " + e.utterance.id + ": label " + to_string(e.label) + " not legal for task " + to_string(e.task));
      }
    }
  }
}

Corpus make_parallel(std::string name, std::vector<ParallelPair> pairs) {
  Corpus c;
  c.name = std::move(name);
  c.records = std::move(pairs);
  c.manifest = corpus_stats(c);
  return c;
}

Corpus make_labeled(std::string name, std::vector<LabeledExample> examples, std::int64_t dropped) {
  Corpus c;
  c.name = std::move(name);
  c.records = std::move(examples);
  c.manifest.dropped = dropped;
  c.manifest = corpus_stats(c);
  return c;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusKind kind) {
  const auto lines = read_lines(path);
  std::vector<ParallelPair> pairs;
  std::vector<LabeledExample> examples;
  std::int64_t dropped = 0;
  std::set<std::string> seen;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (trim(line).empty()) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(i + 1);
    try {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("not a JSON record (") + e.what() + ")");
      }
      if (!j.is_object()) throw ValidationError("record is not an object");
      std::string id;
      if (kind == CorpusKind::parallel) {
        ParallelPair p;
        p.pair_id = required_string(j, "pair_id");
        p.source = {p.pair_id + ":src", required_string(j, "src_text"), LangTag::parse(required_string(j, "src_lang")),
                    optional_string(j, "source")};
        p.target = {p.pair_id + ":tgt", required_string(j, "tgt_text"), LangTag::parse(required_string(j, "tgt_lang")),
                    optional_string(j, "source")};
        check_utterance(p.source, "source");
        check_utterance(p.target, "target");
        if (p.source.lang == p.target.lang) throw ValidationError("source and target share a language tag");
        id = p.pair_id;
        pairs.push_back(std::move(p));
      } else {
        LabeledExample e;
        e.utterance = {required_string(j, "id"), required_string(j, "text"), LangTag::parse(required_string(j, "lang")),
                       optional_string(j, "source")};
        check_utterance(e.utterance, "record");
        e.task = parse_task(required_string(j, "task"));
        const auto label = try_parse_label(required_string(j, "label"));
        id = e.utterance.id;
        if (!label || !label_legal_for(e.task, *label)) {
          // Other annotation classes (neutral, abusive, ...) are not part of the binary tasks.
          ++dropped;
          if (!seen.insert(id).second) throw ValidationError("duplicate id '" + id + "'");
          continue;
        }
        e.label = *label;
        examples.push_back(std::move(e));
      }
      if (id.empty()) throw ValidationError("empty id");
      if (!seen.insert(id).second) throw ValidationError("duplicate id '" + id + "'");
    } catch (const ValidationError& e) {
      throw ValidationError("malformed record at " + where + ": " + e.what());
    }
  }

  const std::string name = path.stem().string();
  Corpus c = kind == CorpusKind::parallel ? make_parallel(name, std::move(pairs))
                                          : make_labeled(name, std::move(examples), dropped);
  if (c.empty()) throw ValidationError("empty corpus: " + path.string());

  const auto sidecar = manifest_path_for(path);
  if (std::filesystem::exists(sidecar)) {
    const auto stored = manifest_from_json(read_file(sidecar));
    if (stored.counts != c.manifest.counts) {
      throw ValidationError("manifest " + sidecar.string() + " counts disagree with the records");
    }
    c.manifest.seed = stored.seed;
  }
  return c;
}

Corpus load_corpus(const std::filesystem::path& path) {
  for (const auto& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_object() && j.contains("pair_id")) return load_corpus(path, CorpusKind::parallel);
    return load_corpus(path, CorpusKind::labeled);
  }
  throw ValidationError("empty corpus: " + path.string());
}

std::filesystem::path manifest_path_for(const std::filesystem::path& corpus_path) {
  auto p = corpus_path;
  p.replace_filename(corpus_path.stem().string() + ".manifest");
  return p;
}

std::string manifest_to_json(const CorpusManifest& m) {
  json j = {{"name", m.name},
            {"kind", to_string(m.kind)},
            {"counts", m.counts},
            {"schema_version", m.schema_version},
            {"token_count", m.token_count},
            {"mean_length", m.mean_length},
            {"dropped", m.dropped}};
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  return j.dump(2) + "\n";
}

CorpusManifest manifest_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  CorpusManifest m;
  m.name = j.value("name", "");
  m.kind = parse_corpus_kind(j.value("kind", "labeled"));
  m.counts = j.value("counts", std::map<std::string, std::int64_t>{});
  m.schema_version = j.value("schema_version", 0);
  if (m.schema_version != kSchemaVersion) {
    throw ValidationError("unsupported manifest schema_version " + std::to_string(m.schema_version));
  }
  m.token_count = j.value("token_count", std::int64_t{0});
  m.mean_length = j.value("mean_length", 0.0);
  m.dropped = j.value("dropped", std::int64_t{0});
  if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::int64_t>();
  return m;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  if (corpus.empty()) throw ValidationError("refusing to write empty corpus '" + corpus.name + "'");
  validate(corpus);
  std::string out;
  std::visit(
      [&](const auto& recs) {
        for (const auto& r : recs) out += record_to_json(r).dump() + "\n";
      },
      corpus.records);
  write_file(path, out);
  CorpusManifest m = corpus_stats(corpus);
  m.name = path.stem().string();
  m.seed = corpus.manifest.seed;
  m.dropped = corpus.manifest.dropped;
  write_file(manifest_path_for(path), manifest_to_json(m));
}

CorpusManifest corpus_stats(const Corpus& corpus) {
  CorpusManifest m;
  m.name = corpus.name;
  m.kind = corpus.kind();
  m.seed = corpus.manifest.seed;
  m.dropped = corpus.manifest.dropped;
  m.counts["total"] = static_cast<std::int64_t>(corpus.size());

  // One compiled osb-clean pipeline per language seen.
  std::map<std::string, textprep::Pipeline> pipelines;
  const auto base = textprep::preset("osb-clean");
  auto count_tokens = [&](const Utterance& u) -> std::int64_t {
    auto it = pipelines.find(u.lang.language);
    if (it == pipelines.end()) {
      const bool shipped = u.lang.language == "fr" || u.lang.language == "es" || u.lang.language == "ar";
      it = pipelines.emplace(u.lang.language, textprep::Pipeline(textprep::with_language(base, shipped ? u.lang.language : "all"))).first;
    }
    return static_cast<std::int64_t>(unicode::tokens(unicode::decode(it->second.apply(u.text))).size());
  };

  std::int64_t utterances = 0;
  if (m.kind == CorpusKind::labeled) {
    for (const auto& e : corpus.examples()) {
      ++m.counts[to_string(e.label)];
      m.token_count += count_tokens(e.utterance);
      ++utterances;
    }
  } else {
    for (const auto& p : corpus.pairs()) {
      m.token_count += count_tokens(p.source) + count_tokens(p.target);
      utterances += 2;
    }
  }
  m.mean_length = utterances ? static_cast<double>(m.token_count) / static_cast<double>(utterances) : 0.0;
  return m;
}

}  // namespace locmt::corpus
