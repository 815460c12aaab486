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

#include "locmt/evalharness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "locmt/error.hpp"
#include "locmt/locrules.hpp"
#include "locmt/unicode.hpp"
#include "locmt/util.hpp"
#include "locmt/yamljson.hpp"

namespace locmt::evalharness {

namespace fs = std::filesystem;
using corpus::LangTag;

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::nmt_eval: return "nmt_eval";
    case ScenarioKind::localized_sentiment: return "localized_sentiment";
    case ScenarioKind::crossdialect_hate: return "crossdialect_hate";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view s) {
  if (s == "nmt" || s == "nmt_eval") return ScenarioKind::nmt_eval;
  if (s == "sentiment" || s == "localized_sentiment") return ScenarioKind::localized_sentiment;
  if (s == "hate" || s == "crossdialect_hate") return ScenarioKind::crossdialect_hate;
  throw ValidationError("unknown scenario kind '" + std::string(s) + "'");
}

namespace {

// Prefixes any failure with the stage it came from, keeping its category.
template <class F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(stage + ": " + e.what());
  } catch (const BackendError& e) {
    throw BackendError(e.kind(), stage + ": " + e.detail());
  }
}

backend::BackendConfig backend_from_node(const YAML::Node& node, const fs::path& base) {
  backend::BackendConfig cfg = node.IsScalar() ? backend::BackendConfig{node.as<std::string>()}
                                               : backend::backend_config_from_json(yaml_to_json(node));
  if (cfg.endpoint.rfind("mock:", 0) == 0) cfg.endpoint = "mock:" + resolve_path(base, cfg.endpoint.substr(5)).string();
  return cfg;
}

std::vector<std::string> required_inputs(ScenarioKind k) {
  if (k == ScenarioKind::nmt_eval) return {"test"};
  return {"source", "external"};
}

}  // namespace

void validate(const Scenario& s) {
  for (const auto& name : required_inputs(s.kind)) {
    if (!s.inputs.count(name)) throw ValidationError(to_string(s.kind) + " scenario needs input '" + name + "'");
  }
  backend::validate(s.backend);
  if (s.kind == ScenarioKind::localized_sentiment && s.models.size() != 1) {
    throw ValidationError("localized_sentiment scenario needs exactly one model");
  }
  if (s.kind == ScenarioKind::crossdialect_hate && s.models.size() != 2) {
    throw ValidationError("crossdialect_hate scenario needs exactly two models");
  }
  for (const auto& m : s.models) backend::validate(m.backend);
  if (s.split && s.test_split.empty()) throw ValidationError("scenario split given without test_split");
  if (s.top_k < 1) throw ValidationError("top_k must be >= 1");
  if (!(s.max_failure_rate >= 0.0 && s.max_failure_rate <= 1.0)) throw ValidationError("max_failure_rate must be in [0,1]");
}

Scenario scenario_from_yaml(std::string_view yaml, const fs::path& base_dir) {
  const YAML::Node root = parse_yaml(yaml, "scenario config");
  if (!root.IsMap()) throw ValidationError("scenario config must be a mapping");
  Scenario s;
  try {
    if (!root["kind"]) throw ValidationError("scenario config has no kind");
    s.kind = parse_scenario_kind(root["kind"].as<std::string>());
    if (root["name"]) s.name = root["name"].as<std::string>();
    if (root["seed"]) s.seed = root["seed"].as<std::uint64_t>();
    for (const auto& kv : root["inputs"]) s.inputs[kv.first.as<std::string>()] = resolve_path(base_dir, kv.second.as<std::string>());
    if (!root["backend"]) throw ValidationError("scenario config has no backend");
    s.backend = backend_from_node(root["backend"], base_dir);
    for (const auto& m : root["models"]) {
      ModelSpec spec{LangTag::parse(m["target"].as<std::string>()), s.backend};
      if (m["backend"]) spec.backend = backend_from_node(m["backend"], base_dir);
      s.models.push_back(std::move(spec));
    }
    if (root["target"] && s.models.empty()) s.models.push_back({LangTag::parse(root["target"].as<std::string>()), s.backend});
    if (const auto split = root["split"]) {
      corpus::SplitSpec spec;
      for (const auto& kv : split) spec.ratios.emplace_back(kv.first.as<std::string>(), kv.second.as<double>());
      spec.seed = s.seed;
      s.split = spec;
    }
    if (root["test_split"]) s.test_split = root["test_split"].as<std::string>();
    YAML::Node training = root["training"] ? YAML::Clone(root["training"]) : YAML::Node(YAML::NodeType::Map);
    training["task"] = s.kind == ScenarioKind::crossdialect_hate ? "hate" : "sentiment";
    if (!training["pipeline"]) training["pipeline"] = "osb-clean";
    if (!training["name"]) training["name"] = s.name;
    s.training = trainctl::experiment_config_from_yaml(YAML::Dump(training), base_dir);
    if (root["top_k"]) s.top_k = root["top_k"].as<std::size_t>();
    if (root["max_failure_rate"]) s.max_failure_rate = root["max_failure_rate"].as<double>();
    if (root["output_dir"]) s.output_dir = resolve_path(base_dir, root["output_dir"].as<std::string>());
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("scenario config: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario config: ") + e.what());
  }
  s.training.seed = s.training.split.seed = s.seed;
  // Environment beats the file; a command-line flag, applied by the caller, beats both.
  s.backend = backend::with_env_override(s.backend);
  for (auto& m : s.models) m.backend = backend::with_env_override(m.backend);
  return s;
}

Scenario load_scenario(const fs::path& path) {
  return scenario_from_yaml(read_file(path), fs::absolute(path).parent_path());
}

Json to_json(const Scenario& s) {
  Json inputs = Json::object();
  for (const auto& [k, v] : s.inputs) inputs[k] = v.string();
  Json models = Json::array();
  for (const auto& m : s.models) models.push_back({{"target", m.target.str()}, {"backend", backend::to_json(m.backend)}});
  Json j{{"kind", to_string(s.kind)},
         {"name", s.name},
         {"seed", s.seed},
         {"inputs", inputs},
         {"backend", backend::to_json(s.backend)},
         {"models", models},
         {"top_k", s.top_k},
         {"max_failure_rate", s.max_failure_rate}};
  if (s.kind != ScenarioKind::nmt_eval) j["training"] = trainctl::to_json(s.training);
  if (s.split) {
    Json ratios = Json::array();
    for (const auto& [name, r] : s.split->ratios) ratios.push_back({name, r});
    j["split"] = ratios;
    j["test_split"] = s.test_split;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Word frequencies and disagreements

std::map<std::string, WordCounts> word_frequencies(const std::vector<std::string>& texts, const std::vector<std::string>& labels,
                                                  const std::vector<std::string>& classes, std::size_t k,
                                                  const textprep::StopwordSet& stopwords) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (texts.size() != labels.size()) throw ValidationError("texts/labels length mismatch");
  std::map<std::string, std::unordered_map<std::string, std::int64_t>> counts;
  for (const auto& c : classes) counts[c];
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto it = counts.find(labels[i]);
    if (it == counts.end()) throw ValidationError("unknown label '" + labels[i] + "'");
    for (auto& tok : unicode::tokens_utf8(texts[i])) {
      if (!stopwords.count(tok)) ++it->second[tok];
    }
  }
  std::map<std::string, WordCounts> out;
  for (auto& [label, table] : counts) {
    WordCounts ranked(table.begin(), table.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    out[label] = std::move(ranked);
  }
  return out;
}

std::map<std::string, WordCounts> word_frequencies(const corpus::Corpus& labeled, std::size_t k,
                                                  const textprep::StopwordSet& stopwords) {
  const auto& examples = labeled.examples();
  std::vector<std::string> texts, labels;
  std::vector<std::string> classes;
  for (const auto& e : examples) {
    if (classes.empty()) classes = corpus::task_class_names(e.task);
    if (e.task != examples.front().task) throw ValidationError("corpus mixes tasks");
    texts.push_back(e.utterance.text);
    labels.push_back(corpus::to_string(e.label));
  }
  return word_frequencies(texts, labels, classes, k, stopwords);
}

std::vector<std::string> disagreement_set(const std::map<std::string, std::string>& a, const std::map<std::string, std::string>& b,
                                          const std::string& positive) {
  std::vector<std::string> out;
  for (const auto& [id, label] : a) {
    auto it = b.find(id);
    if (it == b.end()) continue;
    if ((label == positive) != (it->second == positive)) out.push_back(id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scenarios

namespace {

std::string scenario_hash(const Scenario& s) { return to_hex(fnv1a64(to_json(s).dump())); }

EvalReport new_report(const Scenario& s) {
  EvalReport r;
  r.kind = s.kind;
  r.name = s.name;
  r.config_hash = scenario_hash(s);
  r.seed = s.seed;
  return r;
}

std::string direction(const LangTag& src, const LangTag& tgt) { return src.str() + "->" + tgt.str(); }

locrules::BorrowLexicon lexicon_for(const LangTag& tgt) {
  return tgt.language == "ar" ? locrules::BorrowLexicon::shipped(tgt) : locrules::BorrowLexicon(tgt);
}

std::vector<std::string> localize_texts(const std::vector<std::string>& texts, const LangTag& src, const LangTag& tgt,
                                        backend::BackendClient& client, const locrules::BorrowLexicon& lexicon) {
  std::vector<std::string> out(texts.size());
  std::vector<std::exception_ptr> errors(texts.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::max<std::size_t>(1, std::min(texts.size(), client.config().max_in_flight));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < texts.size();) {
          try {
            out[i] = locrules::localize_text(texts[i], src, tgt, client, lexicon);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

corpus::Corpus load_labeled(const fs::path& path, corpus::Task task) {
  corpus::Corpus c = corpus::load_corpus(path, corpus::CorpusKind::labeled);
  for (const auto& e : c.examples()) {
    if (e.task != task) throw ValidationError("record " + e.utterance.id + " in " + path.string() + " is not a " + corpus::to_string(task) + " example");
  }
  return c;
}

LangTag single_language(const corpus::Corpus& c) {
  const LangTag lang = c.examples().front().utterance.lang;
  for (const auto& e : c.examples()) {
    if (e.utterance.lang != lang) throw ValidationError("corpus " + c.name + " mixes languages " + lang.str() + " and " + e.utterance.lang.str());
  }
  return lang;
}

void require_native(const corpus::Corpus& external, const LangTag& tgt) {
  for (const auto& e : external.examples()) {
    if (e.utterance.lang != tgt) {
      throw ValidationError("external corpus record " + e.utterance.id + " is tagged " + e.utterance.lang.str() +
                            "; the external corpus must be native " + tgt.str());
    }
  }
}

void throw_if_failed(const trainctl::RunManifest& m) {
  if (m.ok()) return;
  const std::string msg = "training " + m.error_stage + ": " + m.error_message;
  if (m.error_kind == "validation") throw ValidationError(msg);
  throw BackendError(backend_error_kind_from_string(m.error_kind.substr(m.error_kind.find(':') + 1)), msg);
}

struct External {
  corpus::Corpus corpus;
  std::vector<std::string> cleaned;
  std::vector<std::string> truth;
};

External prepare_external(const Scenario& s, corpus::Task task, const LangTag& native) {
  External ex{in_stage("load external corpus", [&] { return load_labeled(s.inputs.at("external"), task); }), {}, {}};
  in_stage("check external corpus", [&] { require_native(ex.corpus, native); });
  std::vector<std::string> raw;
  for (const auto& e : ex.corpus.examples()) {
    raw.push_back(e.utterance.text);
    ex.truth.push_back(corpus::to_string(e.label));
  }
  const textprep::Pipeline clean(textprep::with_language(textprep::preset("osb-clean"), native.language));
  ex.cleaned = in_stage("preprocess external corpus", [&] { return textprep::apply_pipeline_batch(clean, raw); });
  return ex;
}

ModelResult train_and_evaluate(const Scenario& s, const corpus::Corpus& source, const LangTag& src, const ModelSpec& model,
                               corpus::Task task, const External& external, backend::BackendClient& translator) {
  ModelResult r;
  r.target = model.target;
  r.name = direction(src, model.target);
  const std::string tag = model.target.str();

  const auto localized = in_stage("localize " + r.name, [&] {
    locrules::LocalizeCorpusOptions opts;
    opts.max_failure_rate = s.max_failure_rate;
    return locrules::localize_corpus(source, src, model.target, translator, lexicon_for(model.target), opts);
  });
  r.localized = localized.corpus.size();
  for (const auto& f : localized.failures) r.localization_failures.push_back(f.id);
  const fs::path localized_path = s.output_dir / "localized" / (source.name + "." + tag + ".jsonl");
  in_stage("save localized corpus", [&] { corpus::save_corpus(localized.corpus, localized_path); });

  backend::BackendClient client(model.backend);
  trainctl::ExperimentConfig cfg = s.training;
  cfg.name = s.name + "." + tag;
  cfg.task = task == corpus::Task::sentiment ? trainctl::ExperimentTask::sentiment : trainctl::ExperimentTask::hate;
  cfg.corpora = {{"localized", localized_path}};
  cfg.backend = model.backend;
  cfg.seed = cfg.split.seed = s.seed;
  cfg.pipeline = textprep::with_language(cfg.pipeline, model.target.language);
  cfg.output_dir = s.output_dir / ("train-" + tag);
  const auto manifest = trainctl::run_experiment(cfg, &client);
  throw_if_failed(manifest);
  r.model_id = manifest.chosen_model;
  r.manifest_path = (fs::path("train-" + tag) / trainctl::kManifestFile).string();

  const auto& examples = external.corpus.examples();
  backend::ClassifyRequest req;
  req.task = task;
  req.model_id = r.model_id;
  for (std::size_t i = 0; i < examples.size(); ++i) req.items.push_back({examples[i].utterance.id, external.cleaned[i]});
  const auto resp = in_stage("classify external corpus with " + r.name, [&] { return client.classify_batch(req); });
  std::vector<std::string> predicted;
  for (const auto& c : resp.items) {
    predicted.push_back(corpus::to_string(c.label));
    r.predictions[c.id] = predicted.back();
  }
  const auto classes = corpus::task_class_names(task);
  r.report = metrics::classification_report(external.truth, predicted, classes);
  r.top_words = word_frequencies(external.cleaned, predicted, classes, s.top_k, textprep::default_stopwords(model.target.language));
  return r;
}

}  // namespace

EvalReport run_nmt_eval(const Scenario& s) {
  validate(s);
  EvalReport report = new_report(s);
  corpus::Corpus test = in_stage("load test corpus", [&] { return corpus::load_corpus(s.inputs.at("test"), corpus::CorpusKind::parallel); });
  if (s.split) {
    test = in_stage("split test corpus", [&] {
      for (auto& [name, part] : corpus::split_corpus(test, *s.split)) {
        if (name == test.name + "." + s.test_split) return std::move(part);
      }
      throw ValidationError("split has no part named '" + s.test_split + "'");
    });
  }

  // One translation model per direction, scored separately.
  std::vector<std::pair<std::string, std::vector<const corpus::ParallelPair*>>> groups;
  for (const auto& p : test.pairs()) {
    const std::string d = direction(p.source.lang, p.target.lang);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == d; });
    if (it == groups.end()) it = groups.insert(groups.end(), {d, {}});
    it->second.push_back(&p);
  }

  backend::BackendClient client(s.backend);
  std::vector<metrics::TokenList> all_hyps, all_refs;
  for (const auto& [dir, pairs] : groups) {
    const LangTag src = pairs.front()->source.lang;
    const LangTag tgt = pairs.front()->target.lang;
    std::vector<std::string> sources, refs;
    for (const auto* p : pairs) {
      sources.push_back(p->source.text);
      refs.push_back(p->target.text);
    }
    const auto hyps = in_stage("translate " + dir, [&] { return localize_texts(sources, src, tgt, client, lexicon_for(tgt)); });
    std::string dump;
    for (std::size_t i = 0; i < pairs.size(); ++i) dump += pairs[i]->pair_id + "\t" + hyps[i] + "\n";
    write_file(s.output_dir / ("hypotheses." + src.str() + "-" + tgt.str() + ".tsv"), dump);

    auto h = metrics::tokenize_for_mt(hyps);
    auto r = metrics::tokenize_for_mt(refs);
    report.translation.push_back({dir, pairs.size(), metrics::score_translations(h, r)});
    all_hyps.insert(all_hyps.end(), std::make_move_iterator(h.begin()), std::make_move_iterator(h.end()));
    all_refs.insert(all_refs.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  }
  report.translation_overall = metrics::score_translations(all_hyps, all_refs);
  report.notes.push_back("Hypotheses and references are tokenized on whitespace after the nmt-clean pipeline.");
  report.notes.push_back(std::string("Combined F is the harmonic mean of corpus BLEU and ROUGE-1 recall (") + metrics::kBleuVariant + ", " +
                         metrics::kRougeVariant + ").");
  return report;
}

EvalReport run_localized_sentiment(const Scenario& s) {
  validate(s);
  EvalReport report = new_report(s);
  const ModelSpec& model = s.models.front();
  const auto source = in_stage("load source corpus", [&] { return load_labeled(s.inputs.at("source"), corpus::Task::sentiment); });
  const LangTag src = in_stage("check source corpus", [&] { return single_language(source); });
  const External external = prepare_external(s, corpus::Task::sentiment, model.target);
  backend::BackendClient translator(s.backend);
  report.models.push_back(train_and_evaluate(s, source, src, model, corpus::Task::sentiment, external, translator));
  report.notes.push_back("The external corpus is native " + model.target.str() + " text and is never localized.");
  if (src.language == "fr") {
    report.notes.push_back("This setup is sometimes labeled French->Gulf; it is run as " + direction(src, model.target) +
                           " so that training and external evaluation share a dialect.");
  }
  return report;
}

EvalReport run_crossdialect_hate(const Scenario& s) {
  validate(s);
  EvalReport report = new_report(s);
  const auto source = in_stage("load source corpus", [&] { return load_labeled(s.inputs.at("source"), corpus::Task::hate); });
  const LangTag src = in_stage("check source corpus", [&] { return single_language(source); });
  // Both models face the same native corpus, whatever their own dialect.
  const LangTag native = in_stage("check external corpus", [&] {
    const auto c = load_labeled(s.inputs.at("external"), corpus::Task::hate);
    return single_language(c);
  });
  if (native.language != "ar") throw ValidationError("check external corpus: external corpus must be Arabic, got " + native.str());
  const External external = prepare_external(s, corpus::Task::hate, native);
  backend::BackendClient translator(s.backend);
  for (const auto& model : s.models) {
    report.models.push_back(train_and_evaluate(s, source, src, model, corpus::Task::hate, external, translator));
  }
  report.disagreements = disagreement_set(report.models[0].predictions, report.models[1].predictions, "hate");
  report.notes.push_back("Both models are evaluated on the same native " + native.str() + " corpus.");
  return report;
}

// ---------------------------------------------------------------------------
// Rendering

Json to_json(const EvalReport& r) {
  Json translation = Json::array();
  for (const auto& t : r.translation) {
    Json row = metrics::to_json(t.scores);
    row["direction"] = t.direction;
    row["pairs"] = t.pairs;
    translation.push_back(row);
  }
  Json models = Json::array();
  for (const auto& m : r.models) {
    Json words = Json::object();
    for (const auto& [label, list] : m.top_words) {
      Json arr = Json::array();
      for (const auto& [tok, n] : list) arr.push_back({tok, n});
      words[label] = arr;
    }
    models.push_back({{"name", m.name},
                      {"target", m.target.str()},
                      {"model_id", m.model_id},
                      {"run_manifest", m.manifest_path},
                      {"localized_records", m.localized},
                      {"localization_failures", m.localization_failures},
                      {"report", metrics::to_json(m.report)},
                      {"predictions", m.predictions},
                      {"top_words", words}});
  }
  Json j{{"scenario", {{"kind", to_string(r.kind)}, {"name", r.name}, {"config_hash", r.config_hash}, {"seed", r.seed}}},
         {"metric_variants", {{"bleu", metrics::kBleuVariant}, {"rouge", metrics::kRougeVariant}, {"combined_f", metrics::kCombinedVariant}}},
         {"translation", translation},
         {"models", models},
         {"notes", r.notes}};
  if (r.translation_overall) j["translation_overall"] = metrics::to_json(*r.translation_overall);
  if (r.kind == ScenarioKind::crossdialect_hate) j["disagreements"] = r.disagreements;
  return j;
}

std::string render_text(const EvalReport& r) {
  std::ostringstream os;
  char line[200];
  os << "scenario " << r.name << " (" << to_string(r.kind) << "), seed " << r.seed << ", config " << r.config_hash << "\n\n";
  if (!r.translation.empty()) {
    std::snprintf(line, sizeof line, "%-20s %7s %8s %8s %8s\n", "direction", "pairs", "BLEU", "ROUGE", "F");
    os << line;
    for (const auto& t : r.translation) {
      std::snprintf(line, sizeof line, "%-20s %7zu %8.1f %8.1f %8.1f\n", t.direction.c_str(), t.pairs, t.scores.bleu.value,
                    t.scores.rouge.value, t.scores.combined.value);
      os << line;
    }
    if (r.translation_overall && r.translation.size() > 1) {
      std::snprintf(line, sizeof line, "%-20s %7s %8.1f %8.1f %8.1f\n", "all", "", r.translation_overall->bleu.value,
                    r.translation_overall->rouge.value, r.translation_overall->combined.value);
      os << line;
    }
    os << "\n";
  }
  for (const auto& m : r.models) {
    os << "model " << m.name << " -> " << m.model_id << " (" << m.localized << " localized records";
    if (!m.localization_failures.empty()) os << ", " << m.localization_failures.size() << " failed";
    os << ")\n" << metrics::render_text(m.report);
    for (const auto& [label, list] : m.top_words) {
      os << "top words " << label << ":";
      for (std::size_t i = 0; i < list.size() && i < 10; ++i) os << " " << list[i].first << "(" << list[i].second << ")";
      os << "\n";
    }
    os << "\n";
  }
  if (r.kind == ScenarioKind::crossdialect_hate) {
    os << "disagreements (" << r.disagreements.size() << "):";
    for (const auto& id : r.disagreements) os << " " << id;
    os << "\n\n";
  }
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

EvalReport run_scenario(const Scenario& s) {
  EvalReport report;
  switch (s.kind) {
    case ScenarioKind::nmt_eval: report = run_nmt_eval(s); break;
    case ScenarioKind::localized_sentiment: report = run_localized_sentiment(s); break;
    case ScenarioKind::crossdialect_hate: report = run_crossdialect_hate(s); break;
  }
  write_file(s.output_dir / kReportJson, to_json(report).dump(2) + "\n");
  write_file(s.output_dir / kReportText, render_text(report));
  Json manifests = Json::array();
  for (const auto& m : report.models) manifests.push_back(m.manifest_path);
  const Json index{{"kind", "scenario_index"},
                   {"scenario", to_string(s.kind)},
                   {"name", s.name},
                   {"config_hash", report.config_hash},
                   {"seed", s.seed},
                   {"config", to_json(s)},
                   {"report", kReportJson},
                   {"report_text", kReportText},
                   {"run_manifests", manifests},
                   {"written_at", utc_timestamp()}};
  write_file(s.output_dir / kIndexFile, index.dump(2) + "\n");
  return report;
}

}  // namespace locmt::evalharness
