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

#include "locmt/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "locmt/backend.hpp"
#include "locmt/corpus.hpp"
#include "locmt/error.hpp"
#include "locmt/evalharness.hpp"
#include "locmt/locrules.hpp"
#include "locmt/metrics.hpp"
#include "locmt/textprep.hpp"
#include "locmt/trainctl.hpp"
#include "locmt/unicode.hpp"
#include "locmt/util.hpp"

namespace locmt::cli {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Global {
  std::string config;
  std::string backend;
  std::optional<std::uint64_t> seed;
  int verbose = 0;
  std::string output_dir;
  std::string format = "text";
};

struct Context {
  Global g;
  std::ostream& out;
  std::ostream& err;
  // Filled in by the command; echoed into the manifest.
  Json effective = Json::object();
  Json result = Json::object();
  fs::path manifest_dir = "locmt-out";

  void info(const std::string& msg) const {
    if (g.verbose) err << "locmt: " << msg << "\n";
  }
  bool json() const { return g.format == "json"; }
};

std::string ext_of(const fs::path& p) { return p.extension().string(); }

backend::BackendConfig effective_backend(const Context& ctx, backend::BackendConfig cfg = {}) {
  cfg = backend::with_env_override(cfg);
  if (!ctx.g.backend.empty()) cfg.endpoint = ctx.g.backend;
  if (cfg.endpoint.empty()) throw ValidationError("no backend: pass --backend or set " + std::string(backend::kEndpointEnvVar));
  backend::validate(cfg);
  return cfg;
}

fs::path output_dir_or(const Context& ctx, const fs::path& fallback) {
  return ctx.g.output_dir.empty() ? fallback : fs::path(ctx.g.output_dir);
}

void print_json(Context& ctx, const Json& j) { ctx.out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

struct PreprocessArgs {
  std::string input, output, pipeline, lang;
};

void cmd_preprocess(Context& ctx, const PreprocessArgs& a) {
  textprep::PipelineSpec spec = textprep::resolve_pipeline(a.pipeline);
  if (!a.lang.empty()) spec = textprep::with_language(spec, a.lang);
  const textprep::Pipeline pipeline(spec);
  ctx.effective = {{"input", a.input}, {"output", a.output}, {"pipeline", textprep::to_yaml(spec)}};
  ctx.manifest_dir = output_dir_or(ctx, "locmt-out");

  if (ext_of(a.input) == ".jsonl") {
    if (a.output.empty()) throw ValidationError("--output is required for a corpus input");
    corpus::Corpus c = corpus::load_corpus(a.input);
    std::size_t dropped = 0;
    if (c.kind() == corpus::CorpusKind::labeled) {
      std::vector<std::string> texts;
      for (const auto& e : c.examples()) texts.push_back(e.utterance.text);
      const auto cleaned = textprep::apply_pipeline_batch(pipeline, texts);
      std::vector<corpus::LabeledExample> kept;
      for (std::size_t i = 0; i < cleaned.size(); ++i) {
        if (trim(cleaned[i]).empty()) {
          ++dropped;
          continue;
        }
        kept.push_back(c.examples()[i]);
        kept.back().utterance.text = cleaned[i];
      }
      c = corpus::make_labeled(c.name, std::move(kept), c.manifest.dropped + static_cast<std::int64_t>(dropped));
    } else {
      std::vector<std::string> texts;
      for (const auto& p : c.pairs()) {
        texts.push_back(p.source.text);
        texts.push_back(p.target.text);
      }
      const auto cleaned = textprep::apply_pipeline_batch(pipeline, texts);
      std::vector<corpus::ParallelPair> kept;
      for (std::size_t i = 0; i < c.pairs().size(); ++i) {
        if (trim(cleaned[2 * i]).empty() || trim(cleaned[2 * i + 1]).empty()) {
          ++dropped;
          continue;
        }
        kept.push_back(c.pairs()[i]);
        kept.back().source.text = cleaned[2 * i];
        kept.back().target.text = cleaned[2 * i + 1];
      }
      c = corpus::make_parallel(c.name, std::move(kept));
    }
    corpus::save_corpus(c, a.output);
    ctx.result = {{"records", c.size()}, {"dropped_empty", dropped}};
    if (ctx.json()) print_json(ctx, ctx.result);
    else ctx.out << "wrote " << c.size() << " records to " << a.output << " (" << dropped << " empty after cleaning)\n";
    return;
  }

  const auto lines = read_lines(a.input);
  const auto cleaned = textprep::apply_pipeline_batch(pipeline, lines);
  std::string joined;
  for (const auto& l : cleaned) joined += l + "\n";
  if (a.output.empty()) ctx.out << joined;
  else write_file(a.output, joined);
  ctx.result = {{"lines", cleaned.size()}};
}

struct LocalizeArgs {
  std::string input, output, src, tgt;
  double max_failure_rate = 0.0;
  bool no_hashtags = false;
};

void cmd_localize(Context& ctx, const LocalizeArgs& a) {
  const corpus::LangTag src = corpus::LangTag::parse(a.src);
  const corpus::LangTag tgt = corpus::LangTag::parse(a.tgt);
  const auto cfg = effective_backend(ctx);
  ctx.effective = {{"input", a.input}, {"output", a.output}, {"src", src.str()}, {"tgt", tgt.str()},
                   {"max_failure_rate", a.max_failure_rate}, {"translate_hashtags", !a.no_hashtags},
                   {"backend", backend::to_json(cfg)}};
  ctx.manifest_dir = output_dir_or(ctx, "locmt-out");
  backend::BackendClient client(cfg);
  const auto lexicon = tgt.language == "ar" ? locrules::BorrowLexicon::shipped(tgt) : locrules::BorrowLexicon(tgt);
  locrules::LocalizeCorpusOptions opts;
  opts.max_failure_rate = a.max_failure_rate;
  opts.text.translate_hashtags = !a.no_hashtags;

  if (ext_of(a.input) == ".jsonl") {
    if (a.output.empty()) throw ValidationError("--output is required for a corpus input");
    const auto source = corpus::load_corpus(a.input, corpus::CorpusKind::labeled);
    const auto res = locrules::localize_corpus(source, src, tgt, client, lexicon, opts);
    corpus::save_corpus(res.corpus, a.output);
    Json failures = Json::array();
    for (const auto& f : res.failures) failures.push_back({{"id", f.id}, {"reason", f.reason}});
    ctx.result = {{"records", res.corpus.size()}, {"failures", failures}};
    if (ctx.json()) print_json(ctx, ctx.result);
    else ctx.out << "localized " << res.corpus.size() << " records " << src.str() << "->" << tgt.str() << " into " << a.output
                 << " (" << res.failures.size() << " failed)\n";
    return;
  }
  std::string joined;
  std::size_t n = 0;
  for (const auto& line : read_lines(a.input)) {
    joined += locrules::localize_text(line, src, tgt, client, lexicon, opts.text) + "\n";
    ++n;
  }
  if (a.output.empty()) ctx.out << joined;
  else write_file(a.output, joined);
  ctx.result = {{"lines", n}};
}

std::vector<std::pair<std::string, double>> parse_ratios(const std::string& text) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& part : split(text, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ValidationError("ratio '" + part + "' is not name=fraction");
    try {
      std::size_t used = 0;
      const std::string num = part.substr(eq + 1);
      const double v = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
      out.emplace_back(trim(part.substr(0, eq)), v);
    } catch (const std::logic_error&) {
      throw ValidationError("ratio '" + part + "' has no valid fraction");
    }
  }
  return out;
}

struct SplitArgs {
  std::string input, ratios = "train=0.8,validation=0.2";
  bool stratified = false;
};

void cmd_split(Context& ctx, const SplitArgs& a) {
  corpus::SplitSpec spec{parse_ratios(a.ratios), ctx.g.seed.value_or(42), a.stratified};
  const fs::path dir = output_dir_or(ctx, "locmt-out");
  ctx.manifest_dir = dir;
  Json ratios = Json::array();
  for (const auto& [name, r] : spec.ratios) ratios.push_back({name, r});
  ctx.effective = {{"input", a.input}, {"ratios", ratios}, {"seed", spec.seed}, {"stratified", spec.stratified}};
  const auto c = corpus::load_corpus(a.input);
  Json sizes = Json::object();
  for (const auto& [name, part] : corpus::split_corpus(c, spec)) {
    if (part.empty()) throw ValidationError("split " + name + " is empty");
    corpus::save_corpus(part, dir / (name + ".jsonl"));
    sizes[name] = part.size();
    if (!ctx.json()) ctx.out << name << "\t" << part.size() << "\n";
  }
  ctx.result = {{"sizes", sizes}};
  if (ctx.json()) print_json(ctx, ctx.result);
}

void cmd_stats(Context& ctx, const std::string& input) {
  ctx.effective = {{"input", input}};
  ctx.manifest_dir = output_dir_or(ctx, "locmt-out");
  const auto c = corpus::load_corpus(input);
  const Json m = Json::parse(corpus::manifest_to_json(c.manifest));
  ctx.result = m;
  if (ctx.json()) {
    print_json(ctx, m);
    return;
  }
  ctx.out << "name\t" << c.manifest.name << "\nkind\t" << corpus::to_string(c.manifest.kind) << "\n";
  for (const auto& [k, v] : c.manifest.counts) ctx.out << k << "\t" << v << "\n";
  char line[64];
  std::snprintf(line, sizeof line, "%.2f", c.manifest.mean_length);
  ctx.out << "tokens\t" << c.manifest.token_count << "\nmean_length\t" << line << "\ndropped\t" << c.manifest.dropped << "\n";
}

struct ScoreArgs {
  std::string task, hyp, ref, classes, variant;
};

std::vector<std::string> default_classes(const std::vector<std::string>& labels) {
  for (auto task : {corpus::Task::sentiment, corpus::Task::hate}) {
    const auto names = corpus::task_class_names(task);
    if (std::all_of(labels.begin(), labels.end(), [&](const auto& l) { return std::find(names.begin(), names.end(), l) != names.end(); })) {
      return names;
    }
  }
  throw ValidationError("labels are not sentiment or hate classes; pass --classes");
}

void cmd_score(Context& ctx, const ScoreArgs& a) {
  ctx.manifest_dir = output_dir_or(ctx, "locmt-out");
  const auto hyp = read_lines(a.hyp);
  const auto ref = read_lines(a.ref);
  ctx.effective = {{"task", a.task}, {"hyp", a.hyp}, {"ref", a.ref}, {"variant", a.variant}};
  if (a.task == "mt") {
    if (!a.variant.empty() && a.variant != "rouge1") throw ValidationError("unknown metric variant '" + a.variant + "' (supported: rouge1)");
    const auto scores = metrics::score_translations(metrics::tokenize_for_mt(hyp), metrics::tokenize_for_mt(ref));
    ctx.result = metrics::to_json(scores);
    if (ctx.json()) {
      print_json(ctx, ctx.result);
      return;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "BLEU %.1f\nROUGE-1 recall %.1f\ncombined F %.1f\n", scores.bleu.value, scores.rouge.value,
                  scores.combined.value);
    ctx.out << buf;
    return;
  }
  if (a.task != "classify") throw ValidationError("--task must be mt or classify");
  std::vector<std::string> h, r;
  for (const auto& l : hyp) h.push_back(trim(l));
  for (const auto& l : ref) r.push_back(trim(l));
  std::vector<std::string> labels = r;
  labels.insert(labels.end(), h.begin(), h.end());
  const auto classes = a.classes.empty() ? default_classes(labels) : split(a.classes, ',');
  const auto report = metrics::classification_report(r, h, classes);
  ctx.result = metrics::to_json(report);
  if (ctx.json()) print_json(ctx, ctx.result);
  else ctx.out << metrics::render_text(report);
}

int manifest_exit(const std::string& error_kind) {
  if (error_kind.empty()) return kExitOk;
  return error_kind == "validation" ? kExitValidation : kExitBackend;
}

int cmd_train(Context& ctx, const std::string& config) {
  auto cfg = trainctl::load_experiment_config(config);
  if (!ctx.g.backend.empty()) cfg.backend.endpoint = ctx.g.backend;
  if (ctx.g.seed) cfg.seed = cfg.split.seed = *ctx.g.seed;
  if (!ctx.g.output_dir.empty()) cfg.output_dir = ctx.g.output_dir;
  ctx.manifest_dir = cfg.output_dir;
  ctx.effective = trainctl::to_json(cfg);
  ctx.info("training " + cfg.name + " against " + cfg.backend.endpoint);
  const auto m = trainctl::run_experiment(cfg);
  ctx.result = {{"run_manifest", (cfg.output_dir / trainctl::kManifestFile).string()}, {"status", m.status}};
  if (ctx.json()) {
    print_json(ctx, trainctl::to_json(m));
  } else if (m.ok()) {
    ctx.out << "job " << m.job_id << ": " << m.history.size() << " evaluations, best #" << m.best_eval_index << ", model "
            << m.chosen_model << (m.stopped_early ? " (stopped early)" : "") << "\n";
  }
  if (!m.ok()) {
    ctx.err << "locmt: " << m.error_stage << " failed: " << m.error_message << "\n";
    ctx.result["error"] = m.error_message;
  }
  return manifest_exit(m.error_kind);
}

void cmd_scenario(Context& ctx, const std::string& kind, const std::string& config) {
  const fs::path path(config);
  auto s = evalharness::load_scenario(path);
  if (!kind.empty() && evalharness::parse_scenario_kind(kind) != s.kind) {
    throw ValidationError("--kind " + kind + " does not match the config's kind " + evalharness::to_string(s.kind));
  }
  if (!ctx.g.backend.empty()) {
    s.backend.endpoint = ctx.g.backend;
    for (auto& m : s.models) m.backend.endpoint = ctx.g.backend;
  }
  if (ctx.g.seed) s.seed = s.training.seed = s.training.split.seed = *ctx.g.seed;
  if (!ctx.g.output_dir.empty()) s.output_dir = ctx.g.output_dir;
  ctx.manifest_dir = s.output_dir;
  ctx.effective = evalharness::to_json(s);
  ctx.info("running " + evalharness::to_string(s.kind) + " scenario " + s.name);
  const auto report = evalharness::run_scenario(s);
  ctx.result = {{"report", (s.output_dir / evalharness::kReportJson).string()}};
  if (ctx.json()) print_json(ctx, evalharness::to_json(report));
  else ctx.out << evalharness::render_text(report);
}

void write_manifest(const Context& ctx, const std::string& command, const std::vector<std::string>& args, int code,
                    const std::string& error, const std::string& started) {
  Json m{{"kind", "command_manifest"},
         {"command", command},
         {"argv", args},
         {"effective_config", ctx.effective},
         {"config_hash", to_hex(fnv1a64(ctx.effective.dump()))},
         {"seed", ctx.g.seed ? Json(*ctx.g.seed) : Json(nullptr)},
         {"exit_code", code},
         {"result", ctx.result},
         {"started_at", started},
         {"finished_at", utc_timestamp()}};
  if (!error.empty()) m["error"] = error;
  const std::string name = command.empty() ? "manifest.json" : "manifest." + command + ".json";
  write_file(ctx.manifest_dir / name, m.dump(2) + "\n");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string started = utc_timestamp();
  Context ctx{{}, out, err};

  CLI::App app{"Content-localization MT toolkit: preprocessing, localization, splits, scoring, training and scenarios.", "locmt"};
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for every command");
  app.add_option("--config", ctx.g.config, "Configuration file (train, scenario)");
  app.add_option("--backend", ctx.g.backend, "Backend endpoint (http://host:port or mock:<file>); beats config and " +
                                                 std::string(backend::kEndpointEnvVar));
  app.add_option("--seed", ctx.g.seed, "Seed override");
  app.add_flag("-v,--verbose", ctx.g.verbose, "Log progress to stderr");
  app.add_option("--output-dir", ctx.g.output_dir, "Directory for outputs and the run manifest");
  app.add_option("--format", ctx.g.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  PreprocessArgs pre;
  auto* preprocess = app.add_subcommand("preprocess", "Apply a cleaning pipeline to a text file or JSONL corpus");
  preprocess->add_option("--in,--input", pre.input, "Input file (.jsonl corpus or plain lines)")->required();
  preprocess->add_option("--out,--output", pre.output, "Output file (stdout for plain lines when omitted)");
  preprocess->add_option("--pipeline", pre.pipeline, "Preset name or pipeline file")->required();
  preprocess->add_option("--lang", pre.lang, "Stopword language for remove_stopwords (fr, es, ar, all)");

  LocalizeArgs loc;
  auto* localize = app.add_subcommand("localize", "Localize a labeled corpus or plain lines through the backend");
  localize->add_option("--in,--input", loc.input, "Input file (.jsonl labeled corpus or plain lines)")->required();
  localize->add_option("--out,--output", loc.output, "Output file");
  localize->add_option("--src", loc.src, "Source language tag")->required();
  localize->add_option("--tgt", loc.tgt, "Target language tag, e.g. ar-lev")->required();
  localize->add_option("--max-failure-rate", loc.max_failure_rate, "Tolerated fraction of failed records")->check(CLI::Range(0.0, 1.0));
  localize->add_flag("--keep-hashtags", loc.no_hashtags, "Copy hashtags verbatim instead of translating them");

  SplitArgs sp;
  auto* split_cmd = app.add_subcommand("split", "Deterministic seeded split of a corpus");
  split_cmd->add_option("--input", sp.input, "Corpus file")->required();
  split_cmd->add_option("--ratios", sp.ratios, "name=fraction list, e.g. train=0.9,test=0.1");
  split_cmd->add_flag("--stratified", sp.stratified, "Split each class separately");

  std::string stats_input;
  auto* stats = app.add_subcommand("stats", "Counts and token statistics of a corpus");
  stats->add_option("--input", stats_input, "Corpus file")->required();

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "Score translations (BLEU, ROUGE-1, combined F) or classifications");
  score->add_option("--task", sc.task, "mt or classify")->required()->check(CLI::IsMember({"mt", "classify"}));
  score->add_option("--hyp", sc.hyp, "Hypotheses or predicted labels, one per line")->required();
  score->add_option("--ref", sc.ref, "References or true labels, one per line")->required();
  score->add_option("--classes", sc.classes, "Comma-separated class order (classify)");
  score->add_option("--variant", sc.variant, "ROUGE variant (rouge1)");

  std::string train_config;
  auto* train = app.add_subcommand("train", "Run a training experiment through the backend");
  train->add_option("--config", train_config, "Experiment config file");

  std::string scen_kind, scen_config;
  auto* scenario = app.add_subcommand("scenario", "End-to-end experiment scenarios");
  auto* scen_run = scenario->add_subcommand("run", "Run a scenario and write its reports");
  scen_run->add_option("--kind", scen_kind, "nmt, sentiment or hate")->check(CLI::IsMember({"nmt", "sentiment", "hate", "nmt_eval",
                                                                                            "localized_sentiment", "crossdialect_hate"}));
  scen_run->add_option("--config", scen_config, "Scenario config file");
  scenario->require_subcommand(1);
  app.require_subcommand(1);

  std::string command;
  auto usage = [&](const std::string& msg) {
    if (!msg.empty()) err << "locmt: " << msg << "\n";
    err << app.help();
    return kExitValidation;
  };

  if (args.size() <= 1) return usage("");
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config" || a == "--backend" || a == "--seed" || a == "--output-dir" || a == "--format") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    if (!app.get_subcommand_no_throw(a)) return usage("unknown subcommand '" + a + "'");
    break;
  }
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  }

  int code = kExitOk;
  std::string error;
  try {
    if (*preprocess) {
      command = "preprocess";
      cmd_preprocess(ctx, pre);
    } else if (*localize) {
      command = "localize";
      cmd_localize(ctx, loc);
    } else if (*split_cmd) {
      command = "split";
      cmd_split(ctx, sp);
    } else if (*stats) {
      command = "stats";
      cmd_stats(ctx, stats_input);
    } else if (*score) {
      command = "score";
      cmd_score(ctx, sc);
    } else if (*train) {
      command = "train";
      const std::string cfg = !train_config.empty() ? train_config : ctx.g.config;
      if (cfg.empty()) return usage("train needs --config");
      code = cmd_train(ctx, cfg);
      if (code != kExitOk) error = ctx.result.value("error", "");
    } else if (*scen_run) {
      command = "scenario";
      const std::string cfg = !scen_config.empty() ? scen_config : ctx.g.config;
      if (cfg.empty()) return usage("scenario run needs --config");
      cmd_scenario(ctx, scen_kind, cfg);
    }
  } catch (const ValidationError& e) {
    code = kExitValidation;
    error = e.what();
  } catch (const BackendError& e) {
    code = kExitBackend;
    error = std::string("backend ") + e.what();
  } catch (const std::exception& e) {
    code = kExitValidation;
    error = e.what();
  }
  if (!error.empty() && code != kExitOk && command != "train") err << "locmt: " << error << "\n";
  try {
    write_manifest(ctx, command, args, code, error, started);
  } catch (const std::exception& e) {
    err << "locmt: could not write manifest: " << e.what() << "\n";
    if (code == kExitOk) code = kExitValidation;
  }
  return code;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace locmt::cli
