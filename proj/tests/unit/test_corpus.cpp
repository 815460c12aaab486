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

#include <doctest.h>

#include <algorithm>
#include <json.hpp>
#include <set>

#include "locmt/corpus.hpp"
#include "locmt/error.hpp"
#include "locmt/util.hpp"
#include "support.hpp"

using namespace locmt;
using namespace locmt::corpus;
namespace t = locmt::testing;

namespace {

// Labeled JSONL with the given label counts, in a shuffled order.
void write_labeled(const std::filesystem::path& path, const std::string& task, const std::vector<std::pair<std::string, int>>& counts,
                   const std::string& lang, std::uint64_t seed = 3) {
  std::vector<std::string> labels;
  for (const auto& [l, n] : counts) labels.insert(labels.end(), n, l);
  t::Rng rng(seed);
  std::shuffle(labels.begin(), labels.end(), rng);
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    nlohmann::json j{{"id", "r" + std::to_string(i)}, {"text", t::random_plain_text(rng)}, {"lang", lang}, {"task", task},
                     {"label", labels[i]}};
    out += j.dump() + "\n";
  }
  t::write_text(path, out);
}

std::set<std::string> id_set(const Corpus& c) {
  const auto ids = c.ids();
  return {ids.begin(), ids.end()};
}

}  // namespace

TEST_CASE("lang tags") {
  CHECK(LangTag::parse("ar-lev").dialect == "lev");
  CHECK(LangTag::parse("fr").str() == "fr");
  CHECK(LangTag::parse("ar-glf").str() == "ar-glf");
  CHECK_THROWS_AS(LangTag::parse("FR"), ValidationError);
  CHECK_THROWS_AS(LangTag::parse("fr-lev"), ValidationError);
  CHECK_THROWS_AS(LangTag::parse("ar-egy"), ValidationError);
  CHECK_THROWS_AS(LangTag::parse("fra"), ValidationError);
}

TEST_CASE("labels are checked against the task") {
  CHECK(label_legal_for(Task::sentiment, Label::positive));
  CHECK_FALSE(label_legal_for(Task::sentiment, Label::hate));
  CHECK(task_class_names(Task::hate) == std::vector<std::string>{"hate", "no_hate"});
  CHECK_FALSE(try_parse_label("neutral"));
}

TEST_CASE("L-HSAB shaped file counts") {
  t::TempDir dir;
  write_labeled(dir / "lhsab.jsonl", "hate", {{"hate", 2196}, {"no_hate", 3650}}, "ar-lev");
  const auto c = load_corpus(dir / "lhsab.jsonl", CorpusKind::labeled);
  CHECK(c.size() == 5846);
  CHECK(c.manifest.counts.at("hate") == 2196);
  CHECK(c.manifest.counts.at("no_hate") == 3650);
  CHECK(c.manifest.counts.at("total") == 5846);
}

TEST_CASE("ArSentD-Lev shaped file keeps only binary labels") {
  t::TempDir dir;
  write_labeled(dir / "arsentd.jsonl", "sentiment", {{"positive", 1232}, {"negative", 1884}, {"neutral", 884}}, "ar-lev");
  const auto c = load_corpus(dir / "arsentd.jsonl");
  CHECK(c.manifest.counts.at("positive") == 1232);
  CHECK(c.manifest.counts.at("negative") == 1884);
  CHECK(c.manifest.dropped == 884);
  CHECK(corpus_stats(c).counts == c.manifest.counts);
}

TEST_CASE("OCLAR and Spanish hate shaped files") {
  t::TempDir dir;
  write_labeled(dir / "oclar.jsonl", "sentiment", {{"positive", 3465}, {"negative", 451}}, "ar-lev");
  const auto oclar = load_corpus(dir / "oclar.jsonl");
  CHECK(oclar.manifest.counts.at("positive") == 3465);
  CHECK(oclar.manifest.counts.at("negative") == 451);

  write_labeled(dir / "es.jsonl", "hate", {{"hate", 4239}, {"no_hate", 12423 - 4239}}, "es");
  const auto es = load_corpus(dir / "es.jsonl");
  CHECK(es.manifest.counts.at("total") == 12423);
  CHECK(es.manifest.counts.at("hate") == 4239);
}

TEST_CASE("load errors") {
  t::TempDir dir;
  t::write_text(dir / "empty.jsonl", "");
  CHECK_THROWS_WITH_AS(load_corpus(dir / "empty.jsonl", CorpusKind::labeled), doctest::Contains("empty corpus"), ValidationError);

  t::write_text(dir / "bad.jsonl",
                R"({"id":"a","text":"x","lang":"fr","task":"sentiment","label":"positive"})"
                "\n{not json\n");
  CHECK_THROWS_WITH_AS(load_corpus(dir / "bad.jsonl", CorpusKind::labeled), doctest::Contains("bad.jsonl:2"), ValidationError);

  t::write_text(dir / "dup.jsonl",
                R"({"id":"a","text":"x","lang":"fr","task":"sentiment","label":"positive"})"
                "\n"
                R"({"id":"a","text":"y","lang":"fr","task":"sentiment","label":"negative"})"
                "\n");
  CHECK_THROWS_WITH_AS(load_corpus(dir / "dup.jsonl", CorpusKind::labeled), doctest::Contains("duplicate id 'a'"), ValidationError);

  t::write_text(dir / "blank.jsonl", R"({"id":"a","text":"   ","lang":"fr","task":"sentiment","label":"positive"})" "\n");
  CHECK_THROWS_AS(load_corpus(dir / "blank.jsonl", CorpusKind::labeled), ValidationError);

  t::write_text(dir / "same.jsonl",
                R"({"pair_id":"p","src_text":"a","src_lang":"ar-lev","tgt_text":"b","tgt_lang":"ar-lev"})" "\n");
  CHECK_THROWS_AS(load_corpus(dir / "same.jsonl", CorpusKind::parallel), ValidationError);

  CHECK_THROWS_AS(load_corpus(dir / "missing.jsonl", CorpusKind::labeled), ValidationError);
}

TEST_CASE("toy parallel fixture") {
  const auto c = load_corpus(t::fixture_dir() / "toy/nmt.fr-ar-lev.jsonl");
  REQUIRE(c.kind() == CorpusKind::parallel);
  CHECK(c.size() == 10);
  CHECK(c.manifest.counts.at("total") == 10);
  CHECK(c.pairs()[0].pair_id == "p01");
  CHECK(c.pairs()[0].target.lang.str() == "ar-lev");
  CHECK(c.manifest.token_count > 0);
}

TEST_CASE("save/load round trip") {
  t::TempDir dir;
  const auto c = load_corpus(t::fixture_dir() / "toy/nmt.fr-ar-lev.jsonl");
  save_corpus(c, dir / "copy.jsonl");
  CHECK(std::filesystem::exists(dir / "copy.manifest"));
  const auto back = load_corpus(dir / "copy.jsonl");
  CHECK(back.pairs() == c.pairs());
  CHECK(back.manifest.counts == c.manifest.counts);

  // load∘save on the file level
  save_corpus(back, dir / "again.jsonl");
  CHECK(read_file(dir / "again.jsonl") == read_file(dir / "copy.jsonl"));

  const auto labeled = load_corpus(t::fixture_dir() / "toy/sentiment.fr.jsonl");
  save_corpus(labeled, dir / "s.jsonl");
  CHECK(load_corpus(dir / "s.jsonl").examples() == labeled.examples());
}

TEST_CASE("refuse to save an empty corpus") {
  t::TempDir dir;
  CHECK_THROWS_AS(save_corpus(make_labeled("none", {}), dir / "none.jsonl"), ValidationError);
}

TEST_CASE("manifest sidecar disagreeing with records is rejected") {
  t::TempDir dir;
  const auto labeled = load_corpus(t::fixture_dir() / "toy/sentiment.fr.jsonl");
  save_corpus(labeled, dir / "s.jsonl");
  auto m = manifest_from_json(read_file(dir / "s.manifest"));
  m.counts["positive"] += 1;
  write_file(dir / "s.manifest", manifest_to_json(m));
  CHECK_THROWS_WITH_AS(load_corpus(dir / "s.jsonl"), doctest::Contains("disagree"), ValidationError);
}

TEST_CASE("20,000 example corpus saves with total 20000") {
  t::TempDir dir;
  const auto c = t::labeled_corpus("big", Task::sentiment, {{Label::positive, 10000}, {Label::negative, 10000}}, "fr");
  save_corpus(c, dir / "big.jsonl");
  CHECK(manifest_from_json(read_file(dir / "big.manifest")).counts.at("total") == 20000);
}

TEST_CASE("split sizes from stated ratios") {
  CHECK(split_sizes(20000, {{"train", 0.8}, {"validation", 0.2}}) == std::vector<std::size_t>{16000, 4000});
  CHECK(split_sizes(12000, {{"train", 0.9}, {"test", 0.1}}) == std::vector<std::size_t>{10800, 1200});
  CHECK(split_sizes(10, {{"a", 1.0 / 3}, {"b", 1.0 / 3}, {"c", 1.0 / 3}}) == std::vector<std::size_t>{4, 3, 3});
  CHECK_THROWS_AS(split_sizes(10, {{"a", 0.5}, {"b", 0.4}}), ValidationError);
  CHECK_THROWS_AS(split_sizes(10, {{"a", 0.0}, {"b", 1.0}}), ValidationError);
}

TEST_CASE("split of 20,000 examples at 80/20") {
  const auto c = t::labeled_corpus("sf", Task::hate, {{Label::hate, 8000}, {Label::no_hate, 12000}}, "ar-lev");
  const auto parts = split_corpus(c, {{{"train", 0.8}, {"validation", 0.2}}, 42, false});
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].second.size() == 16000);
  CHECK(parts[1].second.size() == 4000);
  CHECK(parts[0].second.manifest.counts.at("hate") + parts[1].second.manifest.counts.at("hate") == 8000);
  CHECK(parts[0].second.name == "sf.train");
}

TEST_CASE("split of 12,000 pairs at 90/10") {
  std::vector<ParallelPair> pairs;
  for (int i = 0; i < 12000; ++i) {
    const auto id = "p" + std::to_string(i);
    pairs.push_back({id, {id + ":src", "texte", LangTag::parse("es"), {}}, {id + ":tgt", "نص", LangTag::parse("ar-glf"), {}}});
  }
  const auto parts = split_corpus(make_parallel("es-glf", std::move(pairs)), {{{"train", 0.9}, {"test", 0.1}}, 7, false});
  CHECK(parts[0].second.size() == 10800);
  CHECK(parts[1].second.size() == 1200);
}

TEST_CASE("split partition and determinism properties") {
  t::Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = t::uniform(rng, 3, 300);
    const std::size_t pos = t::uniform(rng, 0, n);
    const auto c = t::labeled_corpus("c" + std::to_string(trial), Task::sentiment,
                                     {{Label::positive, pos}, {Label::negative, n - pos}}, "fr", trial);
    const double a = 0.5 + 0.4 * std::uniform_real_distribution<double>(0, 1)(rng);
    SplitSpec spec{{{"train", a}, {"rest", 1.0 - a}}, rng(), t::coin(rng)};
    const auto parts = split_corpus(c, spec);

    std::set<std::string> all;
    std::size_t total = 0;
    for (const auto& [name, part] : parts) {
      total += part.size();
      for (const auto& id : part.ids()) CHECK(all.insert(id).second);  // disjoint
      CHECK(part.manifest.counts.at("total") == static_cast<std::int64_t>(part.size()));
    }
    CHECK(total == n);
    CHECK(all == id_set(c));
    // Within one item per class group of the exact ratio.
    const double exact = a * static_cast<double>(n);
    CHECK(std::abs(static_cast<double>(parts[0].second.size()) - exact) <= (spec.stratified ? 2.0 : 1.0));

    // Same seed, shuffled record order: identical assignment.
    auto ex = c.examples();
    std::shuffle(ex.begin(), ex.end(), rng);
    const auto again = split_corpus(make_labeled(c.name, ex), spec);
    CHECK(id_set(again[0].second) == id_set(parts[0].second));
  }
}

TEST_CASE("stratified split keeps class proportions") {
  const auto c = t::labeled_corpus("st", Task::hate, {{Label::hate, 100}, {Label::no_hate, 300}}, "es");
  const auto parts = split_corpus(c, {{{"train", 0.8}, {"validation", 0.2}}, 1, true});
  CHECK(parts[1].second.manifest.counts.at("hate") == 20);
  CHECK(parts[1].second.manifest.counts.at("no_hate") == 60);
}

TEST_CASE("split needs enough records") {
  const auto c = t::labeled_corpus("tiny", Task::hate, {{Label::hate, 1}}, "es");
  CHECK_THROWS_AS(split_corpus(c, {{{"a", 0.5}, {"b", 0.5}}, 1, false}), ValidationError);
}

TEST_CASE("different seeds give different splits") {
  const auto c = t::labeled_corpus("s", Task::sentiment, {{Label::positive, 50}, {Label::negative, 50}}, "fr");
  const auto a = split_corpus(c, {{{"train", 0.5}, {"test", 0.5}}, 1, false});
  const auto b = split_corpus(c, {{{"train", 0.5}, {"test", 0.5}}, 2, false});
  CHECK(id_set(a[0].second) != id_set(b[0].second));
}
