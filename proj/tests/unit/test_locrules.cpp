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

#include <set>

#include "locmt/backend.hpp"
#include "locmt/error.hpp"
#include "locmt/locrules.hpp"
#include "locmt/unicode.hpp"
#include "support.hpp"

using namespace locmt;
using namespace locmt::locrules;
using corpus::LangTag;
namespace t = locmt::testing;

namespace {

const LangTag kFr = LangTag::parse("fr");
const LangTag kLev = LangTag::parse("ar-lev");

std::vector<std::string> payloads(const Extraction& e) {
  std::vector<std::string> out;
  for (const auto& s : e.spans) out.push_back(s.payload);
  return out;
}

backend::BackendClient mock_client(std::string_view script, std::size_t max_in_flight = 4) {
  backend::BackendConfig cfg;
  cfg.endpoint = "mock:inline";
  cfg.max_in_flight = max_in_flight;
  return backend::BackendClient(cfg, backend::MockService::from_text(script));
}

std::vector<std::string> hashtags_in(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& tok : unicode::tokens_utf8(text)) {
    if (tok.size() > 1 && tok[0] == '#') out.push_back(tok);
  }
  return out;
}

}  // namespace

TEST_CASE("placeholders use private-use brackets") {
  CHECK(placeholder(0) == "\xEE\x80\x80" "0" "\xEE\x80\x81");
  CHECK(placeholder(12) == "\xEE\x80\x80" "12" "\xEE\x80\x81");
}

TEST_CASE("extract emoji and hashtag") {
  const auto e = extract_protected_spans("great day 😀 #Sunset");
  CHECK(e.templated == "great day " + placeholder(0) + " " + placeholder(1));
  REQUIRE(e.spans.size() == 2);
  CHECK(e.spans[0] == ProtectedSpan{SpanKind::emoji, 10, 11, "😀"});
  CHECK(e.spans[1] == ProtectedSpan{SpanKind::hashtag, 12, 19, "#Sunset"});
}

TEST_CASE("text without artifacts is unchanged") {
  const auto e = extract_protected_spans("no artifacts here");
  CHECK(e.templated == "no artifacts here");
  CHECK(e.spans.empty());
}

TEST_CASE("emoticon and borrowed token") {
  BorrowLexicon lex(kLev);
  lex.add("lol", "لول");
  const auto e = extract_protected_spans(":-) lol", lex);
  REQUIRE(e.spans.size() == 2);
  CHECK(e.spans[0].kind == SpanKind::emoticon);
  CHECK(e.spans[0].payload == ":-)");
  CHECK(e.spans[1].kind == SpanKind::borrowed);
  CHECK(e.spans[1].payload == "lol");
}

TEST_CASE("span kinds") {
  const auto e = extract_protected_spans("@marie look https://t.co/x 👨‍👩‍👧 🇱🇧 1️⃣ 👍🏽 #Fete_2024 www.a.b");
  std::vector<SpanKind> kinds;
  for (const auto& s : e.spans) kinds.push_back(s.kind);
  CHECK(kinds == std::vector<SpanKind>{SpanKind::mention, SpanKind::url, SpanKind::emoji, SpanKind::emoji, SpanKind::emoji,
                                       SpanKind::emoji, SpanKind::hashtag, SpanKind::url});
  CHECK(e.spans[2].payload == "👨‍👩‍👧");
  CHECK(e.spans[3].payload == "🇱🇧");
  CHECK(e.spans[5].payload == "👍🏽");
}

TEST_CASE("not every # or @ starts a span") {
  CHECK(extract_protected_spans("a#b c# # a@b.c").spans.empty());
  CHECK(extract_protected_spans("lollipop").spans.empty());
}

TEST_CASE("spans are sorted, disjoint and match the input") {
  t::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto text = t::random_mixed_text(rng);
    const auto e = extract_protected_spans(text, BorrowLexicon::shipped(kLev));
    const auto cps = unicode::decode(text);
    std::size_t last_end = 0;
    for (const auto& s : e.spans) {
      CHECK(s.start >= last_end);
      CHECK(s.end > s.start);
      CHECK(unicode::encode(cps.substr(s.start, s.end - s.start)) == s.payload);
      last_end = s.end;
    }
  }
}

TEST_CASE("reinsert round trip on random text") {
  t::Rng rng(17);
  const auto lex = BorrowLexicon::shipped(kLev);
  for (int i = 0; i < 300; ++i) {
    const auto text = t::random_mixed_text(rng);
    const auto e = extract_protected_spans(text, lex);
    CHECK(reinsert_spans(e.templated, e.spans, payloads(e)) == text);
  }
}

TEST_CASE("reserved characters in the input survive") {
  // U+E000 / U+E001 typed by a user, not produced by extraction
  const std::string text = "odd \xEE\x80\x80 input 3\xEE\x80\x81";
  const auto e = extract_protected_spans(text);
  CHECK(e.spans.size() == 2);
  CHECK(e.spans[0].kind == SpanKind::reserved);
  CHECK(reinsert_spans(e.templated, e.spans, payloads(e)) == text);
}

TEST_CASE("reinsert renderings in order") {
  const auto e = extract_protected_spans("😀 #غروب");
  CHECK(reinsert_spans(e.templated, e.spans, {"😀", "#غروب"}) == "😀 #غروب");
  CHECK(reinsert_spans("plain", {}, {}) == "plain");
}

TEST_CASE("reinsert errors") {
  const auto e = extract_protected_spans("a 😀 b 😂");
  CHECK_THROWS_AS(reinsert_spans(e.templated, e.spans, {"x"}), ValidationError);
  CHECK_THROWS_AS(reinsert_spans("a " + placeholder(0) + " " + placeholder(0), e.spans, payloads(e)), ValidationError);
  CHECK_THROWS_AS(reinsert_spans("a " + placeholder(0), e.spans, payloads(e)), ValidationError);
  CHECK_THROWS_AS(reinsert_spans("a " + placeholder(0) + placeholder(5), e.spans, payloads(e)), ValidationError);
  CHECK_THROWS_AS(reinsert_spans("a \xEE\x80\x80" "1", e.spans, payloads(e)), ValidationError);  // unclosed
}

TEST_CASE("transliteration is whole-token and case-insensitive") {
  const auto lex = BorrowLexicon::shipped(kLev);
  CHECK(transliterate_borrowed("lol", lex) == "لول");
  CHECK(transliterate_borrowed("LOL that movie", lex) == "لول that movie");
  CHECK(transliterate_borrowed("lollipop", lex) == "lollipop");
  CHECK(transliterate_borrowed("John à Paris", lex) == "جون à باريس");
}

TEST_CASE("transliteration agrees with a per-token oracle") {
  BorrowLexicon lex(kLev);
  lex.add("lol", "لول");
  lex.add("omg", "اوه ماي غاد");
  t::Rng rng(2);
  const std::vector<std::string> words = {"lol", "LoL", "OMG", "lolz", "xlol", "movie", "omg", "lo"};
  for (int i = 0; i < 200; ++i) {
    std::string text, expected;
    const std::size_t n = t::uniform(rng, 1, 6);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& w = t::pick(rng, words);
      std::string lower = w;
      for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      const std::string out = lower == "lol" ? "لول" : lower == "omg" ? "اوه ماي غاد" : w;
      text += (k ? " " : "") + w;
      expected += (k ? " " : "") + out;
    }
    CHECK(transliterate_borrowed(text, lex) == expected);
  }
}

TEST_CASE("lexicon invariants") {
  BorrowLexicon lex(kLev);
  lex.add("Lol", "لول");
  CHECK(lex.find(U"lol") != nullptr);
  CHECK_THROWS_AS(lex.add("LOL", "x"), ValidationError);
  CHECK_THROWS_AS(lex.add("new", ""), ValidationError);
  t::TempDir dir;
  t::write_text(dir / "l.tsv", "# comment\nyo\tيو\nbroken line\n");
  CHECK_THROWS_WITH_AS(BorrowLexicon::load(dir / "l.tsv", kLev), doctest::Contains("l.tsv:3"), ValidationError);
  CHECK(BorrowLexicon::shipped(kLev).find(U"john") != nullptr);
}

TEST_CASE("hashtag body segmentation") {
  CHECK(segment_hashtag_body("SunsetBeach_2024") == "Sunset Beach 2024");
  CHECK(segment_hashtag_body("HTMLParser") == "HTML Parser");
  CHECK(segment_hashtag_body("غروب_الشمس") == "غروب الشمس");
  CHECK(segment_hashtag_body("lundi") == "lundi");
}

TEST_CASE("localize_text through the mock dictionary") {
  auto client = mock_client("bonjour\tمرحبا\n");
  CHECK(localize_text("bonjour 😀", kFr, kLev, client, {}) == "مرحبا 😀");
  CHECK(localize_text("", kFr, kLev, client, {}) == "");
  CHECK(localize_text("👨‍👩‍👧", kFr, kLev, client, {}) == "👨‍👩‍👧");
}

TEST_CASE("localize_text translates hashtags and keeps their order") {
  auto client = mock_client("sunset\tغروب\nbeach\tشاطئ\nbonjour\tمرحبا\n");
  const auto out = localize_text("#SunsetBeach bonjour #Beach lol", kFr, kLev, client, BorrowLexicon::shipped(kLev));
  CHECK(out == "#غروب_شاطئ مرحبا #شاطئ لول");
  const auto kept = localize_text("#SunsetBeach bonjour", kFr, kLev, client, {}, {.translate_hashtags = false});
  CHECK(kept == "#SunsetBeach مرحبا");
}

TEST_CASE("localize_text keeps the emoji multiset") {
  auto client = mock_client("bonjour\tمرحبا\nami\tرفيقي\n");
  t::Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto text = t::random_mixed_text(rng);
    const auto out = localize_text(text, kFr, kLev, client, BorrowLexicon::shipped(kLev));
    CHECK_MESSAGE(t::emoji_multiset(out) == t::emoji_multiset(text), text);
  }
}

TEST_CASE("backend failures carry the pair") {
  auto client = mock_client("%pair\tes\tar-glf\n");
  CHECK_THROWS_WITH_AS(localize_text("bonjour", kFr, kLev, client, {}), doctest::Contains("fr->ar-lev"), BackendError);
}

TEST_CASE("localize_corpus keeps ids and labels") {
  const auto src = t::labeled_corpus("toy", corpus::Task::sentiment,
                                     {{corpus::Label::positive, 6}, {corpus::Label::negative, 4}}, "fr");
  auto client = mock_client("bonjour\tمرحبا\n");
  const auto out = localize_corpus(src, kFr, kLev, client, {});
  CHECK(out.failures.empty());
  REQUIRE(out.corpus.size() == 10);
  CHECK(out.corpus.name == "toy.ar-lev");
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(out.corpus.examples()[i].utterance.id == src.examples()[i].utterance.id);
    CHECK(out.corpus.examples()[i].label == src.examples()[i].label);
    CHECK(out.corpus.examples()[i].utterance.lang == kLev);
  }
}

TEST_CASE("localize_corpus failure threshold") {
  std::vector<corpus::LabeledExample> ex = {
      {{"a", "bonjour", kFr, {}}, corpus::Task::hate, corpus::Label::hate},
      {{"b", "poison pill", kFr, {}}, corpus::Task::hate, corpus::Label::no_hate},
      {{"c", "bonjour ami", kFr, {}}, corpus::Task::hate, corpus::Label::no_hate},
  };
  const auto src = corpus::make_labeled("t", ex);
  auto client = mock_client("%fail\tpoison\nbonjour\tمرحبا\n");
  CHECK_THROWS_WITH_AS(localize_corpus(src, kFr, kLev, client, {}), doctest::Contains("b"), BackendError);

  const auto tolerant = localize_corpus(src, kFr, kLev, client, {}, {.max_failure_rate = 0.5});
  CHECK(tolerant.corpus.size() == 2);
  REQUIRE(tolerant.failures.size() == 1);
  CHECK(tolerant.failures[0].id == "b");
}

TEST_CASE("localize_corpus rejects empty or wrong-language input") {
  auto client = mock_client("");
  CHECK_THROWS_WITH(localize_corpus(corpus::make_labeled("e", {}), kFr, kLev, client, {}), doctest::Contains("empty corpus"));
  const auto es = t::labeled_corpus("es", corpus::Task::hate, {{corpus::Label::hate, 2}}, "es");
  CHECK_THROWS_AS(localize_corpus(es, kFr, kLev, client, {}), ValidationError);
}

TEST_CASE("empty translations count as failures") {
  const auto src = t::labeled_corpus("toy", corpus::Task::sentiment, {{corpus::Label::positive, 3}}, "fr");
  auto client = mock_client("%empty\n");
  CHECK_THROWS_AS(localize_corpus(src, kFr, kLev, client, {}), BackendError);
}

TEST_CASE("localize_corpus respects the concurrency bound") {
  auto counting = std::make_shared<t::CountingTransport>(backend::MockService::from_text(""), std::chrono::milliseconds(5));
  backend::BackendConfig cfg;
  cfg.endpoint = "mock:inline";
  cfg.max_in_flight = 8;
  backend::BackendClient client(cfg, counting);
  const auto src = t::labeled_corpus("toy", corpus::Task::sentiment, {{corpus::Label::positive, 40}}, "fr");
  localize_corpus(src, kFr, kLev, client, {}, {.concurrency = 3});
  CHECK(counting->peak() <= 3);
  CHECK(counting->calls() == 40);
}
