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

#include "locmt/locrules.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <optional>
#include <thread>

#include <unicode/uchar.h>

#include "locmt/backend.hpp"
#include "locmt/error.hpp"
#include "locmt/unicode.hpp"
#include "locmt/util.hpp"

namespace locmt::locrules {

namespace u = locmt::unicode;
using corpus::LangTag;

std::string placeholder(std::size_t ordinal) {
  return u::encode(kPlaceholderOpen) + std::to_string(ordinal) + u::encode(kPlaceholderClose);
}

std::string to_string(SpanKind k) {
  switch (k) {
    case SpanKind::emoji: return "emoji";
    case SpanKind::emoticon: return "emoticon";
    case SpanKind::hashtag: return "hashtag";
    case SpanKind::mention: return "mention";
    case SpanKind::url: return "url";
    case SpanKind::borrowed: return "borrowed";
    case SpanKind::reserved: return "reserved";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// BorrowLexicon

BorrowLexicon BorrowLexicon::load(const std::filesystem::path& path, LangTag target) {
  BorrowLexicon lex(std::move(target));
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw ValidationError(path.string() + ":" + std::to_string(i + 1) + ": expected source<TAB>target");
    }
    try {
      lex.add(fields[0], fields[1]);
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return lex;
}

BorrowLexicon BorrowLexicon::shipped(const LangTag& target) {
  BorrowLexicon lex(target);
  const auto dir = data_dir() / "lexicons";
  const auto slang = dir / ("borrow." + target.str() + ".tsv");
  if (std::filesystem::exists(slang)) lex.merge(load(slang, target));
  const auto names = dir / ("names." + target.language + ".tsv");
  if (std::filesystem::exists(names)) lex.merge(load(names, target));
  return lex;
}

void BorrowLexicon::add(std::string_view source, std::string_view target) {
  const std::string key_trimmed = trim(source);
  const std::string value = trim(target);
  if (key_trimmed.empty()) throw ValidationError("empty lexicon key");
  if (value.empty()) throw ValidationError("empty lexicon value for '" + key_trimmed + "'");
  auto key = u::to_lower(u::decode(key_trimmed));
  if (!entries_.emplace(key, value).second) throw ValidationError("duplicate lexicon key '" + key_trimmed + "'");
  if (std::find(key_lengths_.begin(), key_lengths_.end(), key.size()) == key_lengths_.end()) {
    key_lengths_.push_back(key.size());
    std::sort(key_lengths_.rbegin(), key_lengths_.rend());
  }
}

void BorrowLexicon::merge(const BorrowLexicon& other) {
  for (const auto& [k, v] : other.entries_) add(u::encode(k), v);
}

const std::string* BorrowLexicon::find(std::u32string_view lowered_source) const {
  auto it = entries_.find(std::u32string(lowered_source));
  return it == entries_.end() ? nullptr : &it->second;
}

std::size_t BorrowLexicon::match_at(std::u32string_view text, std::size_t pos, const std::string** value) const {
  if (entries_.empty()) return 0;
  if (pos > 0 && u::is_word_char(text[pos - 1])) return 0;
  for (std::size_t len : key_lengths_) {
    if (pos + len > text.size()) continue;
    if (pos + len < text.size() && u::is_word_char(text[pos + len])) continue;
    if (const auto* v = find(u::to_lower(text.substr(pos, len)))) {
      *value = v;
      return len;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Detection

const std::vector<std::u32string>& shipped_emoticons() {
  static const std::vector<std::u32string> emoticons = [] {
    std::vector<std::u32string> out;
    for (const auto& line : read_lines(data_dir() / "emoticons.txt")) {
      if (line.empty() || line[0] == '#') continue;
      out.push_back(u::decode(trim(line)));
    }
    return out;
  }();
  return emoticons;
}

namespace {

bool starts_with_ci(std::u32string_view s, std::size_t pos, std::u32string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (u::to_lower(s[pos + i]) != prefix[i]) return false;
  }
  return true;
}

bool at_token_start(std::u32string_view s, std::size_t pos) { return pos == 0 || u::is_whitespace(s[pos - 1]); }

std::size_t until_whitespace(std::u32string_view s, std::size_t pos) {
  while (pos < s.size() && !u::is_whitespace(s[pos])) ++pos;
  return pos;
}

std::size_t match_url(std::u32string_view s, std::size_t pos) {
  const bool scheme = starts_with_ci(s, pos, U"http://") || starts_with_ci(s, pos, U"https://");
  const bool www = starts_with_ci(s, pos, U"www.") && (pos == 0 || !u::is_word_char(s[pos - 1]));
  if (!scheme && !www) return 0;
  return until_whitespace(s, pos) - pos;
}

std::size_t match_sigil(std::u32string_view s, std::size_t pos, char32_t sigil) {
  if (s[pos] != sigil) return 0;
  if (pos > 0 && u::is_word_char(s[pos - 1])) return 0;
  std::size_t j = pos + 1;
  while (j < s.size() && u::is_word_char(s[j])) ++j;
  return j > pos + 1 ? j - pos : 0;
}

// One emoji cluster: a base followed by modifiers, VS16/keycap, tags, and ZWJ-joined bases.
// Regional indicators pair up into flags.
std::size_t match_emoji(std::u32string_view s, std::size_t pos) {
  // keycaps: [0-9#*] FE0F? 20E3
  if ((s[pos] >= U'0' && s[pos] <= U'9') || s[pos] == U'#' || s[pos] == U'*') {
    std::size_t j = pos + 1;
    if (j < s.size() && s[j] == 0xFE0F) ++j;
    return j < s.size() && s[j] == 0x20E3 ? j + 1 - pos : 0;
  }
  if (!u::is_emoji_base(s[pos])) return 0;
  const bool regional = s[pos] >= 0x1F1E6 && s[pos] <= 0x1F1FF;
  std::size_t j = pos + 1;
  if (regional) {
    if (j < s.size() && s[j] >= 0x1F1E6 && s[j] <= 0x1F1FF) ++j;
    return j - pos;
  }
  while (j < s.size()) {
    const char32_t c = s[j];
    if (c == 0xFE0F || c == 0x20E3 || (c >= 0xE0020 && c <= 0xE007F) || (c >= 0x1F3FB && c <= 0x1F3FF)) {
      ++j;
    } else if (c == 0x200D && j + 1 < s.size() && u::is_emoji_base(s[j + 1])) {
      j += 2;
    } else {
      break;
    }
  }
  return j - pos;
}

std::size_t match_emoticon(std::u32string_view s, std::size_t pos) {
  if (!at_token_start(s, pos)) return 0;
  const std::size_t end = until_whitespace(s, pos);
  const auto token = s.substr(pos, end - pos);
  for (const auto& e : shipped_emoticons()) {
    if (token == e) return e.size();
  }
  return 0;
}

std::size_t match_reserved(std::u32string_view s, std::size_t pos) {
  std::size_t j = pos;
  while (j < s.size() && (s[j] == kPlaceholderOpen || s[j] == kPlaceholderClose)) ++j;
  return j - pos;
}

}  // namespace

Extraction extract_protected_spans(std::string_view text, const BorrowLexicon& lexicon) {
  const std::u32string s = u::decode(text);
  Extraction out;
  std::u32string templated;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t len = 0;
    SpanKind kind{};
    const std::string* borrowed = nullptr;
    if ((len = match_reserved(s, i))) {
      kind = SpanKind::reserved;
    } else if ((len = match_url(s, i))) {
      kind = SpanKind::url;
    } else if ((len = match_sigil(s, i, U'@'))) {
      kind = SpanKind::mention;
    } else if ((len = match_emoji(s, i))) {
      kind = SpanKind::emoji;
    } else if ((len = match_sigil(s, i, U'#'))) {
      kind = SpanKind::hashtag;
    } else if ((len = match_emoticon(s, i))) {
      kind = SpanKind::emoticon;
    } else if ((len = lexicon.match_at(s, i, &borrowed))) {
      kind = SpanKind::borrowed;
    }
    if (len == 0) {
      templated.push_back(s[i++]);
      continue;
    }
    const std::size_t ordinal = out.spans.size();
    out.spans.push_back({kind, i, i + len, u::encode(std::u32string_view(s).substr(i, len))});
    templated += u::decode(placeholder(ordinal));
    i += len;
  }
  out.templated = u::encode(templated);
  return out;
}

std::string reinsert_spans(std::string_view templated, const std::vector<ProtectedSpan>& spans,
                           const std::vector<std::string>& renderings) {
  if (renderings.size() != spans.size()) {
    throw ValidationError("got " + std::to_string(renderings.size()) + " renderings for " + std::to_string(spans.size()) + " spans");
  }
  const std::u32string s = u::decode(templated);
  std::u32string out;
  std::vector<bool> seen(spans.size(), false);
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != kPlaceholderOpen) {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t j = i + 1;
    std::size_t ordinal = 0;
    bool digits = false;
    while (j < s.size() && s[j] >= U'0' && s[j] <= U'9') {
      ordinal = ordinal * 10 + (s[j] - U'0');
      digits = true;
      ++j;
    }
    if (!digits || j >= s.size() || s[j] != kPlaceholderClose) throw ValidationError("malformed placeholder in template");
    if (ordinal >= spans.size()) throw ValidationError("placeholder " + std::to_string(ordinal) + " has no span");
    if (seen[ordinal]) throw ValidationError("duplicate placeholder " + std::to_string(ordinal));
    seen[ordinal] = true;
    out += u::decode(renderings[ordinal]);
    i = j + 1;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) throw ValidationError("missing placeholder " + std::to_string(k));
  }
  return u::encode(out);
}

std::string transliterate_borrowed(std::string_view text, const BorrowLexicon& lexicon) {
  const std::u32string s = u::decode(text);
  std::u32string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::string* value = nullptr;
    if (const std::size_t len = lexicon.match_at(s, i, &value)) {
      out += u::decode(*value);
      i += len;
    } else {
      out.push_back(s[i++]);
    }
  }
  return u::encode(out);
}

std::string segment_hashtag_body(std::string_view body) {
  const std::u32string s = u::decode(body);
  std::vector<std::u32string> words;
  std::u32string cur;
  auto flush = [&] {
    if (!cur.empty()) words.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t c = s[i];
    if (c == U'_') {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const char32_t prev = cur.back();
      const bool lower_to_upper = u_isULowercase(static_cast<UChar32>(prev)) && u_isUUppercase(static_cast<UChar32>(c));
      // "HTMLParser": split before the last capital of an uppercase run.
      const bool acronym_end = u_isUUppercase(static_cast<UChar32>(prev)) && u_isUUppercase(static_cast<UChar32>(c)) &&
                               i + 1 < s.size() && u_isULowercase(static_cast<UChar32>(s[i + 1]));
      const bool digit_edge = u::is_digit_or_number(prev) != u::is_digit_or_number(c);
      if (lower_to_upper || acronym_end || digit_edge) flush();
    }
    cur.push_back(c);
  }
  flush();
  return u::encode(u::join(words, U' '));
}

// ---------------------------------------------------------------------------
// Localization

namespace {

std::string render_hashtag(const std::string& payload, const std::string& translated) {
  const auto toks = u::tokens(u::decode(translated));
  if (toks.empty()) return payload;
  return "#" + u::encode(u::join(toks, U'_'));
}

bool only_placeholders_and_space(std::string_view templated) {
  for (char32_t c : u::decode(templated)) {
    if (u::is_whitespace(c) || c == kPlaceholderOpen || c == kPlaceholderClose || (c >= U'0' && c <= U'9')) continue;
    return false;
  }
  return true;
}

// Ordinals of placeholders in order of appearance.
std::vector<std::size_t> placeholder_order(std::string_view templated) {
  const std::u32string s = u::decode(templated);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != kPlaceholderOpen) continue;
    std::size_t ordinal = 0;
    std::size_t j = i + 1;
    while (j < s.size() && s[j] >= U'0' && s[j] <= U'9') ordinal = ordinal * 10 + (s[j++] - U'0');
    out.push_back(ordinal);
  }
  return out;
}

}  // namespace

std::string localize_text(std::string_view text, const LangTag& src, const LangTag& tgt, backend::BackendClient& backend,
                          const BorrowLexicon& lexicon, const LocalizeOptions& options) {
  if (text.empty()) return {};
  const Extraction ex = extract_protected_spans(text, lexicon);

  backend::TranslateRequest req{{}, src, tgt, {}};
  const bool translate_template = !only_placeholders_and_space(ex.templated);
  if (translate_template) req.items.push_back({"text", ex.templated});
  std::vector<std::size_t> hashtag_spans;
  for (std::size_t k = 0; k < ex.spans.size(); ++k) {
    if (ex.spans[k].kind != SpanKind::hashtag) continue;
    hashtag_spans.push_back(k);
    if (options.translate_hashtags) {
      req.items.push_back({"hashtag-" + std::to_string(k), segment_hashtag_body(ex.spans[k].payload.substr(1))});
    }
  }

  std::map<std::string, std::string> translated;
  if (!req.items.empty()) {
    try {
      for (auto& it : backend.translate_batch(req).items) translated[it.id] = std::move(it.translation);
    } catch (const BackendError& e) {
      throw BackendError(e.kind(), src.str() + "->" + tgt.str() + ": " + e.detail());
    }
  }
  std::string body = translate_template ? transliterate_borrowed(translated["text"], lexicon) : ex.templated;

  std::vector<std::string> renderings;
  renderings.reserve(ex.spans.size());
  for (std::size_t k = 0; k < ex.spans.size(); ++k) {
    const auto& span = ex.spans[k];
    switch (span.kind) {
      case SpanKind::borrowed: {
        const auto* v = lexicon.find(u::to_lower(u::decode(span.payload)));
        renderings.push_back(v ? *v : span.payload);
        break;
      }
      case SpanKind::hashtag:
        renderings.push_back(options.translate_hashtags
                                 ? render_hashtag(span.payload, translated["hashtag-" + std::to_string(k)])
                                 : span.payload);
        break;
      default:
        renderings.push_back(span.payload);
    }
  }

  // A translator may move placeholders around. Hashtag renderings are dealt to hashtag slots
  // in order of appearance so the source hashtag order survives.
  std::vector<std::size_t> hashtag_slots;
  for (std::size_t ordinal : placeholder_order(body)) {
    if (ordinal < ex.spans.size() && ex.spans[ordinal].kind == SpanKind::hashtag) hashtag_slots.push_back(ordinal);
  }
  if (hashtag_slots.size() == hashtag_spans.size()) {
    std::vector<std::string> reordered = renderings;
    for (std::size_t h = 0; h < hashtag_slots.size(); ++h) reordered[hashtag_slots[h]] = renderings[hashtag_spans[h]];
    renderings = std::move(reordered);
  }

  try {
    return reinsert_spans(body, ex.spans, renderings);
  } catch (const ValidationError& e) {
    throw BackendError(BackendErrorKind::bad_response, src.str() + "->" + tgt.str() + ": translation lost placeholders (" + e.what() + ")");
  }
}

LocalizedCorpus localize_corpus(const corpus::Corpus& source, const LangTag& src, const LangTag& tgt,
                                backend::BackendClient& backend, const BorrowLexicon& lexicon,
                                const LocalizeCorpusOptions& options) {
  if (source.empty()) throw ValidationError("empty corpus");
  const auto& examples = source.examples();
  for (const auto& e : examples) {
    if (e.utterance.lang != src) {
      throw ValidationError("record " + e.utterance.id + " is " + e.utterance.lang.str() + ", expected " + src.str());
    }
  }

  std::vector<std::optional<std::string>> outputs(examples.size());
  std::vector<std::string> errors(examples.size());
  std::vector<bool> backend_down(examples.size(), false);
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(examples.size(), options.concurrency ? options.concurrency : backend.config().max_in_flight));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < examples.size();) {
          try {
            outputs[i] = localize_text(examples[i].utterance.text, src, tgt, backend, lexicon, options.text);
          } catch (const BackendError& e) {
            errors[i] = e.what();
            backend_down[i] = e.kind() == BackendErrorKind::transport || e.kind() == BackendErrorKind::timeout;
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
      });
    }
  }

  LocalizedCorpus result;
  std::vector<corpus::LabeledExample> localized;
  bool any_transport = false;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (!outputs[i] || trim(*outputs[i]).empty()) {
      result.failures.push_back({examples[i].utterance.id, outputs[i] ? "empty translation" : errors[i]});
      any_transport = any_transport || backend_down[i];
      continue;
    }
    corpus::LabeledExample out = examples[i];
    out.utterance.text = std::move(*outputs[i]);
    out.utterance.lang = tgt;
    localized.push_back(std::move(out));
  }

  const double rate = static_cast<double>(result.failures.size()) / static_cast<double>(examples.size());
  if (!result.failures.empty() && rate > options.max_failure_rate) {
    std::string ids;
    for (std::size_t k = 0; k < result.failures.size() && k < 10; ++k) {
      ids += (k ? ", " : "") + result.failures[k].id + " (" + result.failures[k].reason + ")";
    }
    if (result.failures.size() > 10) ids += ", ...";
    throw BackendError(any_transport ? BackendErrorKind::transport : BackendErrorKind::item_failure,
                       std::to_string(result.failures.size()) + " of " + std::to_string(examples.size()) +
                           " records failed to localize " + src.str() + "->" + tgt.str() + ": " + ids);
  }
  result.corpus = corpus::make_labeled(source.name + "." + tgt.str(), std::move(localized));
  return result;
}

}  // namespace locmt::locrules
