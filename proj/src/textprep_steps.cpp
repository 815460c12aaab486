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

#include <algorithm>
#include <optional>

#include "locmt/error.hpp"
#include "locmt/textprep.hpp"
#include "locmt/unicode.hpp"
#include "locmt/util.hpp"

namespace locmt::textprep {

namespace u = locmt::unicode;

namespace {

std::string join_tokens(const std::vector<std::u32string>& toks) { return u::encode(u::join(toks, U' ')); }

bool starts_with_ci(std::u32string_view s, std::u32string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (u::to_lower(s[i]) != prefix[i]) return false;
  }
  return true;
}

bool is_zero_width_artifact(char32_t c) {
  return c == 0xFFFD || c == 0xFEFF || (c >= 0x200B && c <= 0x200F && c != 0x200D);
}

bool continues_emoji(char32_t c) { return u::is_emoji_base(c) || c == 0xFE0F || c == 0x20E3; }

std::optional<char32_t> named_entity(std::u32string_view name) {
  if (name == U"amp") return U'&';
  if (name == U"lt") return U'<';
  if (name == U"gt") return U'>';
  if (name == U"quot") return U'"';
  if (name == U"apos") return U'\'';
  if (name == U"nbsp") return char32_t{0x00A0};
  return std::nullopt;
}

bool is_ascii_alpha(char32_t c) { return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z'); }
bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }
bool is_ascii_hex(char32_t c) {
  return is_ascii_digit(c) || (c >= U'a' && c <= U'f') || (c >= U'A' && c <= U'F');
}

// Returns the length of an entity starting at s[i] == '&' (0 if none) and its decoded value,
// which is empty when the entity is well-formed but unmappable.
std::size_t match_entity(std::u32string_view s, std::size_t i, std::optional<char32_t>& value) {
  constexpr std::size_t kMaxEntity = 32;
  std::size_t j = i + 1;
  if (j >= s.size()) return 0;
  if (s[j] == U'#') {
    ++j;
    bool hex = false;
    if (j < s.size() && (s[j] == U'x' || s[j] == U'X')) {
      hex = true;
      ++j;
    }
    const std::size_t digits_start = j;
    std::uint64_t v = 0;
    while (j < s.size() && j - i < kMaxEntity && (hex ? is_ascii_hex(s[j]) : is_ascii_digit(s[j]))) {
      const char32_t c = s[j];
      const unsigned d = is_ascii_digit(c) ? c - U'0' : (u::to_lower(c) - U'a' + 10);
      v = v * (hex ? 16 : 10) + d;
      if (v > 0x10FFFF) v = 0x110000;
      ++j;
    }
    if (j == digits_start || j >= s.size() || s[j] != U';') return 0;
    const bool valid = v != 0 && v <= 0x10FFFF && !(v >= 0xD800 && v <= 0xDFFF);
    value = valid ? std::optional<char32_t>(static_cast<char32_t>(v)) : std::nullopt;
    return j + 1 - i;
  }
  if (!is_ascii_alpha(s[j])) return 0;
  const std::size_t name_start = j;
  while (j < s.size() && j - i < kMaxEntity && (is_ascii_alpha(s[j]) || is_ascii_digit(s[j]))) ++j;
  if (j >= s.size() || s[j] != U';') return 0;
  value = named_entity(s.substr(name_start, j - name_start));
  return j + 1 - i;
}

std::u32string strip_artifacts_once(std::u32string_view s) {
  std::u32string decoded;
  decoded.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == U'&') {
      std::optional<char32_t> value;
      if (const std::size_t len = match_entity(s, i, value); len > 0) {
        if (value) decoded.push_back(*value);
        i += len;
        continue;
      }
    }
    decoded.push_back(s[i++]);
  }
  std::u32string out;
  out.reserve(decoded.size());
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    const char32_t c = decoded[i];
    if (is_zero_width_artifact(c)) continue;
    if (c == 0x200D) {
      // ZWJ survives only inside an emoji sequence.
      const bool prev_emoji = !out.empty() && continues_emoji(out.back());
      const bool next_emoji = i + 1 < decoded.size() && u::is_emoji_base(decoded[i + 1]);
      if (!(prev_emoji && next_emoji)) continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

bool is_diacritic(char32_t c, DiacriticSet set) {
  if (set == DiacriticSet::harakat) return c >= 0x064B && c <= 0x0652;
  return (c >= 0x064B && c <= 0x065F) || c == 0x0670 || (c >= 0x0610 && c <= 0x061A) ||
         (c >= 0x06D6 && c <= 0x06ED);
}

std::string collapse_whitespace(std::string_view text) { return join_tokens(u::tokens(u::decode(text))); }

std::string strip_encoding_artifacts(std::string_view text) {
  std::u32string cur = u::decode(text);
  // Decoding can expose new entities ("&amp;lt;") and stripping can join fragments,
  // so iterate to a fixpoint; each round that changes anything shrinks the text.
  while (true) {
    std::u32string next = strip_artifacts_once(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  return u::encode(cur);
}

std::string strip_urls(std::string_view text) {
  std::vector<std::u32string> kept;
  for (auto& tok : u::tokens(u::decode(text))) {
    if (starts_with_ci(tok, U"www.")) continue;
    std::size_t cut = tok.size();
    for (std::size_t i = 0; i < tok.size(); ++i) {
      const auto rest = std::u32string_view(tok).substr(i);
      if (starts_with_ci(rest, U"http://") || starts_with_ci(rest, U"https://")) {
        cut = i;
        break;
      }
    }
    tok.resize(cut);
    if (!tok.empty()) kept.push_back(std::move(tok));
  }
  return join_tokens(kept);
}

std::string lowercase(std::string_view text) { return u::encode(u::to_lower(u::decode(text))); }

std::string strip_diacritics(std::string_view text, DiacriticSet set) {
  const std::u32string s = u::decode(text);
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_diacritic(s[i], set)) {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t run_start = i;
    while (i < s.size() && is_diacritic(s[i], set)) ++i;
    // A run of marks with no base letter forms a token of its own; drop one of the
    // separators around it so the removal does not leave a double space behind.
    const bool ws_before = run_start == 0 || u::is_whitespace(s[run_start - 1]);
    const bool ws_after = i == s.size() || u::is_whitespace(s[i]);
    if (ws_before && ws_after) {
      if (i < s.size()) {
        ++i;
      } else if (!out.empty() && u::is_whitespace(out.back())) {
        out.pop_back();
      }
    }
  }
  return u::encode(out);
}

std::string normalize_hamza(std::string_view text, bool waw_yeh) {
  std::u32string s = u::decode(text);
  for (auto& c : s) {
    if (c == 0x0622 || c == 0x0623 || c == 0x0625) {
      c = 0x0627;
    } else if (waw_yeh && c == 0x0624) {
      c = 0x0648;
    } else if (waw_yeh && c == 0x0626) {
      c = 0x064A;
    }
  }
  return u::encode(s);
}

std::string strip_mentions(std::string_view text) {
  std::vector<std::u32string> kept;
  for (auto& tok : u::tokens(u::decode(text))) {
    if (tok.size() > 1 && tok[0] == U'@' && u::is_word_char(tok[1])) continue;
    kept.push_back(std::move(tok));
  }
  return join_tokens(kept);
}

std::string strip_specials_numbers(std::string_view text) {
  const std::u32string s = u::decode(text);
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t c = s[i];
    // A keycap is an emoji even though it starts with a digit, '#' or '*'.
    if (is_ascii_digit(c) || c == U'#' || c == U'*') {
      std::size_t j = i + 1;
      if (j < s.size() && s[j] == 0xFE0F) ++j;
      if (j < s.size() && s[j] == 0x20E3) {
        out.append(s, i, j + 1 - i);
        i = j;
        continue;
      }
    }
    if (u::is_digit_or_number(c)) {
      out.push_back(U' ');
      continue;
    }
    if (u::is_punct_or_symbol(c) && !u::is_emoji_base(c)) {
      // Elided forms like "c'est" keep their apostrophe.
      const bool apostrophe = c == U'\'' || c == 0x2019;
      if (apostrophe && i > 0 && i + 1 < s.size() && u::is_letter(s[i - 1]) && u::is_letter(s[i + 1])) {
        out.push_back(c);
      } else {
        out.push_back(U' ');
      }
      continue;
    }
    out.push_back(c);
  }
  return join_tokens(u::tokens(out));
}

namespace {

std::string normalize_for_stopwords(std::string_view word) {
  return normalize_hamza(strip_diacritics(lowercase(word)));
}

}  // namespace

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  try {
    lines = read_lines(path);
  } catch (const ValidationError&) {
    throw ValidationError("unreadable stopword list: " + path.string());
  }
  StopwordSet words;
  for (const auto& line : lines) {
    const std::string w = trim(line);
    if (w.empty() || w[0] == '#') continue;
    words.insert(normalize_for_stopwords(w));
  }
  return words;
}

StopwordSet default_stopwords(std::string_view lang) {
  const auto dir = data_dir() / "stopwords";
  if (lang == "all") {
    StopwordSet all;
    for (const char* l : {"fr", "es", "ar"}) all.merge(load_stopwords(dir / (std::string(l) + ".txt")));
    return all;
  }
  return load_stopwords(dir / (std::string(lang) + ".txt"));
}

std::string remove_stopwords(std::string_view text, const StopwordSet& stopwords) {
  std::vector<std::u32string> kept;
  for (auto& tok : u::tokens(u::decode(text))) {
    if (stopwords.contains(normalize_for_stopwords(u::encode(tok)))) continue;
    kept.push_back(std::move(tok));
  }
  return join_tokens(kept);
}

}  // namespace locmt::textprep
