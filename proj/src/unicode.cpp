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

#include "locmt/unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "locmt/error.hpp"

namespace locmt::unicode {

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    const int32_t at = i;
    U8_NEXT(s, i, length, c);
    if (c < 0) throw ValidationError("invalid UTF-8 at byte " + std::to_string(at));
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) {
    uint8_t buf[4];
    int32_t n = 0;
    UBool err = false;
    U8_APPEND(buf, n, 4, static_cast<UChar32>(c), err);
    if (err) throw ValidationError("cannot encode code point " + std::to_string(static_cast<uint32_t>(c)));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::string encode(char32_t cp) { return encode(std::u32string_view(&cp, 1)); }

bool is_valid_utf8(std::string_view utf8) {
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }

bool is_mark(char32_t c) { return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0; }

bool is_word_char(char32_t c) {
  return c == U'_' || u_isalnum(static_cast<UChar32>(c)) || is_mark(c);
}

bool is_digit_or_number(char32_t c) { return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_N_MASK) != 0; }

bool is_punct_or_symbol(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

bool is_emoji_base(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  if (c >= 0x1F1E6 && c <= 0x1F1FF) return true;  // regional indicators
  return u_hasBinaryProperty(cp, UCHAR_EXTENDED_PICTOGRAPHIC) || u_hasBinaryProperty(cp, UCHAR_EMOJI_PRESENTATION) ||
         u_hasBinaryProperty(cp, UCHAR_EMOJI_MODIFIER);
}

bool is_emoji_component(char32_t c) {
  return c == 0x200D || c == 0xFE0F || c == 0x20E3 || (c >= 0xE0020 && c <= 0xE007F);
}

char32_t to_lower(char32_t c) { return static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))); }

std::u32string to_lower(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = to_lower(c);
  return out;
}

bool is_arabic(char32_t c) {
  return (c >= 0x0600 && c <= 0x06FF) || (c >= 0x0750 && c <= 0x077F) || (c >= 0x08A0 && c <= 0x08FF) ||
         (c >= 0xFB50 && c <= 0xFDFF) || (c >= 0xFE70 && c <= 0xFEFF);
}

std::vector<std::u32string> tokens(std::u32string_view s) {
  std::vector<std::u32string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_whitespace(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_whitespace(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> tokens_utf8(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& t : tokens(decode(s))) out.push_back(encode(t));
  return out;
}

std::u32string join(const std::vector<std::u32string>& parts, char32_t sep) {
  std::u32string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

}  // namespace locmt::unicode
