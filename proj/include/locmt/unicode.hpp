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

#include <string>
#include <string_view>
#include <vector>

// Thin layer over ICU character properties plus UTF-8 <-> code point conversion.
namespace locmt::unicode {

// Throws ValidationError on ill-formed UTF-8.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
std::string encode(char32_t cp);
bool is_valid_utf8(std::string_view utf8);

bool is_whitespace(char32_t c);
bool is_letter(char32_t c);
bool is_mark(char32_t c);
// Letters, digits, combining marks and underscore.
bool is_word_char(char32_t c);
bool is_digit_or_number(char32_t c);
bool is_punct_or_symbol(char32_t c);

// Pictographic emoji, regional indicators and emoji modifiers.
bool is_emoji_base(char32_t c);
// Code points that only make sense inside an emoji sequence: ZWJ, VS16, keycap, tag characters.
bool is_emoji_component(char32_t c);

char32_t to_lower(char32_t c);
std::u32string to_lower(std::u32string_view s);

// Arabic script block and its supplements.
bool is_arabic(char32_t c);

// Whitespace-delimited tokens (Unicode whitespace).
std::vector<std::u32string> tokens(std::u32string_view s);
std::vector<std::string> tokens_utf8(std::string_view s);
std::u32string join(const std::vector<std::u32string>& parts, char32_t sep);

}  // namespace locmt::unicode
