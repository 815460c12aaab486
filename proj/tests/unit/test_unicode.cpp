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

#include "locmt/error.hpp"
#include "locmt/unicode.hpp"
#include "locmt/util.hpp"
#include "locmt/yamljson.hpp"
#include "support.hpp"

using namespace locmt;
namespace t = locmt::testing;

TEST_CASE("utf8 decode/encode round trip") {
  const std::string s = "Ça va? مرحبا 👍🏽 ﷺ";
  CHECK(unicode::encode(unicode::decode(s)) == s);
  CHECK(unicode::decode("é").size() == 1);
  CHECK(unicode::decode("👨‍👩‍👧").size() == 5);
  CHECK(unicode::is_valid_utf8(s));
}

TEST_CASE("invalid utf8 is a validation error") {
  CHECK_FALSE(unicode::is_valid_utf8("\xC3"));
  CHECK_FALSE(unicode::is_valid_utf8("a\xFF" "b"));
  CHECK_FALSE(unicode::is_valid_utf8("\xED\xA0\x80"));  // encoded surrogate
  CHECK_THROWS_AS(unicode::decode("abc\xC3"), ValidationError);
  CHECK_THROWS_AS(unicode::encode(char32_t{0xD800}), ValidationError);
}

TEST_CASE("character classes") {
  CHECK(unicode::is_whitespace(U' '));
  CHECK(unicode::is_whitespace(U'　'));
  CHECK_FALSE(unicode::is_whitespace(U'​'));
  CHECK(unicode::is_letter(U'م'));
  CHECK(unicode::is_mark(U'َ'));
  CHECK(unicode::is_digit_or_number(U'٣'));
  CHECK(unicode::is_punct_or_symbol(U'؟'));
  CHECK(unicode::is_arabic(U'ب'));
  CHECK_FALSE(unicode::is_arabic(U'b'));
  CHECK(unicode::to_lower(U'É') == U'é');
  CHECK(unicode::to_lower(U'ب') == U'ب');
}

TEST_CASE("tokens split on any unicode whitespace") {
  const auto toks = unicode::tokens_utf8("  a b\tc\n\nمرحبا ");
  REQUIRE(toks.size() == 4);
  CHECK(toks[1] == "b");
  CHECK(toks[3] == "مرحبا");
  CHECK(unicode::tokens_utf8("").empty());
  CHECK(unicode::tokens_utf8(" \t ").empty());
}

TEST_CASE("round_half_up to two decimals") {
  CHECK(round_half_up(0.675, 2) == doctest::Approx(0.68));
  CHECK(round_half_up(0.6097, 2) == doctest::Approx(0.61));
  CHECK(round_half_up(0.125, 2) == doctest::Approx(0.13));
  CHECK(round_half_up(0.124999, 2) == doctest::Approx(0.12));
}

TEST_CASE("hashing and hex") {
  // FNV-1a 64 reference values
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(to_hex(0xabcULL) == "0000000000000abc");
  CHECK(splitmix64(1) != splitmix64(2));
}

TEST_CASE("string helpers") {
  CHECK(trim("  x y \n") == "x y");
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  t::TempDir dir;
  write_file(dir / "sub/x.txt", "one\ntwo\n");
  CHECK(read_lines(dir / "sub/x.txt") == std::vector<std::string>{"one", "two"});
  CHECK_THROWS_AS(read_file(dir / "missing"), ValidationError);
  CHECK(resolve_path("/base", "rel/p") == std::filesystem::path("/base/rel/p"));
  CHECK(resolve_path("/base", "/abs") == std::filesystem::path("/abs"));
}

TEST_CASE("backend error message carries kind") {
  BackendError e(BackendErrorKind::unsupported_pair, "fr->xx");
  CHECK(std::string(e.what()) == "unsupported_pair: fr->xx");
  CHECK(backend_error_kind_from_string("timeout") == BackendErrorKind::timeout);
  CHECK(backend_error_kind_from_string("nope") == BackendErrorKind::internal);
}

TEST_CASE("yaml scalars map to json types") {
  const auto j = yaml_to_json(parse_yaml("a: 1\nb: 0.5\nc: true\nd: text\ne: '7'\nf: [1, x]\ng:\n", "test"));
  CHECK(j["a"].is_number_integer());
  CHECK(j["b"].get<double>() == 0.5);
  CHECK(j["c"].get<bool>());
  CHECK(j["d"] == "text");
  CHECK(j["e"] == "7");
  CHECK(j["f"][1] == "x");
  CHECK(j["g"].is_null());
  CHECK_THROWS_AS(parse_yaml("a: [1,", "broken.yaml"), ValidationError);
}
