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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace locmt {

// 64-bit FNV-1a. Stable across platforms and runs, unlike std::hash.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

std::string to_hex(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Lines without their terminators; a trailing newline does not produce an empty last line.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Rounds half away from zero at the given number of decimals (values here are non-negative).
double round_half_up(double value, int decimals);

// Directory holding presets, stopword lists and lexicons. LOCMT_DATA_DIR overrides the build default.
std::filesystem::path data_dir();

// Resolves `p` against `base` unless it is absolute.
std::filesystem::path resolve_path(const std::filesystem::path& base, const std::filesystem::path& p);

std::string utc_timestamp();

}  // namespace locmt
