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

#include "locmt/util.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "locmt/error.hpp"

namespace locmt {

const char* to_string(BackendErrorKind kind) {
  switch (kind) {
    case BackendErrorKind::timeout: return "timeout";
    case BackendErrorKind::transport: return "transport";
    case BackendErrorKind::unsupported_pair: return "unsupported_pair";
    case BackendErrorKind::unknown_job: return "unknown_job";
    case BackendErrorKind::unknown_model: return "unknown_model";
    case BackendErrorKind::bad_request: return "bad_request";
    case BackendErrorKind::bad_response: return "bad_response";
    case BackendErrorKind::item_failure: return "item_failure";
    case BackendErrorKind::internal: return "internal";
  }
  return "internal";
}

BackendErrorKind backend_error_kind_from_string(const std::string& s) {
  for (auto k : {BackendErrorKind::timeout, BackendErrorKind::transport, BackendErrorKind::unsupported_pair,
                 BackendErrorKind::unknown_job, BackendErrorKind::unknown_model, BackendErrorKind::bad_request,
                 BackendErrorKind::bad_response, BackendErrorKind::item_failure}) {
    if (s == to_string(k)) return k;
  }
  return BackendErrorKind::internal;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ValidationError("write failed for " + path.string());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n\v\f";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The 1e-9 nudge keeps values like 0.675 (stored as 0.67499999...) rounding up.
  return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("LOCMT_DATA_DIR"); env && *env) return env;
  return LOCMT_DEFAULT_DATA_DIR;
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace locmt
