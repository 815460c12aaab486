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
#include <string>
#include <unordered_map>

#include "locmt/error.hpp"
#include "locmt/metrics.hpp"

namespace locmt::metrics {

namespace {

using NgramCounts = std::unordered_map<std::string, std::int64_t>;

// Tokens never contain whitespace, so a unit separator makes the joined key unambiguous.
NgramCounts count_ngrams(const TokenList& toks, std::size_t n) {
  NgramCounts out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key = toks[i];
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += toks[i + k];
    }
    ++out[key];
  }
  return out;
}

std::int64_t clipped_matches(const NgramCounts& hyp, const NgramCounts& ref) {
  std::int64_t m = 0;
  for (const auto& [g, c] : hyp) {
    auto it = ref.find(g);
    if (it != ref.end()) m += std::min(c, it->second);
  }
  return m;
}

void check_shapes(std::span<const TokenList> hyps, std::span<const TokenList> refs) {
  if (hyps.size() != refs.size()) {
    throw ValidationError("hypothesis/reference length mismatch: " + std::to_string(hyps.size()) + " vs " +
                          std::to_string(refs.size()));
  }
  if (hyps.empty()) throw ValidationError("empty corpus");
}

}  // namespace

NgramStats& NgramStats::operator+=(const NgramStats& o) {
  for (int n = 0; n < kMaxOrder; ++n) {
    matches[n] += o.matches[n];
    totals[n] += o.totals[n];
  }
  hyp_len += o.hyp_len;
  ref_len += o.ref_len;
  unigram_matches += o.unigram_matches;
  ref_unigrams += o.ref_unigrams;
  return *this;
}

NgramStats pair_stats(const TokenList& hyp, const TokenList& ref) {
  NgramStats s;
  s.hyp_len = static_cast<std::int64_t>(hyp.size());
  s.ref_len = static_cast<std::int64_t>(ref.size());
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto h = count_ngrams(hyp, n);
    const auto r = count_ngrams(ref, n);
    s.matches[n - 1] = clipped_matches(h, r);
    s.totals[n - 1] = hyp.size() >= static_cast<std::size_t>(n) ? static_cast<std::int64_t>(hyp.size()) - n + 1 : 0;
  }
  s.unigram_matches = s.matches[0];
  s.ref_unigrams = s.ref_len;
  return s;
}

NgramStats corpus_stats(std::span<const TokenList> hyps, std::span<const TokenList> refs) {
  check_shapes(hyps, refs);
  const auto n = static_cast<std::ptrdiff_t>(hyps.size());
  NgramStats total;
#pragma omp parallel
  {
    NgramStats local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) local += pair_stats(hyps[i], refs[i]);
#pragma omp critical(locmt_ngram_reduce)
    total += local;
  }
  return total;
}

namespace serial {
NgramStats corpus_stats(std::span<const TokenList> hyps, std::span<const TokenList> refs) {
  check_shapes(hyps, refs);
  NgramStats total;
  for (std::size_t i = 0; i < hyps.size(); ++i) total += pair_stats(hyps[i], refs[i]);
  return total;
}
}  // namespace serial

}  // namespace locmt::metrics
