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
#include <cmath>

#include "locmt/metrics.hpp"
#include "locmt/textprep.hpp"
#include "locmt/unicode.hpp"

namespace locmt::metrics {

double bleu_from_stats(const NgramStats& s) {
  if (s.hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 0; n < kMaxOrder; ++n) {
    // Orders longer than every hypothesis carry no evidence either way.
    if (s.totals[n] == 0) continue;
    const double t = static_cast<double>(s.totals[n]);
    const double m = s.matches[n] > 0 ? static_cast<double>(s.matches[n]) : kSmoothingEpsilon;
    log_sum += std::log(m / t);
    ++orders;
  }
  const double c = static_cast<double>(s.hyp_len);
  const double r = static_cast<double>(s.ref_len);
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return 100.0 * bp * std::exp(log_sum / orders);
}

double rouge_from_stats(const NgramStats& s) {
  if (s.ref_unigrams == 0) return 0.0;
  return 100.0 * static_cast<double>(s.unigram_matches) / static_cast<double>(s.ref_unigrams);
}

MetricValue corpus_bleu(std::span<const TokenList> hyps, std::span<const TokenList> refs) {
  return {"bleu", bleu_from_stats(corpus_stats(hyps, refs))};
}

MetricValue rouge_recall(std::span<const TokenList> hyps, std::span<const TokenList> refs) {
  return {"rouge1_recall", rouge_from_stats(corpus_stats(hyps, refs))};
}

MetricValue combined_f(const MetricValue& bleu, const MetricValue& rouge) {
  const double b = bleu.value;
  const double r = rouge.value;
  if (b == r) return {"combined_f", b};
  if (b <= 0.0 || r <= 0.0) return {"combined_f", 0.0};
  // The harmonic mean lies between its inputs; clamping only undoes rounding.
  return {"combined_f", std::clamp(2.0 * b * r / (b + r), std::min(b, r), std::max(b, r))};
}

TranslationScores score_translations(std::span<const TokenList> hyps, std::span<const TokenList> refs) {
  const NgramStats s = corpus_stats(hyps, refs);
  TranslationScores out{{"bleu", bleu_from_stats(s)}, {"rouge1_recall", rouge_from_stats(s)}, {}};
  out.combined = combined_f(out.bleu, out.rouge);
  return out;
}

Json to_json(const TranslationScores& s) {
  return Json{{"bleu", s.bleu.value},
              {"rouge", s.rouge.value},
              {"combined_f", s.combined.value},
              {"variants", {{"bleu", kBleuVariant}, {"rouge", kRougeVariant}, {"combined_f", kCombinedVariant}}}};
}

std::vector<TokenList> tokenize_for_mt(std::span<const std::string> texts) {
  const textprep::Pipeline clean(textprep::preset("nmt-clean"));
  const auto cleaned = textprep::apply_pipeline_batch(clean, texts);
  std::vector<TokenList> out;
  out.reserve(cleaned.size());
  for (const auto& t : cleaned) out.push_back(unicode::tokens_utf8(t));
  return out;
}

}  // namespace locmt::metrics
