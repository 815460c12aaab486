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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

// Translation metrics (corpus BLEU, ROUGE-1 recall, their harmonic mean) and binary/multiclass
// classification reports, plus consistency checks for published P/R/F/accuracy tables.
namespace locmt::metrics {

using Json = nlohmann::json;
using TokenList = std::vector<std::string>;

inline constexpr int kMaxOrder = 4;
// Added to a zero clipped n-gram count before taking the precision.
inline constexpr double kSmoothingEpsilon = 0.1;

inline constexpr const char* kBleuVariant = "bleu-corpus-4gram-addeps0.1-effective-order";
inline constexpr const char* kRougeVariant = "rouge1-recall-micro";
inline constexpr const char* kCombinedVariant = "harmonic-mean(bleu,rouge1-recall)";

struct MetricValue {
  std::string name;
  double value = 0.0;
};

// Integer sufficient statistics; summing these before any division keeps the corpus scores
// independent of pair order.
struct NgramStats {
  std::array<std::int64_t, kMaxOrder> matches{};
  std::array<std::int64_t, kMaxOrder> totals{};
  std::int64_t hyp_len = 0;
  std::int64_t ref_len = 0;
  std::int64_t unigram_matches = 0;  // clipped, for ROUGE-1
  std::int64_t ref_unigrams = 0;

  NgramStats& operator+=(const NgramStats& o);
  friend bool operator==(const NgramStats&, const NgramStats&) = default;
};

NgramStats pair_stats(const TokenList& hyp, const TokenList& ref);

// Summed over all pairs; OpenMP-parallel over pairs.
NgramStats corpus_stats(std::span<const TokenList> hyps, std::span<const TokenList> refs);
namespace serial {
NgramStats corpus_stats(std::span<const TokenList> hyps, std::span<const TokenList> refs);
}

double bleu_from_stats(const NgramStats& s);
double rouge_from_stats(const NgramStats& s);

MetricValue corpus_bleu(std::span<const TokenList> hyps, std::span<const TokenList> refs);
MetricValue rouge_recall(std::span<const TokenList> hyps, std::span<const TokenList> refs);
MetricValue combined_f(const MetricValue& bleu, const MetricValue& rouge);

struct TranslationScores {
  MetricValue bleu;
  MetricValue rouge;
  MetricValue combined;
};
TranslationScores score_translations(std::span<const TokenList> hyps, std::span<const TokenList> refs);
Json to_json(const TranslationScores& s);

// nmt-clean followed by whitespace tokenization.
std::vector<TokenList> tokenize_for_mt(std::span<const std::string> texts);

struct ConfusionMatrix {
  std::vector<std::string> classes;
  // counts[true][predicted]
  std::vector<std::vector<std::int64_t>> counts;

  std::int64_t total() const;
  std::int64_t row_sum(std::size_t i) const;
  std::int64_t col_sum(std::size_t j) const;
  std::int64_t trace() const;
};

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct ClassReport {
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  ConfusionMatrix confusion;
};

ClassReport classification_report(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                                  const std::vector<std::string>& classes);
ClassReport report_from_confusion(ConfusionMatrix cm);

Json to_json(const ClassReport& r);
ClassReport class_report_from_json(const Json& j);
// Two-decimal table in the usual P | R | F | support layout.
std::string render_text(const ClassReport& r);

struct Violation {
  std::string where;
  std::string message;
};

inline constexpr double kTableTolerance = 0.005;

// Computed reports: F1 against 2PR/(P+R), accuracy against trace/total, and confusion-matrix
// conservation. A report with no classes has nothing to violate.
std::vector<Violation> validate_report_consistency(const ClassReport& report, double tolerance = kTableTolerance);

// A row transcribed from a published table, where every number is already rounded.
struct ReportedClass {
  std::string label;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct ReportedMetrics {
  std::string name;
  std::vector<ReportedClass> classes;
  std::optional<double> accuracy;
  // Half-width of the rounding already applied to P and R (0.005 for two-decimal tables).
  double input_rounding = 0.005;
};

// F is checked against the range 2PR/(P+R) takes over P,R within input_rounding of the reported
// values. For binary rows with both F scores present, accuracy is checked through
// acc/(1-acc) = F1/(2(1-F1)) + F2/(2(1-F2)), which holds for any 2x2 confusion matrix.
std::vector<Violation> validate_report_consistency(const ReportedMetrics& reported, double tolerance = kTableTolerance);

}  // namespace locmt::metrics
