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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "locmt/metrics.hpp"
#include "locmt/textprep.hpp"

namespace {

std::vector<locmt::metrics::TokenList> random_corpus(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len(5, 40), word(0, 300);
  std::vector<locmt::metrics::TokenList> out(n);
  for (auto& toks : out) {
    const int l = len(rng);
    for (int i = 0; i < l; ++i) toks.push_back("w" + std::to_string(word(rng)));
  }
  return out;
}

std::vector<std::string> random_texts(std::size_t n, std::uint32_t seed) {
  static const char* pieces[] = {"Bonjour", "@ami", "https://t.co/x", "مَرْحَبًا", "أهلا", "#SoirDeMatch", "😂", "123", "&amp;",
                                 "la", "vida", "hoy", "C'est", "  ", "!!"};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len(3, 25), pick(0, std::size(pieces) - 1);
  std::vector<std::string> out(n);
  for (auto& t : out) {
    const int l = len(rng);
    for (int i = 0; i < l; ++i) t += std::string(pieces[pick(rng)]) + " ";
  }
  return out;
}

void BM_NgramStats_OpenMP(benchmark::State& state) {
  const auto h = random_corpus(state.range(0), 1);
  const auto r = random_corpus(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(locmt::metrics::corpus_stats(h, r));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NgramStats_Serial(benchmark::State& state) {
  const auto h = random_corpus(state.range(0), 1);
  const auto r = random_corpus(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(locmt::metrics::serial::corpus_stats(h, r));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Preprocess_OpenMP(benchmark::State& state) {
  const locmt::textprep::Pipeline p(locmt::textprep::preset("osb-clean"));
  const auto texts = random_texts(state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(locmt::textprep::apply_pipeline_batch(p, texts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Preprocess_Serial(benchmark::State& state) {
  const locmt::textprep::Pipeline p(locmt::textprep::preset("osb-clean"));
  const auto texts = random_texts(state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(locmt::textprep::serial::apply_pipeline_batch(p, texts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_NgramStats_OpenMP)->Arg(1000)->Arg(10000);
BENCHMARK(BM_NgramStats_Serial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_Preprocess_OpenMP)->Arg(1000)->Arg(10000);
BENCHMARK(BM_Preprocess_Serial)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
