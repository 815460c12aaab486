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
#include <numeric>
#include <unordered_map>

#include "locmt/corpus.hpp"
#include "locmt/error.hpp"
#include "locmt/util.hpp"

namespace locmt::corpus {

namespace {

void check_ratios(const std::vector<std::pair<std::string, double>>& ratios) {
  if (ratios.empty()) throw ValidationError("split needs at least one ratio");
  double sum = 0.0;
  for (const auto& [name, r] : ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw ValidationError("split ratio for '" + name + "' must be in (0, 1]");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("split ratios must sum to 1, got " + std::to_string(sum));
}

// Record indices ordered by (seeded hash of id, id).
std::vector<std::size_t> hash_rank(const std::vector<std::string>& ids, const std::vector<std::size_t>& subset,
                                   std::uint64_t seed) {
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(subset.size());
  for (auto i : subset) keyed.emplace_back(splitmix64(fnv1a64(ids[i]) ^ splitmix64(seed)), i);
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return ids[a.second] < ids[b.second];
  });
  std::vector<std::size_t> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

template <typename Record>
Corpus subset_corpus(const Corpus& parent, const std::vector<Record>& records, const std::vector<std::size_t>& members,
                     const std::string& split_name, std::uint64_t seed) {
  std::vector<Record> picked;
  picked.reserve(members.size());
  for (auto i : members) picked.push_back(records[i]);
  Corpus c;
  c.name = parent.name + "." + split_name;
  c.records = std::move(picked);
  c.manifest.seed = static_cast<std::int64_t>(seed);
  c.manifest = corpus_stats(c);
  c.manifest.seed = static_cast<std::int64_t>(seed);
  return c;
}

}  // namespace

std::vector<std::size_t> split_sizes(std::size_t n, const std::vector<std::pair<std::string, double>>& ratios) {
  check_ratios(ratios);
  std::vector<std::size_t> sizes(ratios.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    const double exact = ratios[k].second * static_cast<double>(n);
    // Guard against 0.8 * 20000 landing at 15999.999...
    const double floored = std::floor(exact + 1e-9);
    sizes[k] = static_cast<std::size_t>(floored);
    assigned += sizes[k];
    remainders.emplace_back(exact - floored, k);
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++sizes[remainders[r % remainders.size()].second];
  return sizes;
}

std::vector<std::pair<std::string, Corpus>> split_corpus(const Corpus& corpus, const SplitSpec& spec) {
  check_ratios(spec.ratios);
  const std::size_t n = corpus.size();
  if (n < spec.ratios.size()) {
    throw ValidationError("corpus of " + std::to_string(n) + " records cannot fill " + std::to_string(spec.ratios.size()) + " splits");
  }
  const auto ids = corpus.ids();

  // Groups are ranked independently: one group overall, or one per class when stratified.
  std::vector<std::vector<std::size_t>> groups;
  if (spec.stratified && corpus.kind() == CorpusKind::labeled) {
    std::map<Label, std::vector<std::size_t>> by_class;
    const auto& ex = corpus.examples();
    for (std::size_t i = 0; i < ex.size(); ++i) by_class[ex[i].label].push_back(i);
    for (auto& [label, members] : by_class) groups.push_back(std::move(members));
  } else {
    groups.emplace_back(n);
    std::iota(groups[0].begin(), groups[0].end(), 0);
  }

  std::vector<std::vector<std::size_t>> members(spec.ratios.size());
  for (const auto& group : groups) {
    const auto ranked = hash_rank(ids, group, spec.seed);
    const auto sizes = split_sizes(ranked.size(), spec.ratios);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      for (std::size_t j = 0; j < sizes[k]; ++j) members[k].push_back(ranked[pos++]);
    }
  }

  std::vector<std::pair<std::string, Corpus>> out;
  for (std::size_t k = 0; k < spec.ratios.size(); ++k) {
    std::sort(members[k].begin(), members[k].end());
    const auto& name = spec.ratios[k].first;
    if (corpus.kind() == CorpusKind::parallel) {
      out.emplace_back(name, subset_corpus(corpus, corpus.pairs(), members[k], name, spec.seed));
    } else {
      out.emplace_back(name, subset_corpus(corpus, corpus.examples(), members[k], name, spec.seed));
    }
  }
  return out;
}

}  // namespace locmt::corpus
