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

#include <exception>

#include "locmt/textprep.hpp"

namespace locmt::textprep {

std::vector<std::string> apply_pipeline_batch(const Pipeline& pipeline, std::span<const std::string> texts) {
  std::vector<std::string> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = pipeline.apply(texts[i]);
    } catch (...) {
#pragma omp critical(locmt_textprep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace serial {

std::vector<std::string> apply_pipeline_batch(const Pipeline& pipeline, std::span<const std::string> texts) {
  std::vector<std::string> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(pipeline.apply(t));
  return out;
}

}  // namespace serial
}  // namespace locmt::textprep
