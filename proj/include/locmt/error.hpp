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

#include <stdexcept>
#include <string>

namespace locmt {

// Bad input, bad configuration, or a violated precondition. Maps to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BackendErrorKind {
  timeout,
  transport,
  unsupported_pair,
  unknown_job,
  unknown_model,
  bad_request,
  bad_response,
  item_failure,
  internal,
};

const char* to_string(BackendErrorKind kind);
// Kinds this client does not know come back as internal.
BackendErrorKind backend_error_kind_from_string(const std::string& s);

// Anything that went wrong talking to (or inside) the model service. Maps to exit code 2.
class BackendError : public std::runtime_error {
 public:
  BackendError(BackendErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

  BackendErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  BackendErrorKind kind_;
  std::string detail_;
};

}  // namespace locmt
