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

#include <string_view>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

namespace locmt {

// Scalars become bool, integer, real or string, in that order of preference.
nlohmann::json yaml_to_json(const YAML::Node& node);
// Parses a YAML document; syntax errors become ValidationError.
YAML::Node parse_yaml(std::string_view text, std::string_view what);

}  // namespace locmt
