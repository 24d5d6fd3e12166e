// Copyright 2026 The SCP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON instance files. See docs/instance_format.md for the schema.

#ifndef SCP_INSTANCE_IO_H_
#define SCP_INSTANCE_IO_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "scp/coverage.h"
#include "scp/features.h"
#include "scp/objective.h"

namespace scp {

struct StateSplits {
  std::vector<int> train;
  std::vector<int> validation;
  std::vector<int> test;
};

struct Instance {
  std::shared_ptr<const Objective> objective;
  std::optional<BaseFeatureTable> base_features;
  std::optional<StateSplits> splits;
  nlohmann::json metadata = nlohmann::json::object();
};

// Throws std::invalid_argument on schema violations.
Instance InstanceFromJson(const nlohmann::json& doc);
nlohmann::json InstanceToJson(const Instance& instance);

// Throws std::runtime_error when the file cannot be opened or parsed.
Instance LoadInstance(const std::string& path);
void SaveInstance(const Instance& instance, const std::string& path);

}  // namespace scp

#endif  // SCP_INSTANCE_IO_H_
