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

#include "scp/objective.h"

#include <map>
#include <stdexcept>
#include <string>

namespace scp {

void Objective::CheckItem(Item item) const {
  if (item < 0 || item >= num_items()) {
    throw std::domain_error("item id " + std::to_string(item) +
                            " outside ground set of size " +
                            std::to_string(num_items()));
  }
}

void Objective::CheckState(int state) const {
  if (state < 0 || state >= num_states()) {
    throw std::domain_error("state id " + std::to_string(state) +
                            " out of range");
  }
}

double MarginalBenefit(const Objective& obj, int state, ItemSpan list,
                       Item item) {
  obj.CheckItem(item);
  ItemList extended(list.begin(), list.end());
  extended.push_back(item);
  return obj.Evaluate(state, extended) - obj.Evaluate(state, list);
}

double NormalizedBenefit(const Objective& obj, int state, ItemSpan list,
                         Item item) {
  obj.CheckItem(item);
  const std::optional<double> length = obj.ItemLength(state, item);
  if (!length.has_value()) {
    throw std::domain_error("normalized benefit needs a budgeted objective");
  }
  if (!(*length > 0.0)) {
    throw std::domain_error("item " + std::to_string(item) +
                            " has non-positive length");
  }
  return MarginalBenefit(obj, state, list, item) / *length;
}

std::vector<double> AllMarginalBenefits(const Objective& obj, int state,
                                        ItemSpan list) {
  const double base = obj.Evaluate(state, list);
  ItemList extended(list.begin(), list.end());
  extended.push_back(0);
  std::vector<double> benefits(obj.num_items());
  for (Item s = 0; s < obj.num_items(); ++s) {
    extended.back() = s;
    benefits[s] = obj.Evaluate(state, extended) - base;
  }
  return benefits;
}

WeightedStates UniformStates(std::span<const int> ids) {
  WeightedStates out;
  out.ids.assign(ids.begin(), ids.end());
  out.weights.assign(ids.size(), ids.empty() ? 0.0 : 1.0 / ids.size());
  return out;
}

WeightedStates AllStatesUniform(const Objective& obj) {
  std::vector<int> ids(obj.num_states());
  for (int i = 0; i < obj.num_states(); ++i) ids[i] = i;
  return UniformStates(ids);
}

WeightedStates EmpiricalStates(std::span<const int> samples) {
  std::map<int, int> counts;
  for (int s : samples) ++counts[s];
  WeightedStates out;
  for (const auto& [id, count] : counts) {
    out.ids.push_back(id);
    out.weights.push_back(static_cast<double>(count) / samples.size());
  }
  return out;
}

int SampleState(const WeightedStates& states, Rng& rng) {
  if (states.empty()) throw std::invalid_argument("empty state distribution");
  std::discrete_distribution<size_t> pick(states.weights.begin(),
                                          states.weights.end());
  return states.ids[pick(rng)];
}

double ExpectedValue(const Objective& obj, const WeightedStates& states,
                     ItemSpan list) {
  double total = 0.0;
  for (size_t i = 0; i < states.size(); ++i) {
    total += states.weights[i] * obj.Evaluate(states.ids[i], list);
  }
  return total;
}

}  // namespace scp
