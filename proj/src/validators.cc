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

#include "scp/validators.h"

#include <algorithm>
#include <stdexcept>

namespace scp {
namespace {

constexpr size_t kMaxKeptExamples = 5;

ItemList RandomList(const Objective& obj, int min_len, int max_len, Rng& rng) {
  std::uniform_int_distribution<int> len_dist(min_len, max_len);
  std::uniform_int_distribution<int> item_dist(0, obj.num_items() - 1);
  ItemList list(len_dist(rng));
  for (Item& s : list) s = item_dist(rng);
  return list;
}

void Record(PropertyReport& report, PropertyViolation v) {
  ++report.violations;
  report.worst = std::max(report.worst, v.amount);
  if (report.examples.size() < kMaxKeptExamples) {
    report.examples.push_back(std::move(v));
  }
}

}  // namespace

PropertyReport CheckMonotone(const Objective& obj, int trials,
                             uint64_t rng_seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  Rng rng(rng_seed);
  std::uniform_int_distribution<int> state_dist(0, obj.num_states() - 1);
  const int n = obj.num_items();
  PropertyReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const int x = state_dist(rng);
    ItemList l1 = RandomList(obj, 0, 2 * n, rng);
    ItemList l2 = RandomList(obj, 1, n, rng);
    const double before = obj.Evaluate(x, l1);
    const double after = obj.Evaluate(x, Concat(l1, l2));
    if (before > after + kValidatorTolerance) {
      Record(report, {x, std::move(l1), std::move(l2), -1, before - after});
    }
  }
  return report;
}

PropertyReport CheckSubmodular(const Objective& obj, int trials,
                               uint64_t rng_seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  Rng rng(rng_seed);
  std::uniform_int_distribution<int> state_dist(0, obj.num_states() - 1);
  std::uniform_int_distribution<int> item_dist(0, obj.num_items() - 1);
  const int n = obj.num_items();
  PropertyReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const int x = state_dist(rng);
    ItemList l1 = RandomList(obj, 0, 2 * n, rng);
    ItemList l2 = RandomList(obj, 1, n, rng);
    const Item s = item_dist(rng);
    const double early = MarginalBenefit(obj, x, l1, s);
    const double late = MarginalBenefit(obj, x, Concat(l1, l2), s);
    if (early < late - kValidatorTolerance) {
      Record(report, {x, std::move(l1), std::move(l2), s, late - early});
    }
  }
  return report;
}

}  // namespace scp
