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

// Randomized checks of the monotone and submodular properties. Violations
// are reported, never thrown.

#ifndef SCP_VALIDATORS_H_
#define SCP_VALIDATORS_H_

#include <cstdint>
#include <vector>

#include "scp/objective.h"

namespace scp {

inline constexpr double kValidatorTolerance = 1e-12;

struct PropertyViolation {
  int state = 0;
  ItemList first;   // L1
  ItemList second;  // L2
  Item item = -1;   // only set by the submodularity check
  double amount = 0.0;
};

struct PropertyReport {
  int trials = 0;
  int violations = 0;
  double worst = 0.0;
  // At most a handful of counterexamples are kept.
  std::vector<PropertyViolation> examples;

  bool ok() const { return violations == 0; }
};

// Samples (x, L1, L2) with L1, L2 drawn uniformly with |L1| <= 2|S| and
// 1 <= |L2| <= |S|, and checks f(L1) <= f(L1 + L2) + kValidatorTolerance.
PropertyReport CheckMonotone(const Objective& obj, int trials,
                             uint64_t rng_seed);

// Same sampling plus an item s; checks
// b(s | L1) >= b(s | L1 + L2) - kValidatorTolerance.
PropertyReport CheckSubmodular(const Objective& obj, int trials,
                               uint64_t rng_seed);

}  // namespace scp

#endif  // SCP_VALIDATORS_H_
