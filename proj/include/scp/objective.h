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

#ifndef SCP_OBJECTIVE_H_
#define SCP_OBJECTIVE_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace scp {

// Items are indices into the ground set S = {0, ..., |S|-1}.
using Item = int;

// Ordered list of items. Duplicates are allowed; lists generalize sets.
using ItemList = std::vector<Item>;
using ItemSpan = std::span<const Item>;

using Rng = std::mt19937_64;

// Returns the first `n` items of `list`.
inline ItemSpan Prefix(ItemSpan list, size_t n) { return list.first(n); }

inline ItemList Concat(ItemSpan a, ItemSpan b) {
  ItemList out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// A family of reward functions f_x over item lists, one per state x.
//
// Implementations must satisfy, for every state:
//   Evaluate(x, {}) == 0, Evaluate(x, L) in [0, 1],
//   monotone and submodular with respect to appending items.
// Objectives are immutable once built and may be evaluated concurrently.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int num_items() const = 0;
  virtual int num_states() const = 0;

  virtual double Evaluate(int state, ItemSpan list) const = 0;

  // Cost l(s) of an item in budgeted objectives; nullopt when unbudgeted.
  virtual std::optional<double> ItemLength(int /*state*/, Item /*item*/) const {
    return std::nullopt;
  }

  // Throws std::domain_error when `item` is outside the ground set.
  void CheckItem(Item item) const;
  void CheckState(int state) const;
};

// b(s | L, x) = f_x(L + s) - f_x(L).
double MarginalBenefit(const Objective& obj, int state, ItemSpan list,
                       Item item);

// b(s | L, x) / l(s) for budgeted objectives. Throws std::domain_error if the
// objective has no item lengths or l(s) is not positive.
double NormalizedBenefit(const Objective& obj, int state, ItemSpan list,
                         Item item);

// Marginal benefit of every item in the ground set after `list`; f_x(list) is
// evaluated once.
std::vector<double> AllMarginalBenefits(const Objective& obj, int state,
                                        ItemSpan list);

// A finite distribution over states: ids with probabilities summing to one.
// Used both for the true state distribution D and for empirical samples.
struct WeightedStates {
  std::vector<int> ids;
  std::vector<double> weights;

  size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
};

WeightedStates UniformStates(std::span<const int> ids);
WeightedStates AllStatesUniform(const Objective& obj);
// Collapses a sequence of sampled states into a weighted multiset.
WeightedStates EmpiricalStates(std::span<const int> samples);

int SampleState(const WeightedStates& states, Rng& rng);

// F(L) = E_{x ~ states}[f_x(L)].
double ExpectedValue(const Objective& obj, const WeightedStates& states,
                     ItemSpan list);

}  // namespace scp

#endif  // SCP_OBJECTIVE_H_
