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

// Built-in monotone submodular objectives. Both treat repeated item ids in a
// list as a single occurrence.

#ifndef SCP_COVERAGE_H_
#define SCP_COVERAGE_H_

#include <utility>
#include <vector>

#include "scp/objective.h"

namespace scp {

// f_x(L) = 1 - prod_{s in distinct(L)} (1 - p_x(s)).
//
// The "any success" reward: p_x(s) is the probability that item s succeeds
// in state x (a click, a collision-free seed trajectory, ...).
class ProbabilisticCoverage : public Objective {
 public:
  // success_prob[x][s] in [0, 1]; every row must have the same length.
  explicit ProbabilisticCoverage(std::vector<std::vector<double>> success_prob);

  int num_items() const override { return num_items_; }
  int num_states() const override {
    return static_cast<int>(success_prob_.size());
  }
  double Evaluate(int state, ItemSpan list) const override;

  double success_prob(int state, Item item) const {
    return success_prob_[state][item];
  }
  const std::vector<std::vector<double>>& matrix() const {
    return success_prob_;
  }

 private:
  std::vector<std::vector<double>> success_prob_;
  int num_items_ = 0;
};

// Sparse unigram multiset: (word id, count) pairs with distinct word ids.
using UnigramCounts = std::vector<std::pair<int, double>>;

// Unigram recall of a budgeted extractive summary:
//   f_x(L) = sum_w min(ref_x(w), sum_{s in kept(L)} cnt_x(s, w)) / sum_w ref_x(w)
// where kept(L) walks the distinct items of L in order and keeps an item only
// if it still fits in the byte budget. Items that do not fit stay in the list
// but contribute nothing.
class UnigramCoverage : public Objective {
 public:
  struct StateData {
    UnigramCounts reference;
    std::vector<UnigramCounts> item_unigrams;  // indexed by item
    std::vector<double> item_length;           // bytes, indexed by item
  };

  UnigramCoverage(std::vector<StateData> states, double budget);

  int num_items() const override { return num_items_; }
  int num_states() const override { return static_cast<int>(raw_.size()); }
  double Evaluate(int state, ItemSpan list) const override;
  std::optional<double> ItemLength(int state, Item item) const override;

  double budget() const { return budget_; }
  const std::vector<StateData>& states() const { return raw_; }
  UnigramCoverage WithBudget(double budget) const;

 private:
  // Item unigrams re-indexed against the state's reference vocabulary; words
  // absent from the reference are dropped since they never add recall.
  struct Compiled {
    std::vector<double> ref_counts;
    double total_mass = 0.0;
    std::vector<std::vector<std::pair<int, double>>> items;
  };

  std::vector<StateData> raw_;
  std::vector<Compiled> compiled_;
  double budget_ = 0.0;
  int num_items_ = 0;
};

}  // namespace scp

#endif  // SCP_COVERAGE_H_
