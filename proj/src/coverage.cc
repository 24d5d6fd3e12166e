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

#include "scp/coverage.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace scp {
namespace {

// True if list[i] already occurred in list[0, i).
bool SeenBefore(ItemSpan list, size_t i) {
  for (size_t j = 0; j < i; ++j) {
    if (list[j] == list[i]) return true;
  }
  return false;
}

}  // namespace

ProbabilisticCoverage::ProbabilisticCoverage(
    std::vector<std::vector<double>> success_prob)
    : success_prob_(std::move(success_prob)) {
  if (success_prob_.empty()) {
    throw std::invalid_argument("ProbabilisticCoverage needs >= 1 state");
  }
  num_items_ = static_cast<int>(success_prob_.front().size());
  if (num_items_ == 0) {
    throw std::invalid_argument("ProbabilisticCoverage needs >= 1 item");
  }
  for (const auto& row : success_prob_) {
    if (static_cast<int>(row.size()) != num_items_) {
      throw std::invalid_argument("ragged success probability matrix");
    }
    for (double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("success probability outside [0, 1]: " +
                                    std::to_string(p));
      }
    }
  }
}

double ProbabilisticCoverage::Evaluate(int state, ItemSpan list) const {
  CheckState(state);
  const std::vector<double>& row = success_prob_[state];
  double miss = 1.0;
  for (size_t i = 0; i < list.size(); ++i) {
    CheckItem(list[i]);
    if (SeenBefore(list, i)) continue;
    miss *= 1.0 - row[list[i]];
  }
  return 1.0 - miss;
}

UnigramCoverage::UnigramCoverage(std::vector<StateData> states, double budget)
    : raw_(std::move(states)), budget_(budget) {
  if (raw_.empty()) throw std::invalid_argument("UnigramCoverage: no states");
  if (!(budget_ > 0.0)) {
    throw std::invalid_argument("UnigramCoverage: budget must be positive");
  }
  num_items_ = static_cast<int>(raw_.front().item_unigrams.size());
  if (num_items_ == 0) throw std::invalid_argument("UnigramCoverage: no items");

  compiled_.reserve(raw_.size());
  for (const StateData& st : raw_) {
    if (static_cast<int>(st.item_unigrams.size()) != num_items_ ||
        static_cast<int>(st.item_length.size()) != num_items_) {
      throw std::invalid_argument("UnigramCoverage: inconsistent item count");
    }
    Compiled c;
    std::unordered_map<int, int> local;
    for (const auto& [word, count] : st.reference) {
      if (count < 0.0) throw std::invalid_argument("negative reference count");
      if (count == 0.0) continue;
      local.emplace(word, static_cast<int>(c.ref_counts.size()));
      c.ref_counts.push_back(count);
      c.total_mass += count;
    }
    if (!(c.total_mass > 0.0)) {
      throw std::invalid_argument("UnigramCoverage: empty reference");
    }
    c.items.resize(num_items_);
    for (int s = 0; s < num_items_; ++s) {
      if (!(st.item_length[s] > 0.0)) {
        throw std::invalid_argument("UnigramCoverage: non-positive length");
      }
      for (const auto& [word, count] : st.item_unigrams[s]) {
        auto it = local.find(word);
        if (it != local.end() && count > 0.0) {
          c.items[s].emplace_back(it->second, count);
        }
      }
    }
    compiled_.push_back(std::move(c));
  }
}

double UnigramCoverage::Evaluate(int state, ItemSpan list) const {
  CheckState(state);
  const Compiled& c = compiled_[state];
  const StateData& st = raw_[state];
  std::vector<double> covered(c.ref_counts.size(), 0.0);
  double used = 0.0;
  for (size_t i = 0; i < list.size(); ++i) {
    const Item s = list[i];
    CheckItem(s);
    if (SeenBefore(list, i)) continue;
    if (used + st.item_length[s] > budget_) continue;
    used += st.item_length[s];
    for (const auto& [w, count] : c.items[s]) covered[w] += count;
  }
  double mass = 0.0;
  for (size_t w = 0; w < covered.size(); ++w) {
    mass += std::min(covered[w], c.ref_counts[w]);
  }
  return std::min(mass / c.total_mass, 1.0);
}

std::optional<double> UnigramCoverage::ItemLength(int state, Item item) const {
  CheckState(state);
  CheckItem(item);
  return raw_[state].item_length[item];
}

UnigramCoverage UnigramCoverage::WithBudget(double budget) const {
  return UnigramCoverage(raw_, budget);
}

}  // namespace scp
