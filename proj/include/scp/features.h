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

#ifndef SCP_FEATURES_H_
#define SCP_FEATURES_H_

#include <vector>

#include <Eigen/Dense>

#include "scp/objective.h"

namespace scp {

// Maps (state, partial list) to one feature row per candidate item.
class Featurizer {
 public:
  virtual ~Featurizer() = default;
  virtual int dim() const = 0;
  virtual int num_items() const = 0;
  // Row s holds v(s): the features for appending item s to `list`.
  virtual Eigen::MatrixXd Features(int state, ItemSpan list) const = 0;
  // Coordinates that depend on the partial list. Zeroing a policy's weights
  // on these yields a state-only policy.
  virtual std::vector<bool> ListDependentMask() const {
    return std::vector<bool>(dim(), false);
  }
};

// Per-state base feature rows (num_items x base_dim), list-independent.
class BaseFeatureTable {
 public:
  BaseFeatureTable() = default;
  explicit BaseFeatureTable(std::vector<Eigen::MatrixXd> per_state);

  int num_states() const { return static_cast<int>(per_state_.size()); }
  int num_items() const { return num_items_; }
  int base_dim() const { return base_dim_; }
  const Eigen::MatrixXd& state(int x) const { return per_state_[x]; }

 private:
  std::vector<Eigen::MatrixXd> per_state_;
  int num_items_ = 0;
  int base_dim_ = 0;
};

// Layout of BuildFeatures output for base dimension d:
//   [ base (d) | min |diff| to list (d) | mean |diff| to list (d) | 1 | first ]
inline int ListFeatureDim(int base_dim) { return 3 * base_dim + 2; }

// Features for appending `item`: its base row, the per-coordinate minimum and
// mean absolute distance to the base rows of the list's items (zeros for an
// empty list), a constant bias, and an indicator of the first position.
Eigen::VectorXd BuildFeatures(const Eigen::MatrixXd& base, ItemSpan list,
                              Item item);

class ListFeaturizer : public Featurizer {
 public:
  explicit ListFeaturizer(BaseFeatureTable table);

  int dim() const override { return ListFeatureDim(table_.base_dim()); }
  int num_items() const override { return table_.num_items(); }
  Eigen::MatrixXd Features(int state, ItemSpan list) const override;
  std::vector<bool> ListDependentMask() const override;

  const BaseFeatureTable& table() const { return table_; }

 private:
  BaseFeatureTable table_;
};

}  // namespace scp

#endif  // SCP_FEATURES_H_
