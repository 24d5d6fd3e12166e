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

#include "scp/features.h"

#include <limits>
#include <stdexcept>

namespace scp {

BaseFeatureTable::BaseFeatureTable(std::vector<Eigen::MatrixXd> per_state)
    : per_state_(std::move(per_state)) {
  if (per_state_.empty()) throw std::invalid_argument("no feature states");
  num_items_ = static_cast<int>(per_state_.front().rows());
  base_dim_ = static_cast<int>(per_state_.front().cols());
  for (const Eigen::MatrixXd& m : per_state_) {
    if (m.rows() != num_items_ || m.cols() != base_dim_) {
      throw std::invalid_argument("base feature tables differ in shape");
    }
    if (!m.allFinite()) throw std::invalid_argument("non-finite base feature");
  }
}

Eigen::VectorXd BuildFeatures(const Eigen::MatrixXd& base, ItemSpan list,
                              Item item) {
  const int d = static_cast<int>(base.cols());
  if (item < 0 || item >= base.rows()) {
    throw std::domain_error("item outside feature table");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ListFeatureDim(d));
  const auto row = base.row(item).transpose();
  v.head(d) = row;
  if (!list.empty()) {
    Eigen::VectorXd min_dist =
        Eigen::VectorXd::Constant(d, std::numeric_limits<double>::infinity());
    Eigen::VectorXd sum_dist = Eigen::VectorXd::Zero(d);
    for (Item s : list) {
      const Eigen::VectorXd diff = (row - base.row(s).transpose()).cwiseAbs();
      min_dist = min_dist.cwiseMin(diff);
      sum_dist += diff;
    }
    v.segment(d, d) = min_dist;
    v.segment(2 * d, d) = sum_dist / static_cast<double>(list.size());
  }
  v(3 * d) = 1.0;
  v(3 * d + 1) = list.empty() ? 1.0 : 0.0;
  return v;
}

ListFeaturizer::ListFeaturizer(BaseFeatureTable table)
    : table_(std::move(table)) {}

Eigen::MatrixXd ListFeaturizer::Features(int state, ItemSpan list) const {
  if (state < 0 || state >= table_.num_states()) {
    throw std::domain_error("state outside feature table");
  }
  const Eigen::MatrixXd& base = table_.state(state);
  Eigen::MatrixXd out(num_items(), dim());
  for (int s = 0; s < num_items(); ++s) {
    out.row(s) = BuildFeatures(base, list, s).transpose();
  }
  return out;
}

std::vector<bool> ListFeaturizer::ListDependentMask() const {
  const int d = table_.base_dim();
  std::vector<bool> mask(dim(), false);
  for (int j = d; j < 3 * d; ++j) mask[j] = true;
  mask[3 * d + 1] = true;
  return mask;
}

}  // namespace scp
