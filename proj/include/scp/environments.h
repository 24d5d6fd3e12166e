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

// Synthetic state distributions: a news-recommendation user simulator, a
// budgeted unigram-coverage summarization task, and small generators used by
// the tests.

#ifndef SCP_ENVIRONMENTS_H_
#define SCP_ENVIRONMENTS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scp/coverage.h"
#include "scp/features.h"
#include "scp/instance_io.h"
#include "scp/objective.h"

namespace scp {

struct NewsEnvConfig {
  int n_users = 75;
  int n_articles = 20;
  int d_base = 5;  // article topics
  int n_clusters = 4;
  double noise = 0.1;  // std of the Gaussian corruption of memberships
  uint64_t seed = 0;
};

// Users are soft mixtures of preference clusters. The state of a user is its
// id; the policy only sees the article features crossed with a noisy copy of
// the user's cluster memberships, plus a one-hot article id.
class NewsEnv {
 public:
  static NewsEnv Generate(const NewsEnvConfig& config);

  const NewsEnvConfig& config() const { return config_; }
  int n_users() const { return config_.n_users; }
  int n_articles() const { return config_.n_articles; }

  const Eigen::MatrixXd& article_features() const { return articles_; }
  const Eigen::MatrixXd& preferences() const { return prefs_; }
  const Eigen::MatrixXd& memberships() const { return memberships_; }
  const Eigen::MatrixXd& contexts() const { return contexts_; }

  double click_prob(int user, Item article) const {
    return objective_->success_prob(user, article);
  }
  const ProbabilisticCoverage& objective() const { return *objective_; }
  std::shared_ptr<const ProbabilisticCoverage> shared_objective() const {
    return objective_;
  }
  const ListFeaturizer& featurizer() const { return *featurizer_; }
  const StateSplits& splits() const { return splits_; }

  Instance ToInstance() const;

 private:
  NewsEnvConfig config_;
  Eigen::MatrixXd articles_;     // n_articles x d_base
  Eigen::MatrixXd prefs_;        // n_users x d_base
  Eigen::MatrixXd memberships_;  // n_users x n_clusters
  Eigen::MatrixXd contexts_;     // n_users x n_clusters
  std::shared_ptr<const ProbabilisticCoverage> objective_;
  std::shared_ptr<const ListFeaturizer> featurizer_;
  StateSplits splits_;
};

// Mean over users of prod_{distinct a in L_u} (1 - P(u clicks a)).
double FailureProbability(const ProbabilisticCoverage& obj,
                          std::span<const int> users,
                          std::span<const ItemList> lists);

struct UnigramEnvConfig {
  int n_clusters = 10;   // documents to summarize; one state each
  int n_sentences = 30;  // candidate sentences per cluster
  int vocab = 400;
  double budget = 665.0;
  uint64_t seed = 0;
};

// Every cluster has a set of key words whose counts form its reference, plus
// a few reference words no sentence contains. A handful of planted sentences
// jointly cover all key words; one of them is long and covers the most mass
// by itself. The rest are filler with at most one key word.
class UnigramEnv {
 public:
  static UnigramEnv Generate(const UnigramEnvConfig& config);

  const UnigramEnvConfig& config() const { return config_; }
  const UnigramCoverage& objective() const { return *objective_; }
  std::shared_ptr<const UnigramCoverage> shared_objective() const {
    return objective_;
  }
  const ListFeaturizer& featurizer() const { return *featurizer_; }

  // Sentence ids planted in cluster x, and the long one among them.
  const std::vector<Item>& planted(int x) const { return planted_[x]; }
  Item long_planted(int x) const { return long_planted_[x]; }
  // reachable / (reachable + unreachable) reference mass of cluster x.
  double FullCoverage(int x) const;
  double reachable_mass(int x) const { return reachable_mass_[x]; }
  double unreachable_mass(int x) const { return unreachable_mass_[x]; }
  // First 60% of the clusters train, the rest are held out.
  const StateSplits& splits() const { return splits_; }

  Instance ToInstance() const;

 private:
  UnigramEnvConfig config_;
  std::shared_ptr<const UnigramCoverage> objective_;
  std::shared_ptr<const ListFeaturizer> featurizer_;
  std::vector<std::vector<Item>> planted_;
  std::vector<Item> long_planted_;
  std::vector<double> reachable_mass_;
  std::vector<double> unreachable_mass_;
  StateSplits splits_;
};

// Success probabilities p = u^3 with u ~ U(0, 1): most items are weak, a few
// are strong.
ProbabilisticCoverage GenerateRandomCoverage(int n_states, int n_items,
                                             uint64_t seed);

// f_x(L) = sum over distinct s in L of value[x][s]; each row sums to <= 1.
class ModularObjective : public Objective {
 public:
  explicit ModularObjective(std::vector<std::vector<double>> values);

  int num_items() const override { return num_items_; }
  int num_states() const override { return static_cast<int>(values_.size()); }
  double Evaluate(int state, ItemSpan list) const override;
  double value(int state, Item item) const { return values_[state][item]; }

 private:
  std::vector<std::vector<double>> values_;
  int num_items_ = 0;
};

ModularObjective GenerateModular(int n_states, int n_items, uint64_t seed);

// v(s) = (b(s | L), max_s' b(s' | L), nuisance...), so the cost
// max b - b(s) is exactly linear in v with weights (-1, 1, 0, ...).
class BenefitFeaturizer : public Featurizer {
 public:
  BenefitFeaturizer(std::shared_ptr<const Objective> objective,
                    int nuisance_dim, uint64_t seed);

  int dim() const override { return 2 + nuisance_dim_; }
  int num_items() const override { return objective_->num_items(); }
  Eigen::MatrixXd Features(int state, ItemSpan list) const override;
  std::vector<bool> ListDependentMask() const override;

 private:
  std::shared_ptr<const Objective> objective_;
  int nuisance_dim_;
  std::vector<Eigen::MatrixXd> nuisance_;  // per state, items x nuisance_dim
};

}  // namespace scp

#endif  // SCP_ENVIRONMENTS_H_
