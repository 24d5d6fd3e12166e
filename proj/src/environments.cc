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

#include "scp/environments.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace scp {
namespace {

// Bytes per token, a word plus its separator.
constexpr double kBytesPerToken = 6.0;

// Planted sentence shape: the long sentence covers half of the key words and
// is padded so that its mass per byte is below that of the short ones.
constexpr int kKeyWords = 24;
constexpr int kShortPlanted = 3;
constexpr int kUnreachableWords = 4;
constexpr int kLongPadding = 52;

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

void AddFiller(UnigramCounts& sentence, const std::vector<int>& filler,
               int tokens, Rng& rng) {
  for (int i = 0; i < tokens; ++i) {
    sentence.emplace_back(filler[UniformInt(rng, 0, filler.size() - 1)], 1.0);
  }
}

double TokenCount(const UnigramCounts& sentence) {
  double n = 0.0;
  for (const auto& [w, c] : sentence) n += c;
  return n;
}

}  // namespace

NewsEnv NewsEnv::Generate(const NewsEnvConfig& config) {
  if (config.n_users < 1 || config.n_articles < 1 || config.d_base < 1 ||
      config.n_clusters < 1) {
    throw std::invalid_argument("news env sizes must be >= 1");
  }
  if (!(config.noise >= 0.0)) throw std::invalid_argument("noise must be >= 0");
  Rng rng(config.seed);
  NewsEnv env;
  env.config_ = config;
  const int d = config.d_base;
  const int n_c = config.n_clusters;

  env.articles_.resize(config.n_articles, d);
  for (int a = 0; a < config.n_articles; ++a) {
    const int topic = UniformInt(rng, 0, d - 1);
    for (int j = 0; j < d; ++j) {
      env.articles_(a, j) =
          j == topic ? Uniform(rng, 0.6, 1.0) : Uniform(rng, 0.0, 0.15);
    }
  }

  Eigen::MatrixXd cluster_prefs(n_c, d);
  for (int c = 0; c < n_c; ++c) {
    for (int j = 0; j < d; ++j) cluster_prefs(c, j) = Uniform(rng, 0.0, 0.1);
    cluster_prefs(c, c % d) += 0.6;
    if (Uniform(rng, 0.0, 1.0) < 0.5) {
      cluster_prefs(c, UniformInt(rng, 0, d - 1)) += 0.25;
    }
  }

  std::gamma_distribution<double> gamma(0.5, 1.0);
  std::normal_distribution<double> noise(0.0, config.noise);
  env.memberships_.resize(config.n_users, n_c);
  env.contexts_.resize(config.n_users, n_c);
  for (int u = 0; u < config.n_users; ++u) {
    double total = 0.0;
    for (int c = 0; c < n_c; ++c) {
      env.memberships_(u, c) = gamma(rng) + 1e-12;
      total += env.memberships_(u, c);
    }
    env.memberships_.row(u) /= total;
    double ctx_total = 0.0;
    for (int c = 0; c < n_c; ++c) {
      const double v =
          std::max(0.0, env.memberships_(u, c) +
                            (config.noise > 0.0 ? noise(rng) : 0.0));
      env.contexts_(u, c) = v;
      ctx_total += v;
    }
    if (ctx_total > 0.0) {
      env.contexts_.row(u) /= ctx_total;
    } else {
      env.contexts_.row(u).setConstant(1.0 / n_c);
    }
  }
  env.prefs_ = env.memberships_ * cluster_prefs;

  std::vector<std::vector<double>> probs(config.n_users,
                                         std::vector<double>(config.n_articles));
  std::vector<Eigen::MatrixXd> base(config.n_users);
  for (int u = 0; u < config.n_users; ++u) {
    // Topic block, topic block per noisy cluster weight, article one-hot.
    // Same-topic articles look alike in the first two; the one-hot lets the
    // distance features separate a repeat from a near-duplicate.
    base[u] = Eigen::MatrixXd::Zero(config.n_articles,
                                    (n_c + 1) * d + config.n_articles);
    for (int a = 0; a < config.n_articles; ++a) {
      probs[u][a] =
          std::clamp(env.prefs_.row(u).dot(env.articles_.row(a)), 0.0, 1.0);
      base[u].row(a).head(d) = env.articles_.row(a);
      for (int c = 0; c < n_c; ++c) {
        base[u].row(a).segment((c + 1) * d, d) =
            env.contexts_(u, c) * env.articles_.row(a);
      }
      base[u](a, (n_c + 1) * d + a) = 1.0;
    }
  }
  env.objective_ = std::make_shared<ProbabilisticCoverage>(std::move(probs));
  env.featurizer_ =
      std::make_shared<ListFeaturizer>(BaseFeatureTable(std::move(base)));

  std::vector<int> perm(config.n_users);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const int n_train =
      static_cast<int>(std::lround(config.n_users * 40.0 / 75.0));
  const int n_val = static_cast<int>(std::lround(config.n_users * 20.0 / 75.0));
  env.splits_.train.assign(perm.begin(), perm.begin() + n_train);
  env.splits_.validation.assign(perm.begin() + n_train,
                                perm.begin() + n_train + n_val);
  env.splits_.test.assign(perm.begin() + n_train + n_val, perm.end());
  return env;
}

Instance NewsEnv::ToInstance() const {
  Instance inst;
  inst.objective = objective_;
  inst.base_features = featurizer_->table();
  inst.splits = splits_;
  inst.metadata = {{"generator", "news"},
                   {"n_users", config_.n_users},
                   {"n_articles", config_.n_articles},
                   {"d_base", config_.d_base},
                   {"n_clusters", config_.n_clusters},
                   {"noise", config_.noise},
                   {"seed", config_.seed}};
  return inst;
}

double FailureProbability(const ProbabilisticCoverage& obj,
                          std::span<const int> users,
                          std::span<const ItemList> lists) {
  if (users.size() != lists.size()) {
    throw std::invalid_argument("one list per user expected");
  }
  if (users.empty()) throw std::invalid_argument("no users");
  double total = 0.0;
  for (size_t j = 0; j < users.size(); ++j) {
    total += 1.0 - obj.Evaluate(users[j], lists[j]);
  }
  return total / users.size();
}

UnigramEnv UnigramEnv::Generate(const UnigramEnvConfig& config) {
  if (config.n_clusters < 1 || !(config.budget > 0.0)) {
    throw std::invalid_argument("unigram env sizes must be >= 1");
  }
  if (config.n_sentences < kShortPlanted + 1) {
    throw std::invalid_argument("unigram env needs >= 4 sentences per cluster");
  }
  if (config.vocab < 2 * kKeyWords) {
    throw std::invalid_argument("unigram env vocabulary is too small");
  }
  Rng rng(config.seed);
  UnigramEnv env;
  env.config_ = config;
  std::vector<UnigramCoverage::StateData> states;
  std::vector<Eigen::MatrixXd> base;

  for (int x = 0; x < config.n_clusters; ++x) {
    std::vector<int> words(config.vocab);
    std::iota(words.begin(), words.end(), 0);
    std::shuffle(words.begin(), words.end(), rng);
    const std::vector<int> keys(words.begin(), words.begin() + kKeyWords);
    const std::vector<int> filler(words.begin() + kKeyWords, words.end());

    UnigramCoverage::StateData st;
    std::vector<double> key_count(kKeyWords);
    double reachable = 0.0;
    for (int i = 0; i < kKeyWords; ++i) {
      key_count[i] = UniformInt(rng, 1, 2);
      st.reference.emplace_back(keys[i], key_count[i]);
      reachable += key_count[i];
    }
    // Reference words outside the vocabulary no sentence can cover.
    for (int i = 0; i < kUnreachableWords; ++i) {
      st.reference.emplace_back(config.vocab + x * kUnreachableWords + i, 1.0);
    }

    std::vector<UnigramCounts> sentences;
    UnigramCounts long_sentence;
    for (int i = 0; i < kKeyWords / 2; ++i) {
      long_sentence.emplace_back(keys[i], key_count[i]);
    }
    AddFiller(long_sentence, filler, kLongPadding, rng);
    sentences.push_back(std::move(long_sentence));
    const int per_short = (kKeyWords / 2) / kShortPlanted;
    for (int j = 0; j < kShortPlanted; ++j) {
      UnigramCounts s;
      for (int i = 0; i < per_short; ++i) {
        const int idx = kKeyWords / 2 + j * per_short + i;
        s.emplace_back(keys[idx], key_count[idx]);
      }
      AddFiller(s, filler, UniformInt(rng, 8, 12), rng);
      sentences.push_back(std::move(s));
    }
    while (static_cast<int>(sentences.size()) < config.n_sentences) {
      UnigramCounts s;
      if (UniformInt(rng, 0, 1) == 1) {
        s.emplace_back(keys[UniformInt(rng, 0, kKeyWords - 1)], 1.0);
      }
      AddFiller(s, filler, UniformInt(rng, 10, 32), rng);
      sentences.push_back(std::move(s));
    }

    // Shuffle sentence positions; remember where the planted ones went.
    std::vector<int> order(sentences.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Item> planted;
    Item long_id = -1;
    for (size_t pos = 0; pos < order.size(); ++pos) {
      const UnigramCounts& s = sentences[order[pos]];
      st.item_unigrams.push_back(s);
      st.item_length.push_back(kBytesPerToken * TokenCount(s));
      if (order[pos] <= kShortPlanted) planted.push_back(static_cast<Item>(pos));
      if (order[pos] == 0) long_id = static_cast<Item>(pos);
    }
    env.planted_.push_back(std::move(planted));
    env.long_planted_.push_back(long_id);
    env.reachable_mass_.push_back(reachable);
    env.unreachable_mass_.push_back(kUnreachableWords);
    states.push_back(std::move(st));
  }
  env.objective_ =
      std::make_shared<UnigramCoverage>(std::move(states), config.budget);

  // Quality block: coverage mass alone, length relative to the budget, and
  // position in the document.
  const UnigramCoverage& obj = *env.objective_;
  const UnigramCoverage unbounded = obj.WithBudget(1e300);
  const int n = config.n_sentences;
  for (int x = 0; x < config.n_clusters; ++x) {
    Eigen::MatrixXd m(n, 3);
    for (Item s = 0; s < n; ++s) {
      const Item single[] = {s};
      m(s, 0) = unbounded.Evaluate(x, single);
      m(s, 1) = *obj.ItemLength(x, s) / config.budget;
      m(s, 2) = n > 1 ? static_cast<double>(s) / (n - 1) : 0.0;
    }
    base.push_back(std::move(m));
  }
  env.featurizer_ =
      std::make_shared<ListFeaturizer>(BaseFeatureTable(std::move(base)));

  const int n_train = std::max(
      1, static_cast<int>(std::lround(config.n_clusters * 0.6)));
  for (int x = 0; x < config.n_clusters; ++x) {
    (x < n_train ? env.splits_.train : env.splits_.test).push_back(x);
  }
  if (env.splits_.test.empty()) env.splits_.test = env.splits_.train;
  return env;
}

double UnigramEnv::FullCoverage(int x) const {
  return reachable_mass_[x] / (reachable_mass_[x] + unreachable_mass_[x]);
}

Instance UnigramEnv::ToInstance() const {
  Instance inst;
  inst.objective = objective_;
  inst.base_features = featurizer_->table();
  inst.splits = splits_;
  inst.metadata = {{"generator", "unigram"},
                   {"n_clusters", config_.n_clusters},
                   {"n_sentences", config_.n_sentences},
                   {"vocab", config_.vocab},
                   {"budget", config_.budget},
                   {"seed", config_.seed}};
  return inst;
}

ProbabilisticCoverage GenerateRandomCoverage(int n_states, int n_items,
                                             uint64_t seed) {
  if (n_states < 1 || n_items < 1) {
    throw std::invalid_argument("random coverage sizes must be >= 1");
  }
  Rng rng(seed);
  std::vector<std::vector<double>> p(n_states, std::vector<double>(n_items));
  for (auto& row : p) {
    for (double& v : row) v = std::pow(Uniform(rng, 0.0, 1.0), 3);
  }
  return ProbabilisticCoverage(std::move(p));
}

ModularObjective::ModularObjective(std::vector<std::vector<double>> values)
    : values_(std::move(values)) {
  if (values_.empty() || values_.front().empty()) {
    throw std::invalid_argument("ModularObjective needs states and items");
  }
  num_items_ = static_cast<int>(values_.front().size());
  for (const auto& row : values_) {
    if (static_cast<int>(row.size()) != num_items_) {
      throw std::invalid_argument("ragged modular value matrix");
    }
    double total = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) throw std::invalid_argument("negative modular value");
      total += v;
    }
    if (total > 1.0 + 1e-12) {
      throw std::invalid_argument("modular values must sum to <= 1");
    }
  }
}

double ModularObjective::Evaluate(int state, ItemSpan list) const {
  CheckState(state);
  double total = 0.0;
  for (size_t i = 0; i < list.size(); ++i) {
    CheckItem(list[i]);
    if (std::find(list.begin(), list.begin() + i, list[i]) !=
        list.begin() + i) {
      continue;
    }
    total += values_[state][list[i]];
  }
  // Rows sum to one; rounding can overshoot by an ulp.
  return std::min(total, 1.0);
}

ModularObjective GenerateModular(int n_states, int n_items, uint64_t seed) {
  if (n_states < 1 || n_items < 1) {
    throw std::invalid_argument("modular sizes must be >= 1");
  }
  Rng rng(seed);
  std::vector<std::vector<double>> values(n_states,
                                          std::vector<double>(n_items));
  for (auto& row : values) {
    double total = 0.0;
    for (double& v : row) {
      v = Uniform(rng, 0.0, 1.0);
      total += v;
    }
    for (double& v : row) v /= total;
  }
  return ModularObjective(std::move(values));
}

BenefitFeaturizer::BenefitFeaturizer(std::shared_ptr<const Objective> objective,
                                     int nuisance_dim, uint64_t seed)
    : objective_(std::move(objective)), nuisance_dim_(nuisance_dim) {
  if (objective_ == nullptr) throw std::invalid_argument("null objective");
  if (nuisance_dim_ < 0) throw std::invalid_argument("nuisance_dim < 0");
  Rng rng(seed);
  for (int x = 0; x < objective_->num_states(); ++x) {
    Eigen::MatrixXd m(objective_->num_items(), nuisance_dim_);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = Uniform(rng, 0.0, 1.0);
    }
    nuisance_.push_back(std::move(m));
  }
}

Eigen::MatrixXd BenefitFeaturizer::Features(int state, ItemSpan list) const {
  objective_->CheckState(state);
  const std::vector<double> b = AllMarginalBenefits(*objective_, state, list);
  const double best = *std::max_element(b.begin(), b.end());
  Eigen::MatrixXd out(num_items(), dim());
  for (int s = 0; s < num_items(); ++s) {
    out(s, 0) = b[s];
    out(s, 1) = best;
    out.row(s).tail(nuisance_dim_) = nuisance_[state].row(s);
  }
  return out;
}

std::vector<bool> BenefitFeaturizer::ListDependentMask() const {
  std::vector<bool> mask(dim(), false);
  mask[0] = mask[1] = true;
  return mask;
}

}  // namespace scp
