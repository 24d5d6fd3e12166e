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

#include <algorithm>
#include <memory>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "scp/context_free.h"
#include "scp/environments.h"
#include "scp/instance_io.h"
#include "scp/validators.h"

namespace scp {
namespace {

NewsEnv DefaultNews(uint64_t seed) {
  NewsEnvConfig c;
  c.seed = seed;
  return NewsEnv::Generate(c);
}

TEST(NewsEnvTest, DeterministicGivenSeed) {
  const std::string a = InstanceToJson(DefaultNews(3).ToInstance()).dump();
  const std::string b = InstanceToJson(DefaultNews(3).ToInstance()).dump();
  const std::string c = InstanceToJson(DefaultNews(4).ToInstance()).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(NewsEnvTest, ClickProbabilitiesAndShapes) {
  const NewsEnv env = DefaultNews(5);
  EXPECT_EQ(env.n_users(), 75);
  EXPECT_EQ(env.article_features().rows(), 20);
  EXPECT_GE(env.article_features().minCoeff(), 0.0);
  EXPECT_LE(env.article_features().maxCoeff(), 1.0);
  for (int u = 0; u < env.n_users(); ++u) {
    EXPECT_NEAR(env.contexts().row(u).sum(), 1.0, 1e-12);
    EXPECT_GE(env.contexts().row(u).minCoeff(), 0.0);
    for (Item a = 0; a < env.n_articles(); ++a) {
      const double p = env.click_prob(u, a);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
  EXPECT_EQ(env.featurizer().num_items(), 20);
  EXPECT_TRUE(env.featurizer().Features(0, ItemList{1, 2}).allFinite());
}

TEST(NewsEnvTest, SplitsAre40_20_15) {
  const NewsEnv env = DefaultNews(6);
  const StateSplits& s = env.splits();
  EXPECT_EQ(s.train.size(), 40u);
  EXPECT_EQ(s.validation.size(), 20u);
  EXPECT_EQ(s.test.size(), 15u);
  std::set<int> all(s.train.begin(), s.train.end());
  all.insert(s.validation.begin(), s.validation.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 75u);
}

TEST(NewsEnvTest, RejectsEmptySizes) {
  NewsEnvConfig c;
  c.n_users = 0;
  EXPECT_THROW(NewsEnv::Generate(c), std::invalid_argument);
}

TEST(FailureProbabilityTest, EdgeCases) {
  const ProbabilisticCoverage obj({{0.3, 1.0}, {0.5, 0.2}});
  const std::vector<int> users = {0, 1};
  EXPECT_DOUBLE_EQ(FailureProbability(obj, users, std::vector<ItemList>{{}, {}}),
                   1.0);
  const std::vector<ItemList> lists = {{1}, {0, 0}};
  // User 0 clicks surely; user 1 fails with 0.5.
  EXPECT_DOUBLE_EQ(FailureProbability(obj, std::vector<int>{0},
                                      std::vector<ItemList>{{1}}),
                   0.0);
  EXPECT_DOUBLE_EQ(FailureProbability(obj, users, lists), 0.25);
}

TEST(FailureProbabilityTest, MatchesOneMinusCoverage) {
  const NewsEnv env = DefaultNews(7);
  const std::vector<int>& users = env.splits().test;
  Rng rng(2);
  std::uniform_int_distribution<int> item(0, env.n_articles() - 1);
  const ItemList fixed = {item(rng), item(rng), item(rng)};
  const std::vector<ItemList> lists(users.size(), fixed);
  const double fail = FailureProbability(env.objective(), users, lists);
  EXPECT_NEAR(fail, 1.0 - ExpectedValue(env.objective(), UniformStates(users), fixed),
              1e-12);
  // Degenerate distributions make the Monte Carlo estimate exact.
  std::vector<double> dist(env.n_articles(), 0.0);
  dist[fixed[0]] = 1.0;
  const McEstimate e =
      EvaluateDistribution(env.objective(), UniformStates(users), dist, 2, 50, rng);
  EXPECT_NEAR(FailureProbability(env.objective(), users,
                                 std::vector<ItemList>(users.size(), {fixed[0]})),
              1.0 - e.mean, 1e-12);
}

TEST(NewsEnvTest, BestPairBeatsBestSingle) {
  NewsEnvConfig c;
  c.n_articles = 10;
  c.seed = 8;
  const NewsEnv env = NewsEnv::Generate(c);
  const WeightedStates users = UniformStates(env.splits().train);
  const double single = 1.0 - BruteForceOpt(env.objective(), users, 1).value;
  const double pair = 1.0 - BruteForceOpt(env.objective(), users, 2).value;
  EXPECT_GE(single, pair);
}

TEST(UnigramEnvTest, EmptySummaryAndFullCoverage) {
  UnigramEnvConfig c;
  c.seed = 9;
  const UnigramEnv env = UnigramEnv::Generate(c);
  const UnigramCoverage unbounded = env.objective().WithBudget(1e300);
  ItemList everything(env.objective().num_items());
  std::iota(everything.begin(), everything.end(), 0);
  for (int x = 0; x < env.objective().num_states(); ++x) {
    EXPECT_EQ(env.objective().Evaluate(x, {}), 0.0);
    const double full = env.reachable_mass(x) /
                        (env.reachable_mass(x) + env.unreachable_mass(x));
    EXPECT_NEAR(env.FullCoverage(x), full, 1e-15);
    EXPECT_NEAR(unbounded.Evaluate(x, everything), full, 1e-12);
    // The planted sentences alone reach the same mass.
    EXPECT_NEAR(unbounded.Evaluate(x, env.planted(x)), full, 1e-12);
  }
  EXPECT_DOUBLE_EQ(env.objective().budget(), 665.0);
}

TEST(UnigramEnvTest, LengthNormalizationChangesTheChoice) {
  UnigramEnvConfig c;
  c.seed = 10;
  const UnigramEnv env = UnigramEnv::Generate(c);
  const UnigramCoverage& obj = env.objective();
  int differs = 0;
  for (int x = 0; x < obj.num_states(); ++x) {
    Item raw_best = 0;
    Item norm_best = 0;
    for (Item s = 1; s < obj.num_items(); ++s) {
      if (MarginalBenefit(obj, x, {}, s) > MarginalBenefit(obj, x, {}, raw_best)) {
        raw_best = s;
      }
      if (NormalizedBenefit(obj, x, {}, s) >
          NormalizedBenefit(obj, x, {}, norm_best)) {
        norm_best = s;
      }
    }
    EXPECT_EQ(raw_best, env.long_planted(x));
    differs += raw_best != norm_best;
  }
  EXPECT_GE(differs, 1);
}

TEST(UnigramEnvTest, DeterministicAndSplit) {
  UnigramEnvConfig c;
  c.seed = 11;
  const std::string a = InstanceToJson(UnigramEnv::Generate(c).ToInstance()).dump();
  const std::string b = InstanceToJson(UnigramEnv::Generate(c).ToInstance()).dump();
  EXPECT_EQ(a, b);
  const UnigramEnv env = UnigramEnv::Generate(c);
  EXPECT_EQ(env.splits().train.size(), 6u);
  EXPECT_EQ(env.splits().test.size(), 4u);
  EXPECT_TRUE(env.featurizer().Features(0, ItemList{0, 5}).allFinite());
}

TEST(EnvironmentValidatorTest, NoViolations) {
  const NewsEnv news = DefaultNews(12);
  UnigramEnvConfig c;
  c.seed = 12;
  const UnigramEnv uni = UnigramEnv::Generate(c);
  for (const Objective* obj :
       std::initializer_list<const Objective*>{&news.objective(), &uni.objective()}) {
    EXPECT_EQ(CheckMonotone(*obj, 2000, 1).violations, 0);
    EXPECT_EQ(CheckSubmodular(*obj, 2000, 2).violations, 0);
  }
}

TEST(ModularTest, RowsAndValues) {
  const ModularObjective obj = GenerateModular(4, 6, 13);
  for (int x = 0; x < 4; ++x) {
    ItemList all(6);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_NEAR(obj.Evaluate(x, all), 1.0, 1e-12);
    EXPECT_NEAR(obj.Evaluate(x, ItemList{2, 2, 3}), obj.value(x, 2) + obj.value(x, 3),
                1e-15);
  }
  EXPECT_THROW(ModularObjective({{0.7, 0.6}}), std::invalid_argument);
}

TEST(BenefitFeaturizerTest, CostsAreLinear) {
  auto obj = std::make_shared<ModularObjective>(GenerateModular(3, 5, 14));
  const BenefitFeaturizer f(obj, 2, 15);
  EXPECT_EQ(f.dim(), 4);
  const ItemList list = {1, 3};
  const Eigen::MatrixXd v = f.Features(2, list);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(4);
  h(0) = -1.0;
  h(1) = 1.0;
  const std::vector<double> b = AllMarginalBenefits(*obj, 2, list);
  const double best = *std::max_element(b.begin(), b.end());
  for (Item s = 0; s < 5; ++s) {
    EXPECT_NEAR(v.row(s).dot(h), best - b[s], 1e-15);
  }
  const std::vector<bool> mask = f.ListDependentMask();
  EXPECT_TRUE(mask[0] && mask[1]);
  EXPECT_FALSE(mask[2] || mask[3]);
}

TEST(RandomCoverageTest, ShapeAndRange) {
  const ProbabilisticCoverage obj = GenerateRandomCoverage(7, 9, 16);
  EXPECT_EQ(obj.num_states(), 7);
  EXPECT_EQ(obj.num_items(), 9);
  for (const auto& row : obj.matrix()) {
    for (double p : row) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
}

}  // namespace
}  // namespace scp
