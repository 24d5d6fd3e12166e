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
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "scp/context_free.h"
#include "scp/contextual.h"
#include "scp/coverage.h"
#include "scp/environments.h"
#include "scp/features.h"

namespace scp {
namespace {

Eigen::MatrixXd Gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g;
  return Eigen::MatrixXd::NullaryExpr(rows, cols, [&]() { return g(rng); });
}

ListFeaturizer RandomFeaturizer(int states, int items, int base_dim,
                                uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::MatrixXd> tables;
  for (int x = 0; x < states; ++x) tables.push_back(Gaussian(items, base_dim, rng));
  return ListFeaturizer(BaseFeatureTable(std::move(tables)));
}

CostSensitiveExample RandomExample(int items, int dim, Rng& rng) {
  std::uniform_real_distribution<double> u;
  CostSensitiveExample ex;
  ex.features = Gaussian(items, dim, rng);
  ex.costs = Eigen::VectorXd::NullaryExpr(items, [&]() { return u(rng); });
  ex.costs.array() -= ex.costs.minCoeff();
  ex.weight = 0.2 + u(rng);
  return ex;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

TEST(PredictTest, RulesAndTies) {
  Eigen::MatrixXd v(3, 1);
  v << 1.0, 3.0, 3.0;
  LinearPolicy max_policy{Eigen::VectorXd::Ones(1), PredictionRule::kMaxScore};
  EXPECT_EQ(max_policy.Predict(v), 1);
  LinearPolicy min_policy{Eigen::VectorXd::Ones(1),
                          PredictionRule::kMinPredictedCost};
  EXPECT_EQ(min_policy.Predict(v), 0);
  LinearPolicy zero{Eigen::VectorXd::Zero(1), PredictionRule::kMaxScore};
  EXPECT_EQ(zero.Predict(v), 0);
  EXPECT_EQ(RuleFor(Reduction::kRegression), PredictionRule::kMinPredictedCost);
  EXPECT_EQ(RuleFor(Reduction::kRanking), PredictionRule::kMaxScore);
}

TEST(CscExamplesTest, EqualBenefitsGiveZeroCosts) {
  const ProbabilisticCoverage obj({{0.2, 0.2, 0.2}});
  const ListFeaturizer f = RandomFeaturizer(1, 3, 2, 1);
  const ExampleBatch batch = MakeCscExamples(obj, f, 0, ItemList{0, 1, 2}, 3);
  ASSERT_EQ(batch.size(), 3u);
  // Position 2 follows item 0, so item 0 has zero benefit there; only the
  // first position has all benefits equal.
  EXPECT_TRUE(batch[0].costs.isZero(0.0));
  const ProbabilisticCoverage flat({{0.0, 0.0, 0.0}});
  for (const CostSensitiveExample& ex :
       MakeCscExamples(flat, f, 0, ItemList{0, 1, 2}, 3)) {
    EXPECT_TRUE(ex.costs.isZero(0.0));
  }
}

TEST(CscExamplesTest, WeightsAndShapes) {
  const ProbabilisticCoverage obj = GenerateRandomCoverage(2, 5, 2);
  const ListFeaturizer f = RandomFeaturizer(2, 5, 3, 2);
  const ExampleBatch batch = MakeCscExamples(obj, f, 1, ItemList{4, 0, 4, 2}, 3);
  ASSERT_EQ(batch.size(), 4u);
  const std::vector<double> w = PositionWeights(4, 3);
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(batch[i].weight, w[i]);
    EXPECT_EQ(batch[i].position, i + 1);
    EXPECT_EQ(batch[i].features.rows(), 5);
    EXPECT_EQ(batch[i].features.cols(), f.dim());
    EXPECT_GE(batch[i].costs.minCoeff(), 0.0);
    EXPECT_EQ(batch[i].costs.minCoeff(), 0.0);
  }
  EXPECT_EQ(batch.back().weight, 1.0);
}

// l(pi) from the examples equals the direct per-position sum
//   sum_i w_i (max_s b(s | L_{i-1}) - b(pi(v_i) | L_{i-1})).
TEST(CscExamplesTest, PolicyLossMatchesDirectSum) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ProbabilisticCoverage obj = GenerateRandomCoverage(3, 6, 20 + trial);
    const ListFeaturizer f = RandomFeaturizer(3, 6, 2, 30 + trial);
    const ItemList list = {1, 5, 1, 3};
    const int k = 2 + trial % 3;
    const int x = trial % 3;
    const ExampleBatch batch = MakeCscExamples(obj, f, x, list, k);
    const std::vector<double> w = PositionWeights(4, k);
    for (int p = 0; p < 10; ++p) {
      LinearPolicy pi{Gaussian(f.dim(), 1, rng).col(0),
                      p % 2 ? PredictionRule::kMaxScore
                            : PredictionRule::kMinPredictedCost};
      double direct = 0.0;
      for (int i = 0; i < 4; ++i) {
        const ItemList prefix(list.begin(), list.begin() + i);
        const Item chosen = pi.Predict(f.Features(x, prefix));
        double best = 0.0;
        for (Item s = 0; s < 6; ++s) {
          best = std::max(best, MarginalBenefit(obj, x, prefix, s));
        }
        direct += w[i] * (best - MarginalBenefit(obj, x, prefix, chosen));
      }
      EXPECT_NEAR(CscLoss(pi, batch), direct, 1e-12);
    }
  }
}

TEST(CscExamplesTest, LengthNormalizedCosts) {
  const UnigramEnv env = UnigramEnv::Generate({.n_clusters = 2, .seed = 3});
  const ItemList list = {0, 1};
  const ExampleBatch batch =
      MakeCscExamples(env.objective(), env.featurizer(), 0, list, 2, true);
  double best = 0.0;
  for (Item s = 0; s < env.objective().num_items(); ++s) {
    best = std::max(best, NormalizedBenefit(env.objective(), 0, ItemList{0}, s));
  }
  EXPECT_NEAR(batch[1].costs(4),
              best - NormalizedBenefit(env.objective(), 0, ItemList{0}, 4),
              1e-15);
  const ProbabilisticCoverage plain({{0.3, 0.4}});
  const ListFeaturizer f = RandomFeaturizer(1, 2, 1, 4);
  EXPECT_THROW(MakeCscExamples(plain, f, 0, ItemList{0}, 1, true),
               std::domain_error);
}

TEST(RegressionTest, ZeroExampleLeavesPolicy) {
  CostSensitiveExample ex;
  ex.features = Eigen::MatrixXd::Zero(3, 2);
  ex.costs = Eigen::VectorXd::Zero(3);
  LinearPolicy p{Eigen::VectorXd::Zero(2), PredictionRule::kMinPredictedCost};
  const LinearPolicy q = RegressionUpdate(p, ExampleSpan(&ex, 1), 0.5);
  EXPECT_TRUE(q.weights.isZero(0.0));
}

TEST(RegressionTest, SingleItemStep) {
  CostSensitiveExample ex;
  ex.features = Eigen::MatrixXd::Ones(1, 1);
  ex.costs = Eigen::VectorXd::Constant(1, 2.0);
  ex.weight = 1.0;
  const Eigen::VectorXd h = Eigen::VectorXd::Zero(1);
  // d/dh (h - 2)^2 at 0 is -4.
  EXPECT_NEAR(RegressionGradient(h, ex)(0), -4.0, 1e-15);
  const double fd =
      (RegressionLoss(Eigen::VectorXd::Constant(1, 1e-6), ex) -
       RegressionLoss(Eigen::VectorXd::Constant(1, -1e-6), ex)) / 2e-6;
  EXPECT_NEAR(fd, -4.0, 1e-6);
  // Step 0.5 scaled by 1 / (1 + ||V||^2) = 1/2 moves h to 1.
  LinearPolicy p{h, PredictionRule::kMinPredictedCost};
  const LinearPolicy q = RegressionUpdate(p, ExampleSpan(&ex, 1), 0.5);
  EXPECT_NEAR(q.weights(0), 1.0, 1e-15);
  EXPECT_THROW(RegressionUpdate(p, ExampleSpan(&ex, 1), 0.0),
               std::invalid_argument);
}

TEST(RegressionTest, NonFiniteGradientThrows) {
  CostSensitiveExample ex;
  ex.features = Eigen::MatrixXd::Ones(1, 1);
  ex.costs = Eigen::VectorXd::Constant(1, INFINITY);
  LinearPolicy p{Eigen::VectorXd::Zero(1), PredictionRule::kMinPredictedCost};
  EXPECT_THROW(RegressionUpdate(p, ExampleSpan(&ex, 1), 0.1), std::runtime_error);
}

TEST(RegressionTest, RealizableCostsAreFit) {
  Rng rng(5);
  const int dim = 4;
  const Eigen::VectorXd h_star = Gaussian(dim, 1, rng).col(0);
  std::vector<CostSensitiveExample> data(100);
  for (CostSensitiveExample& ex : data) {
    ex.features = Gaussian(5, dim, rng);
    ex.costs = ex.features * h_star;
    ex.weight = 1.0;
  }
  LinearPolicy p{Eigen::VectorXd::Zero(dim), PredictionRule::kMinPredictedCost};
  const double start = SurrogateLoss(Reduction::kRegression, p.weights, data);
  for (int pass = 0; pass < 1000; ++pass) p = RegressionUpdate(p, data, 0.5);
  const double end = SurrogateLoss(Reduction::kRegression, p.weights, data);
  EXPECT_LT(end, 1e-8 * start);
  EXPECT_NEAR((p.weights - h_star).norm(), 0.0, 1e-5);
}

TEST(RankingTest, EqualCostsGiveNoUpdate) {
  Rng rng(6);
  CostSensitiveExample ex;
  ex.features = Gaussian(4, 3, rng);
  ex.costs = Eigen::VectorXd::Constant(4, 0.3);
  const Eigen::VectorXd h = Gaussian(3, 1, rng).col(0);
  EXPECT_EQ(RankingLoss(h, ex), 0.0);
  EXPECT_TRUE(RankingSubgradient(h, ex).isZero(0.0));
  LinearPolicy p{h, PredictionRule::kMaxScore};
  EXPECT_EQ(RankingUpdate(p, ExampleSpan(&ex, 1), 1.0).weights, h);
}

TEST(RankingTest, SatisfiedMarginHasNoLoss) {
  // c = (0, 1), v(s0) - v(s1) = 1, h = 2: item 0 is cheaper and outscores
  // item 1 by 2 >= 1.
  CostSensitiveExample ex;
  ex.features = Eigen::MatrixXd(2, 1);
  ex.features << 1.0, 0.0;
  ex.costs = Eigen::Vector2d(0.0, 1.0);
  const Eigen::VectorXd h = Eigen::VectorXd::Constant(1, 2.0);
  EXPECT_EQ(RankingLoss(h, ex), 0.0);
  EXPECT_TRUE(RankingSubgradient(h, ex).isZero(0.0));
  // Reversed scores make the hinge active.
  const Eigen::VectorXd bad = Eigen::VectorXd::Constant(1, -2.0);
  EXPECT_GT(RankingLoss(bad, ex), 0.0);
  const double fd = (RankingLoss(Eigen::VectorXd::Constant(1, -2.0 + 1e-6), ex) -
                     RankingLoss(Eigen::VectorXd::Constant(1, -2.0 - 1e-6), ex)) /
                    2e-6;
  EXPECT_NEAR(RankingSubgradient(bad, ex)(0), fd, 1e-6);
  EXPECT_LT(fd, 0.0);
}

TEST(RankingTest, DescentOnFixedBatch) {
  Rng rng(7);
  std::vector<CostSensitiveExample> batch;
  for (int i = 0; i < 5; ++i) batch.push_back(RandomExample(6, 4, rng));
  LinearPolicy p{Eigen::VectorXd::Zero(4), PredictionRule::kMaxScore};
  const double start = SurrogateLoss(Reduction::kRanking, p.weights, batch);
  for (int t = 0; t < 100; ++t) p = RankingUpdate(p, batch, 0.05);
  EXPECT_LT(SurrogateLoss(Reduction::kRanking, p.weights, batch), start);
}

// Property: analytic gradients match central differences.
TEST(GradientTest, FiniteDifferences) {
  Rng rng(8);
  constexpr double kStep = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const CostSensitiveExample ex = RandomExample(5, 4, rng);
    const Eigen::VectorXd h = Gaussian(4, 1, rng).col(0);
    const Eigen::VectorXd g_reg = RegressionGradient(h, ex);
    const Eigen::VectorXd g_rank = RankingSubgradient(h, ex);
    const bool near_kink = RankingKinkDistance(h, ex) < 1e-3;
    for (int j = 0; j < 4; ++j) {
      Eigen::VectorXd hp = h;
      Eigen::VectorXd hm = h;
      hp(j) += kStep;
      hm(j) -= kStep;
      const double fd_reg = (RegressionLoss(hp, ex) - RegressionLoss(hm, ex)) / (2 * kStep);
      EXPECT_NEAR(g_reg(j), fd_reg, 1e-5 * std::max(1.0, std::abs(fd_reg)));
      if (!near_kink) {
        const double fd_rank = (RankingLoss(hp, ex) - RankingLoss(hm, ex)) / (2 * kStep);
        EXPECT_NEAR(g_rank(j), fd_rank, 1e-5 * std::max(1.0, std::abs(fd_rank)));
      }
    }
  }
}

TEST(BuildListTest, PerSlotPolicies) {
  Eigen::MatrixXd base(3, 1);
  base << 0.0, 1.0, 2.0;
  const ListFeaturizer f{BaseFeatureTable({base})};
  Eigen::VectorXd up = Eigen::VectorXd::Zero(f.dim());
  up(0) = 1.0;
  std::vector<LinearPolicy> ps = {{up, PredictionRule::kMaxScore},
                                  {-up, PredictionRule::kMaxScore}};
  std::vector<Eigen::MatrixXd> seen;
  EXPECT_EQ(BuildList(f, 0, ps, 2, &seen), (ItemList{2, 0}));
  EXPECT_EQ(seen.size(), 2u);
  EXPECT_EQ(BuildList(f, 0, std::span(ps).first(1), 3), (ItemList{2, 2, 2}));
}

TEST(RunContextualTest, ZeroRoundsKeepsInitialPolicy) {
  const ProbabilisticCoverage obj = GenerateRandomCoverage(4, 5, 9);
  const ListFeaturizer f = RandomFeaturizer(4, 5, 2, 9);
  ContextualProblem problem{&obj, &f, AllStatesUniform(obj), {}};
  ContextualConfig cfg;
  cfg.rounds = 0;
  const ContextualRunResult run = RunScpContextual(cfg, problem);
  ASSERT_EQ(run.policies.size(), 1u);
  EXPECT_TRUE(run.policies[0].weights.isZero(0.0));
  EXPECT_TRUE(run.rounds.empty());
}

TEST(RunContextualTest, SingleItemRepeats) {
  const ProbabilisticCoverage obj({{0.4}, {0.7}});
  const ListFeaturizer f = RandomFeaturizer(2, 1, 2, 10);
  ContextualProblem problem{&obj, &f, AllStatesUniform(obj), {}};
  ContextualConfig cfg;
  cfg.m = 3;
  cfg.k = 3;
  cfg.rounds = 20;
  const ContextualRunResult run = RunScpContextual(cfg, problem);
  for (const ContextualRound& r : run.rounds) {
    EXPECT_EQ(r.list, (ItemList{0, 0, 0}));
    EXPECT_DOUBLE_EQ(r.train_f, obj.Evaluate(r.state, ItemList{0}));
    EXPECT_EQ(r.csc_loss, 0.0);
  }
}

// Property: lists have length m (SCP) or k (ConSeqOpt), losses are finite
// and non-negative, runs are reproducible.
TEST(RunContextualTest, RunInvariants) {
  const ProbabilisticCoverage obj = GenerateRandomCoverage(12, 8, 11);
  const ListFeaturizer f = RandomFeaturizer(12, 8, 3, 11);
  ContextualProblem problem{&obj, &f, UniformStates(std::vector<int>{0, 1, 2, 3, 4, 5}),
                            UniformStates(std::vector<int>{6, 7, 8})};
  for (Reduction red : {Reduction::kRegression, Reduction::kRanking}) {
    ContextualConfig cfg;
    cfg.m = 4;
    cfg.k = 3;
    cfg.rounds = 120;
    cfg.seed = 4;
    cfg.reduction = red;
    cfg.store_examples = true;
    const ContextualRunResult a = RunScpContextual(cfg, problem);
    const ContextualRunResult c = TrainConSeqOpt(cfg, problem);
    EXPECT_EQ(a.list_length(), 4);
    EXPECT_EQ(c.list_length(), 3);
    EXPECT_EQ(c.policies.size(), 3u);
    for (const ContextualRound& r : a.rounds) {
      EXPECT_EQ(r.list.size(), 4u);
      EXPECT_GE(r.csc_loss, 0.0);
      EXPECT_TRUE(std::isfinite(r.surrogate_loss));
    }
    for (const ContextualRound& r : c.rounds) EXPECT_EQ(r.list.size(), 3u);
    EXPECT_EQ(a.examples.size(), 120u);
    EXPECT_FALSE(a.snapshots.empty());
    const ContextualRunResult again = RunScpContextual(cfg, problem);
    EXPECT_EQ(again.policies[0].weights, a.policies[0].weights);
  }
}

TEST(ConSeqOptTest, SinglePositionMatchesScp) {
  const ProbabilisticCoverage obj = GenerateRandomCoverage(6, 5, 12);
  const ListFeaturizer f = RandomFeaturizer(6, 5, 2, 12);
  ContextualProblem problem{&obj, &f, AllStatesUniform(obj), {}};
  ContextualConfig cfg;
  cfg.m = 1;
  cfg.k = 1;
  cfg.rounds = 80;
  cfg.seed = 2;
  const ContextualRunResult a = RunScpContextual(cfg, problem);
  const ContextualRunResult b = TrainConSeqOpt(cfg, problem);
  ASSERT_EQ(b.policies.size(), 1u);
  EXPECT_TRUE(a.policies[0].weights == b.policies[0].weights);
}

TEST(NewsTest, ScpBeatsRandomLists) {
  std::vector<double> learned;
  std::vector<double> random;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    NewsEnvConfig nc;
    nc.seed = 700 + seed;
    const NewsEnv env = NewsEnv::Generate(nc);
    ContextualProblem problem{&env.objective(), &env.featurizer(),
                              UniformStates(env.splits().train), {}};
    ContextualConfig cfg;
    cfg.rounds = 400;
    cfg.seed = seed;
    const ContextualRunResult run = RunScpContextual(cfg, problem);
    const WeightedStates test = UniformStates(env.splits().test);
    const double fail = 1.0 - EvaluatePolicies(env.objective(), env.featurizer(),
                                               run.policies, test, 5);
    EXPECT_GE(fail, 0.0);
    EXPECT_LE(fail, 1.0);
    learned.push_back(fail);
    Rng rng(seed);
    random.push_back(1.0 - EvaluateDistribution(
                               env.objective(), test,
                               ExpertDistribution::Uniform(20).probabilities(),
                               5, 4000, rng)
                               .mean);
  }
  EXPECT_LE(Median(learned), Median(random));
}

TEST(PolicyHelpersTest, StateOnlyAndRandom) {
  const ListFeaturizer f = RandomFeaturizer(1, 3, 2, 13);
  const std::vector<LinearPolicy> ps =
      RandomPolicies(f.dim(), 4, PredictionRule::kMaxScore, 5);
  ASSERT_EQ(ps.size(), 4u);
  EXPECT_EQ(RandomPolicies(f.dim(), 4, PredictionRule::kMaxScore, 5)[2].weights,
            ps[2].weights);
  const std::vector<bool> mask = f.ListDependentMask();
  const LinearPolicy s = StateOnly(ps[0], mask);
  for (int j = 0; j < f.dim(); ++j) {
    EXPECT_EQ(s.weights(j), mask[j] ? 0.0 : ps[0].weights(j));
  }
  // A state-only policy picks the same item whatever the list.
  const Item first = s.Predict(f.Features(0, {}));
  EXPECT_EQ(s.Predict(f.Features(0, ItemList{first, 1})), first);
}

TEST(ConvexGapTest, NeedsStoredExamples) {
  const ProbabilisticCoverage obj = GenerateRandomCoverage(3, 4, 14);
  const ListFeaturizer f = RandomFeaturizer(3, 4, 2, 14);
  ContextualProblem problem{&obj, &f, AllStatesUniform(obj), {}};
  ContextualConfig cfg;
  cfg.rounds = 10;
  const ContextualRunResult run = RunScpContextual(cfg, problem);
  EXPECT_THROW(ConvexGapEstimate(run, 1), std::invalid_argument);
}

TEST(ConvexGapTest, ReportsSources) {
  auto obj = std::make_shared<ModularObjective>(GenerateModular(10, 6, 15));
  const BenefitFeaturizer f(obj, 2, 16);
  ContextualProblem problem{obj.get(), &f, AllStatesUniform(*obj), {}};
  ContextualConfig cfg;
  cfg.rounds = 300;
  cfg.store_examples = true;
  const ContextualRunResult run = RunScpContextual(cfg, problem);
  const ConvexGapReport g = ConvexGapEstimate(run, 3);
  EXPECT_TRUE(std::isfinite(g.value));
  EXPECT_FALSE(g.min_csc_source.empty());
  EXPECT_FALSE(g.min_surrogate_source.empty());
  EXPECT_FALSE(g.method.empty());
  EXPECT_GE(g.min_csc, 0.0);
}

TEST(PolicyGridTest, ConcentratesOnTheExactPolicy) {
  auto obj = std::make_shared<ModularObjective>(GenerateModular(8, 6, 41));
  const BenefitFeaturizer feats(obj, 2, 42);
  const ContextualProblem problem{obj.get(), &feats, AllStatesUniform(*obj), {}};
  // Predicted cost v.h equals the true cost, so this policy never errs.
  LinearPolicy exact{Eigen::VectorXd::Zero(feats.dim()),
                     PredictionRule::kMinPredictedCost};
  exact.weights(0) = -1.0;
  exact.weights(1) = 1.0;
  std::vector<LinearPolicy> grid =
      RandomPolicies(feats.dim(), 9, PredictionRule::kMinPredictedCost, 43);
  grid.push_back(exact);

  ContextualConfig cfg;
  cfg.m = 3;
  cfg.k = 3;
  cfg.rounds = 600;
  cfg.seed = 44;
  const PolicyGridRunResult run = RunScpPolicyGrid(cfg, problem, grid);
  ASSERT_EQ(run.rounds.size(), 600u);
  EXPECT_EQ(run.ledger.rounds(), 600);
  EXPECT_EQ(run.snapshots.front().round, 1);
  for (const DistributionSnapshot& snap : run.snapshots) {
    double sum = 0.0;
    for (double p : snap.probabilities) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
  EXPECT_EQ(run.ledger.cumulative_losses().back(), 0.0);
  EXPECT_EQ(run.final_distribution.Argmax(), 9);
  EXPECT_GT(run.final_distribution.probability(9), 0.9);
  EXPECT_LT(Regret(run.ledger) / 600.0, 0.1);

  Rng rng(45);
  const double mix =
      EvaluatePolicyGridMixture(problem, run, grid, problem.train, 3, 200, rng);
  const double best = EvaluatePolicies(*obj, feats, std::vector<LinearPolicy>(3, exact),
                                       problem.train, 3);
  EXPECT_GE(mix, 0.0);
  EXPECT_LE(mix, best + 1e-12);
}

TEST(PolicyGridTest, RejectsBadInputs) {
  auto obj = std::make_shared<ModularObjective>(GenerateModular(2, 3, 46));
  const BenefitFeaturizer feats(obj, 0, 47);
  const ContextualProblem problem{obj.get(), &feats, AllStatesUniform(*obj), {}};
  ContextualConfig cfg;
  cfg.rounds = 5;
  EXPECT_THROW(RunScpPolicyGrid(cfg, problem, {}), std::invalid_argument);
  cfg.normalize_by_length = true;
  const std::vector<LinearPolicy> grid =
      RandomPolicies(feats.dim(), 2, PredictionRule::kMinPredictedCost, 48);
  EXPECT_THROW(RunScpPolicyGrid(cfg, problem, grid), std::invalid_argument);
}

}  // namespace
}  // namespace scp
