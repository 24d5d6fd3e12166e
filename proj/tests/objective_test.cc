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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <stdexcept>

#include <gtest/gtest.h>

#include "scp/coverage.h"
#include "scp/environments.h"
#include "scp/features.h"
#include "scp/instance_io.h"
#include "scp/objective.h"
#include "scp/validators.h"

namespace scp {
namespace {

ProbabilisticCoverage TwoItems() { return ProbabilisticCoverage({{0.5, 0.3}}); }

// f(L) = -|L| / 100: strictly decreasing in every append.
class ShrinkingObjective : public Objective {
 public:
  int num_items() const override { return 4; }
  int num_states() const override { return 1; }
  double Evaluate(int, ItemSpan list) const override {
    return -static_cast<double>(list.size()) / 100.0;
  }
};

// f(L) = |distinct L|^2 / |S|^2: monotone but supermodular.
class SquaredCount : public Objective {
 public:
  int num_items() const override { return 6; }
  int num_states() const override { return 1; }
  double Evaluate(int, ItemSpan list) const override {
    std::set<Item> d(list.begin(), list.end());
    return static_cast<double>(d.size() * d.size()) / 36.0;
  }
};

// Small hand-built unigram instance: one state, reference {1:2, 2:1, 3:1}.
UnigramCoverage TinyUnigram(double budget) {
  UnigramCoverage::StateData st;
  st.reference = {{1, 2.0}, {2, 1.0}, {3, 1.0}};
  st.item_unigrams = {{{1, 1.0}, {9, 4.0}},   // 1 of 4
                      {{1, 2.0}, {2, 1.0}},   // 3 of 4
                      {{3, 1.0}},             // 1 of 4
                      {{2, 1.0}, {3, 1.0}}};  // 2 of 4
  st.item_length = {10.0, 40.0, 10.0, 20.0};
  return UnigramCoverage({st}, budget);
}

TEST(ItemListTest, PrefixAndConcat) {
  const ItemList a = {3, 1, 4};
  const ItemList b = {1, 5};
  EXPECT_EQ(ItemList(Prefix(a, 2).begin(), Prefix(a, 2).end()),
            (ItemList{3, 1}));
  EXPECT_TRUE(Prefix(a, 0).empty());
  EXPECT_EQ(Concat(a, b), (ItemList{3, 1, 4, 1, 5}));
  EXPECT_EQ(Concat(a, {}), a);
  EXPECT_EQ(Concat({}, a), a);
  const ItemList c = {9};
  EXPECT_EQ(Concat(Concat(a, b), c), Concat(a, Concat(b, c)));
}

TEST(MarginalBenefitTest, TwoItemExamples) {
  const ProbabilisticCoverage obj = TwoItems();
  EXPECT_DOUBLE_EQ(MarginalBenefit(obj, 0, {}, 0), 0.5);
  EXPECT_DOUBLE_EQ(MarginalBenefit(obj, 0, ItemList{0}, 0), 0.0);
  EXPECT_NEAR(MarginalBenefit(obj, 0, ItemList{0}, 1), 0.15, 1e-15);
}

TEST(MarginalBenefitTest, RejectsOutOfRange) {
  const ProbabilisticCoverage obj = TwoItems();
  EXPECT_THROW(MarginalBenefit(obj, 0, {}, 2), std::domain_error);
  EXPECT_THROW(MarginalBenefit(obj, 0, {}, -1), std::domain_error);
  EXPECT_THROW(MarginalBenefit(obj, 1, {}, 0), std::domain_error);
}

TEST(MarginalBenefitTest, AllBenefitsMatchSingleCalls) {
  const ProbabilisticCoverage obj = GenerateRandomCoverage(4, 7, 21);
  const ItemList list = {2, 5, 2};
  const std::vector<double> all = AllMarginalBenefits(obj, 3, list);
  ASSERT_EQ(all.size(), 7u);
  for (Item s = 0; s < 7; ++s) {
    EXPECT_NEAR(all[s], MarginalBenefit(obj, 3, list, s), 1e-15);
  }
}

TEST(ProbabilisticCoverageTest, ClosedForm) {
  const ProbabilisticCoverage obj({{0.2, 0.5, 0.9}, {0.0, 1.0, 0.1}});
  EXPECT_EQ(obj.Evaluate(0, {}), 0.0);
  EXPECT_NEAR(obj.Evaluate(0, ItemList{0, 2}), 1 - 0.8 * 0.1, 1e-15);
  // Repeated ids count once.
  EXPECT_NEAR(obj.Evaluate(0, ItemList{0, 0, 2, 0}), 1 - 0.8 * 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(obj.Evaluate(1, ItemList{1}), 1.0);
  EXPECT_DOUBLE_EQ(obj.Evaluate(1, ItemList{0}), 0.0);
}

TEST(ProbabilisticCoverageTest, RejectsBadMatrix) {
  EXPECT_THROW(ProbabilisticCoverage({}), std::invalid_argument);
  EXPECT_THROW(ProbabilisticCoverage({{0.1, 0.2}, {0.3}}),
               std::invalid_argument);
  EXPECT_THROW(ProbabilisticCoverage(std::vector<std::vector<double>>{{1.2}}), std::invalid_argument);
  EXPECT_THROW(ProbabilisticCoverage(std::vector<std::vector<double>>{{-0.1}}), std::invalid_argument);
}

TEST(UnigramCoverageTest, ClippedRecall) {
  const UnigramCoverage obj = TinyUnigram(1000.0);
  EXPECT_EQ(obj.Evaluate(0, {}), 0.0);
  EXPECT_DOUBLE_EQ(obj.Evaluate(0, ItemList{0}), 0.25);
  EXPECT_DOUBLE_EQ(obj.Evaluate(0, ItemList{1}), 0.75);
  // Word 1 is clipped at its reference count of 2.
  EXPECT_DOUBLE_EQ(obj.Evaluate(0, ItemList{0, 1}), 0.75);
  EXPECT_DOUBLE_EQ(obj.Evaluate(0, ItemList{1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(obj.Evaluate(0, ItemList{1, 1, 1}), 0.75);
}

TEST(UnigramCoverageTest, BudgetSkipsItemsThatDoNotFit) {
  const UnigramCoverage obj = TinyUnigram(45.0);
  // 40 bytes kept, then item 3 (20) is skipped, item 2 (10) does not fit
  // either: 40 + 10 = 50 > 45.
  EXPECT_DOUBLE_EQ(obj.Evaluate(0, ItemList{1, 3, 2}), 0.75);
  // 10 + 20 + 10 = 40 fits.
  EXPECT_DOUBLE_EQ(obj.Evaluate(0, ItemList{0, 3, 2}), 0.75);
  // The big item comes last and no longer fits, but stays harmless.
  EXPECT_DOUBLE_EQ(obj.Evaluate(0, ItemList{0, 3, 1}), 0.75);
  ASSERT_TRUE(obj.ItemLength(0, 1).has_value());
  EXPECT_DOUBLE_EQ(*obj.ItemLength(0, 1), 40.0);
}

TEST(NormalizedBenefitTest, Division) {
  const UnigramCoverage obj = TinyUnigram(1000.0);
  EXPECT_DOUBLE_EQ(NormalizedBenefit(obj, 0, {}, 1), 0.75 / 40.0);
  // Zero benefit stays zero.
  EXPECT_DOUBLE_EQ(NormalizedBenefit(obj, 0, ItemList{1, 2}, 0), 0.0);
  EXPECT_THROW(NormalizedBenefit(TwoItems(), 0, {}, 0), std::domain_error);
}

// Declares a zero length for item 0.
class ZeroLengthObjective : public Objective {
 public:
  int num_items() const override { return 2; }
  int num_states() const override { return 1; }
  double Evaluate(int, ItemSpan list) const override {
    return list.empty() ? 0.0 : 0.5;
  }
  std::optional<double> ItemLength(int, Item item) const override {
    return item == 0 ? 0.0 : 1.0;
  }
};

TEST(NormalizedBenefitTest, ZeroLengthIsDomainError) {
  const ZeroLengthObjective obj;
  EXPECT_THROW(NormalizedBenefit(obj, 0, {}, 0), std::domain_error);
  EXPECT_DOUBLE_EQ(NormalizedBenefit(obj, 0, {}, 1), 0.5);
}

TEST(UnigramCoverageTest, RejectsZeroLength) {
  UnigramCoverage::StateData st;
  st.reference = {{1, 1.0}};
  st.item_unigrams = {{{1, 1.0}}};
  st.item_length = {0.0};
  EXPECT_THROW(UnigramCoverage({st}, 10.0), std::invalid_argument);
}

TEST(NormalizedBenefitTest, MatchesTwoEvaluations) {
  const UnigramEnv env = UnigramEnv::Generate({.n_clusters = 3, .seed = 5});
  const UnigramCoverage& obj = env.objective();
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> item(0, obj.num_items() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int x = trial % obj.num_states();
    ItemList list(trial % 4);
    for (Item& s : list) s = item(rng);
    const Item s = item(rng);
    ItemList with = list;
    with.push_back(s);
    const double expect = (obj.Evaluate(x, with) - obj.Evaluate(x, list)) /
                          *obj.ItemLength(x, s);
    EXPECT_NEAR(NormalizedBenefit(obj, x, list, s), expect, 1e-15);
  }
}

TEST(ValidatorTest, BuiltinsHaveNoViolations) {
  const ProbabilisticCoverage pc = GenerateRandomCoverage(10, 8, 1);
  const UnigramEnv uni = UnigramEnv::Generate({.n_clusters = 4, .seed = 2});
  for (const Objective* obj :
       std::initializer_list<const Objective*>{&pc, &uni.objective()}) {
    const PropertyReport mono = CheckMonotone(*obj, 1000, 3);
    const PropertyReport sub = CheckSubmodular(*obj, 1000, 4);
    EXPECT_EQ(mono.trials, 1000);
    EXPECT_EQ(mono.violations, 0);
    EXPECT_EQ(sub.violations, 0);
    EXPECT_TRUE(mono.ok() && sub.ok());
  }
}

TEST(ValidatorTest, ShrinkingObjectiveViolatesEveryTrial) {
  const PropertyReport r = CheckMonotone(ShrinkingObjective(), 200, 7);
  EXPECT_EQ(r.violations, 200);
  EXPECT_FALSE(r.examples.empty());
  EXPECT_GT(r.worst, 0.0);
}

TEST(ValidatorTest, SupermodularObjectiveIsCaught) {
  const PropertyReport r = CheckSubmodular(SquaredCount(), 1000, 8);
  EXPECT_GT(r.violations, 0);
  EXPECT_FALSE(r.ok());
  // The same objective is monotone.
  EXPECT_EQ(CheckMonotone(SquaredCount(), 1000, 8).violations, 0);
}

TEST(ValidatorTest, SameSeedSameReport) {
  const PropertyReport a = CheckSubmodular(SquaredCount(), 300, 11);
  const PropertyReport b = CheckSubmodular(SquaredCount(), 300, 11);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.worst, b.worst);
  EXPECT_THROW(CheckMonotone(SquaredCount(), 0, 1), std::invalid_argument);
}

// Property: f(empty) = 0, f in [0, 1] for |L| <= 3|S|, and the benefit is the
// difference of two evaluations.
TEST(ObjectivePropertyTest, RangeAndConsistency) {
  const ProbabilisticCoverage pc = GenerateRandomCoverage(6, 9, 31);
  const UnigramEnv uni = UnigramEnv::Generate({.n_clusters = 3, .seed = 32});
  const ModularObjective mod = GenerateModular(5, 7, 33);
  std::mt19937_64 rng(34);
  for (const Objective* obj : std::initializer_list<const Objective*>{
           &pc, &uni.objective(), &mod}) {
    std::uniform_int_distribution<int> item(0, obj->num_items() - 1);
    std::uniform_int_distribution<int> len(0, 3 * obj->num_items());
    for (int x = 0; x < obj->num_states(); ++x) {
      EXPECT_EQ(obj->Evaluate(x, {}), 0.0);
    }
    for (int t = 0; t < 300; ++t) {
      const int x = t % obj->num_states();
      ItemList list(len(rng));
      for (Item& s : list) s = item(rng);
      const double f = obj->Evaluate(x, list);
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
      const Item s = item(rng);
      ItemList with = list;
      with.push_back(s);
      EXPECT_NEAR(MarginalBenefit(*obj, x, list, s),
                  obj->Evaluate(x, with) - f, 1e-12);
    }
  }
}

TEST(StatesTest, EmpiricalAndUniform) {
  const std::vector<int> samples = {3, 1, 3, 3, 0};
  const WeightedStates e = EmpiricalStates(samples);
  double total = 0.0;
  for (size_t i = 0; i < e.size(); ++i) {
    total += e.weights[i];
    if (e.ids[i] == 3) {
      EXPECT_DOUBLE_EQ(e.weights[i], 0.6);
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  const ProbabilisticCoverage obj({{0.5}, {0.1}});
  EXPECT_NEAR(ExpectedValue(obj, AllStatesUniform(obj), ItemList{0}), 0.3,
              1e-15);
}

TEST(FeaturesTest, EmptyListAndSelfDistance) {
  Eigen::MatrixXd base(3, 2);
  base << 1, 2, 4, 0, -1, 5;
  const Eigen::VectorXd v0 = BuildFeatures(base, {}, 1);
  ASSERT_EQ(v0.size(), ListFeatureDim(2));
  EXPECT_EQ(v0.head(2), base.row(1).transpose());
  EXPECT_TRUE(v0.segment(2, 4).isZero());
  EXPECT_EQ(v0(6), 1.0);  // bias
  EXPECT_EQ(v0(7), 1.0);  // first position

  const Eigen::VectorXd v = BuildFeatures(base, ItemList{0, 1}, 1);
  EXPECT_TRUE(v.segment(2, 2).isZero());  // item already in the list
  EXPECT_DOUBLE_EQ(v(4), 1.5);            // mean |4-1|, |4-4|
  EXPECT_DOUBLE_EQ(v(5), 1.0);            // mean |0-2|, |0-0|
  EXPECT_EQ(v(6), 1.0);
  EXPECT_EQ(v(7), 0.0);

  const Eigen::VectorXd w = BuildFeatures(base, ItemList{0, 2}, 1);
  EXPECT_DOUBLE_EQ(w(2), 3.0);  // min(|4-1|, |4+1|)
  EXPECT_DOUBLE_EQ(w(3), 2.0);  // min(|0-2|, |0-5|)
}

TEST(FeaturesTest, FeaturizerShapeIsFixed) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<Eigen::MatrixXd> tables;
  for (int x = 0; x < 4; ++x) {
    tables.push_back(Eigen::MatrixXd::NullaryExpr(6, 3, [&]() { return g(rng); }));
  }
  const ListFeaturizer f{BaseFeatureTable(tables)};
  EXPECT_EQ(f.dim(), 3 * 3 + 2);
  for (const ItemList& l : {ItemList{}, ItemList{1}, ItemList{5, 5, 0}}) {
    const Eigen::MatrixXd m = f.Features(2, l);
    EXPECT_EQ(m.rows(), 6);
    EXPECT_EQ(m.cols(), f.dim());
    EXPECT_TRUE(m.allFinite());
  }
  const std::vector<bool> mask = f.ListDependentMask();
  int dependent = 0;
  for (bool b : mask) dependent += b;
  EXPECT_EQ(dependent, 2 * 3 + 1);  // both distance blocks and the indicator
  EXPECT_THROW(BaseFeatureTable({Eigen::MatrixXd(2, 2), Eigen::MatrixXd(3, 2)}),
               std::invalid_argument);
}

TEST(InstanceIoTest, RoundTripProbabilistic) {
  Instance inst;
  inst.objective = std::make_shared<ProbabilisticCoverage>(
      GenerateRandomCoverage(3, 4, 9));
  inst.splits = StateSplits{{0, 1}, {}, {2}};
  inst.metadata = {{"note", "x"}};
  const Instance back = InstanceFromJson(InstanceToJson(inst));
  ASSERT_EQ(back.objective->num_states(), 3);
  for (int x = 0; x < 3; ++x) {
    EXPECT_DOUBLE_EQ(back.objective->Evaluate(x, ItemList{0, 3}),
                     inst.objective->Evaluate(x, ItemList{0, 3}));
  }
  ASSERT_TRUE(back.splits.has_value());
  EXPECT_EQ(back.splits->test, std::vector<int>{2});
  EXPECT_EQ(back.metadata["note"], "x");
}

TEST(InstanceIoTest, RoundTripUnigramThroughFile) {
  const UnigramEnv env = UnigramEnv::Generate({.n_clusters = 2, .seed = 4});
  const std::string path =
      (std::filesystem::temp_directory_path() / "scp_io_test.json").string();
  SaveInstance(env.ToInstance(), path);
  const Instance back = LoadInstance(path);
  std::remove(path.c_str());
  ASSERT_TRUE(back.base_features.has_value());
  EXPECT_EQ(back.base_features->base_dim(),
            env.featurizer().table().base_dim());
  const ItemList l = {0, 3, 7, 1};
  for (int x = 0; x < 2; ++x) {
    EXPECT_DOUBLE_EQ(back.objective->Evaluate(x, l),
                     env.objective().Evaluate(x, l));
    EXPECT_EQ(back.objective->ItemLength(x, 3), env.objective().ItemLength(x, 3));
  }
}

TEST(InstanceIoTest, Errors) {
  EXPECT_THROW(LoadInstance("/nonexistent/instance.json"), std::runtime_error);
  EXPECT_THROW(InstanceFromJson({{"format", "other"}}), std::invalid_argument);
  EXPECT_THROW(InstanceFromJson({{"format", "scp-instance"},
                                 {"version", 1},
                                 {"objective", {{"type", "nope"}}}}),
               std::invalid_argument);
}

}  // namespace
}  // namespace scp
