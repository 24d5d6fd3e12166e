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

// Contextual SCP. Each round the current linear policy builds a list for the
// observed state one item at a time; every position then yields a weighted
// cost-sensitive classification example, and the policy is updated online on
// a convex surrogate (regression or pairwise ranking) of those examples.
//
// The ConSeqOpt baseline runs the same protocol with one policy per position,
// each trained only on its own position's examples.

#ifndef SCP_CONTEXTUAL_H_
#define SCP_CONTEXTUAL_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scp/context_free.h"
#include "scp/features.h"
#include "scp/learners.h"
#include "scp/objective.h"

namespace scp {

enum class Reduction { kRegression, kRanking };

// Regression policies predict costs and pick the cheapest item; ranking
// policies pick the highest score. Ties go to the lowest item id.
enum class PredictionRule { kMaxScore, kMinPredictedCost };

PredictionRule RuleFor(Reduction reduction);

struct LinearPolicy {
  Eigen::VectorXd weights;
  PredictionRule rule = PredictionRule::kMaxScore;

  Item Predict(const Eigen::MatrixXd& features) const;
};

struct CostSensitiveExample {
  Eigen::MatrixXd features;  // row s = v(s)
  Eigen::VectorXd costs;     // c(s) >= 0, min_s c(s) = 0
  double weight = 1.0;
  int position = 1;          // 1-based slot the example was taken at
};

using ExampleBatch = std::vector<CostSensitiveExample>;
using ExampleSpan = std::span<const CostSensitiveExample>;

// One example per position of `list`, with
//   c_i(s) = max_s' b(s' | L_{i-1}) - b(s | L_{i-1}),  w_i = (1 - 1/k)^(m - i).
// With `normalize_by_length`, benefits are divided by the item length first.
ExampleBatch MakeCscExamples(const Objective& obj, const Featurizer& features,
                             int state, ItemSpan list, int k,
                             bool normalize_by_length = false);

// Same, reusing the feature matrices computed while the list was built
// (`features_per_position[i]` describes L_{i}); `weights` has one entry per
// position.
ExampleBatch MakeCscExamples(const Objective& obj, int state, ItemSpan list,
                             std::vector<Eigen::MatrixXd> features_per_position,
                             std::span<const double> weights,
                             bool normalize_by_length);

// l(pi) = sum_i w_i c_i(pi(v_i)).
double CscLoss(const LinearPolicy& policy, ExampleSpan examples);

// w * sum_s (h.v(s) - c(s))^2 and its gradient.
double RegressionLoss(const Eigen::VectorXd& h, const CostSensitiveExample& ex);
Eigen::VectorXd RegressionGradient(const Eigen::VectorXd& h,
                                   const CostSensitiveExample& ex);

// Weighted pairwise hinge over distinct pairs (s, s'):
//   w |c(s) - c(s')| max(0, 1 - h.(v(s) - v(s')) sign(c(s') - c(s)))
// which asks the cheaper item of every pair to outscore the other by a margin.
// Pairs with equal cost contribute nothing. The subgradient takes 0 at kinks.
double RankingLoss(const Eigen::VectorXd& h, const CostSensitiveExample& ex);
Eigen::VectorXd RankingSubgradient(const Eigen::VectorXd& h,
                                   const CostSensitiveExample& ex);

// Smallest |1 - margin| over the pairs of `ex`; finite-difference checks skip
// points closer to a kink than their step.
double RankingKinkDistance(const Eigen::VectorXd& h,
                           const CostSensitiveExample& ex);

double SurrogateLoss(Reduction reduction, const Eigen::VectorXd& h,
                     ExampleSpan examples);

// One online step per example, in order:
//   h <- h - step * grad / (1 + ||V||_F^2)
// where V is the example's feature matrix. Throws std::invalid_argument when
// step <= 0 and std::runtime_error on a non-finite gradient.
LinearPolicy RegressionUpdate(LinearPolicy policy, ExampleSpan examples,
                              double step);
LinearPolicy RankingUpdate(LinearPolicy policy, ExampleSpan examples,
                           double step);
LinearPolicy SurrogateUpdate(Reduction reduction, LinearPolicy policy,
                             ExampleSpan examples, double step);

// Greedy list construction: slot i uses policies[i] if several policies are
// given, otherwise policies[0] for all `length` slots. When `features_out` is
// set it receives the feature matrix seen at every slot.
ItemList BuildList(const Featurizer& features, int state,
                   std::span<const LinearPolicy> policies, int length,
                   std::vector<Eigen::MatrixXd>* features_out = nullptr);

struct ContextualProblem {
  const Objective* objective = nullptr;
  const Featurizer* features = nullptr;
  WeightedStates train;    // state distribution sampled during training
  WeightedStates heldout;  // used for snapshot evaluation; may be empty
};

struct ContextualConfig {
  int m = 5;
  int k = 5;
  int64_t rounds = 0;
  uint64_t seed = 0;
  Reduction reduction = Reduction::kRegression;
  double eta0 = 0.5;  // step at round t is eta0 / sqrt(t)
  bool normalize_by_length = false;
  // Evaluate on held-out states every this many rounds; 0 = ceil(T / 200).
  int64_t eval_every = 0;
  bool store_examples = false;
};

void ValidateConfig(const ContextualConfig& config);

struct ContextualRound {
  int state = 0;
  ItemList list;
  double train_f = 0.0;
  double csc_loss = 0.0;        // l_t(pi_t)
  double surrogate_loss = 0.0;  // C_t(pi_t), before the update
};

struct PolicySnapshot {
  int64_t round = 0;  // 1-based round whose policy this is
  std::vector<LinearPolicy> policies;
  double heldout_f = 0.0;
};

struct ContextualRunResult {
  ContextualConfig config;
  // One policy for SCP, one per position for ConSeqOpt.
  std::vector<LinearPolicy> policies;
  std::vector<ContextualRound> rounds;
  std::vector<PolicySnapshot> snapshots;
  std::vector<ExampleBatch> examples;  // filled when store_examples is set

  int list_length() const;
  std::vector<int> sampled_states() const;
};

ContextualRunResult RunScpContextual(const ContextualConfig& config,
                                     const ContextualProblem& problem);

// ConSeqOpt: k policies, lists of length k, example i trained only into
// policy i with unit weight.
ContextualRunResult TrainConSeqOpt(const ContextualConfig& config,
                                   const ContextualProblem& problem);

// Mean f_x of the list built by `policies` over `states`.
double EvaluatePolicies(const Objective& obj, const Featurizer& features,
                        std::span<const LinearPolicy> policies,
                        const WeightedStates& states, int length);

// Gaussian random policies (N(0, 1) weights).
std::vector<LinearPolicy> RandomPolicies(int dim, int count,
                                         PredictionRule rule, uint64_t seed);

// Copy with weights on list-dependent coordinates set to zero.
LinearPolicy StateOnly(const LinearPolicy& policy, const std::vector<bool>& mask);

using SurrogateFn =
    std::function<double(const LinearPolicy&, ExampleSpan examples)>;

struct ConvexGapInputs {
  std::vector<ExampleBatch> examples;
  std::vector<double> played_csc;
  std::vector<double> played_surrogate;
};

struct ConvexGapReport {
  double value = 0.0;
  double played_term = 0.0;    // (1/T) sum_t (l_t(pi_t) - C_t(pi_t))
  double min_surrogate = 0.0;  // approx. min_pi sum_t C_t(pi)
  double min_csc = 0.0;        // approx. min_pi sum_t l_t(pi)
  std::string min_surrogate_source;
  std::string min_csc_source;
  std::string method;
};

// (1/T)[sum_t (l_t(pi_t) - C_t(pi_t)) + min_pi sum C_t(pi) - min_pi sum l_t(pi)]
// with both minima taken over `candidates` (named by `candidate_names`).
ConvexGapReport ConvexGapEstimate(const ConvexGapInputs& inputs,
                                  const SurrogateFn& surrogate,
                                  std::span<const LinearPolicy> candidates,
                                  std::span<const std::string> candidate_names);

// Gap of a stored SCP run. Minima are approximated by the best of the final
// policy, a policy retrained on all stored examples, and 100 random policies.
// Throws std::invalid_argument when the run did not store its examples.
ConvexGapReport ConvexGapEstimate(const ContextualRunResult& run, uint64_t seed);

struct ContextualBoundReport {
  double f_mixture = 0.0;
  double f_comparator = 0.0;
  double ratio = 0.0;
  double regret_per_round = 0.0;
  double slack = 0.0;
  double bound = 0.0;
  bool holds = false;
  std::string comparator;
};

// Deterministic-learner check
//   F(pibar, m) >= (1 - e^{-m/k}) F_emp(comparator) - R/T - 2 sqrt(2 ln(1/delta)/T)
// where the minimum over policies in R and the comparator list are proxies
// built from `grid`: R uses the best of `grid` and its state-only copies, the
// comparator is the greedy length-k list over the state-only copies. F(pibar)
// averages the run's snapshots over problem.train. Needs stored examples.
ContextualBoundReport CheckContextualBound(const ContextualProblem& problem,
                                           const ContextualRunResult& run,
                                           std::span<const LinearPolicy> grid,
                                           double delta);

// Randomized variant: Weighted Majority over a finite policy grid, sampling a
// policy for every position of the list.
struct PolicyGridRunResult {
  std::vector<ContextualRound> rounds;
  RegretLedger ledger;
  std::vector<DistributionSnapshot> snapshots;
  ExpertDistribution final_distribution = ExpertDistribution::Uniform(1);
};

PolicyGridRunResult RunScpPolicyGrid(const ContextualConfig& config,
                                     const ContextualProblem& problem,
                                     std::span<const LinearPolicy> grid);

// F(pibar, m) for a policy-grid run: pick a snapshot uniformly, sample m
// policies from it, build the list.
double EvaluatePolicyGridMixture(const ContextualProblem& problem,
                                 const PolicyGridRunResult& run,
                                 std::span<const LinearPolicy> grid,
                                 const WeightedStates& states, int m, int n_mc,
                                 Rng& rng);

// Greedy list of `k` policies drawn from `pool` on F_emp over `states`.
std::vector<int> GreedyPolicyList(const Objective& obj,
                                  const Featurizer& features,
                                  std::span<const LinearPolicy> pool,
                                  const WeightedStates& states, int k);

double EvaluatePolicySequence(const Objective& obj, const Featurizer& features,
                              std::span<const LinearPolicy> pool,
                              std::span<const int> sequence,
                              const WeightedStates& states);

}  // namespace scp

#endif  // SCP_CONTEXTUAL_H_
