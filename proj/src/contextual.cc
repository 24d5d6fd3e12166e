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

#include "scp/contextual.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace scp {
namespace {

double Sign(double v) { return (v > 0.0) - (v < 0.0); }

std::vector<double> SlotBenefits(const Objective& obj, int state,
                                 ItemSpan prefix, bool normalize_by_length) {
  std::vector<double> b = AllMarginalBenefits(obj, state, prefix);
  if (normalize_by_length) {
    for (Item s = 0; s < static_cast<Item>(b.size()); ++s) {
      const std::optional<double> len = obj.ItemLength(state, s);
      if (!len.has_value() || !(*len > 0.0)) {
        throw std::domain_error("length normalization needs positive lengths");
      }
      b[s] /= *len;
    }
  }
  return b;
}

double StepNormalizer(const CostSensitiveExample& ex) {
  return 1.0 + ex.features.squaredNorm();
}

template <typename GradFn>
LinearPolicy OnlineSteps(LinearPolicy policy, ExampleSpan examples, double step,
                         GradFn grad) {
  if (!(step > 0.0)) throw std::invalid_argument("step size must be > 0");
  for (const CostSensitiveExample& ex : examples) {
    const Eigen::VectorXd g = grad(policy.weights, ex);
    if (!g.allFinite()) throw std::runtime_error("non-finite gradient");
    policy.weights -= (step / StepNormalizer(ex)) * g;
  }
  return policy;
}

// Shared SCP / ConSeqOpt training protocol. `positional` selects ConSeqOpt.
ContextualRunResult TrainLoop(const ContextualConfig& config,
                              const ContextualProblem& problem,
                              bool positional) {
  ValidateConfig(config);
  if (problem.objective == nullptr || problem.features == nullptr) {
    throw std::invalid_argument("contextual problem is incomplete");
  }
  if (problem.train.empty()) throw std::invalid_argument("no training states");
  const Objective& obj = *problem.objective;
  const Featurizer& feats = *problem.features;
  if (feats.num_items() != obj.num_items()) {
    throw std::invalid_argument("featurizer and objective disagree on |S|");
  }

  const int length = positional ? config.k : config.m;
  const int n_policies = positional ? config.k : 1;
  const std::vector<double> weights =
      positional ? std::vector<double>(length, 1.0)
                 : PositionWeights(config.m, config.k);
  const int64_t every = config.eval_every > 0
                            ? config.eval_every
                            : std::max<int64_t>(1, (config.rounds + 199) / 200);

  ContextualRunResult result;
  result.config = config;
  result.policies.assign(
      n_policies,
      LinearPolicy{Eigen::VectorXd::Zero(feats.dim()), RuleFor(config.reduction)});
  result.rounds.reserve(config.rounds);

  auto snapshot = [&](int64_t round) {
    PolicySnapshot snap{round, result.policies, 0.0};
    if (!problem.heldout.empty()) {
      snap.heldout_f =
          EvaluatePolicies(obj, feats, result.policies, problem.heldout, length);
    }
    result.snapshots.push_back(std::move(snap));
  };

  Rng rng(config.seed);
  for (int64_t t = 1; t <= config.rounds; ++t) {
    if ((t - 1) % every == 0) snapshot(t);
    const int x = SampleState(problem.train, rng);
    std::vector<Eigen::MatrixXd> seen;
    ItemList list = BuildList(feats, x, result.policies, length, &seen);

    ContextualRound round;
    round.state = x;
    try {
      round.train_f = obj.Evaluate(x, list);
    } catch (const std::exception& e) {
      throw std::runtime_error("objective evaluation failed in round " +
                               std::to_string(t) + ": " + e.what());
    }
    ExampleBatch examples = MakeCscExamples(obj, x, list, std::move(seen),
                                            weights, config.normalize_by_length);
    for (size_t i = 0; i < examples.size(); ++i) {
      const LinearPolicy& p = result.policies[positional ? i : 0];
      round.csc_loss += examples[i].weight * examples[i].costs(list[i]);
      round.surrogate_loss += SurrogateLoss(
          config.reduction, p.weights, ExampleSpan(&examples[i], 1));
    }
    round.list = std::move(list);

    const double step = config.eta0 / std::sqrt(static_cast<double>(t));
    if (positional) {
      for (size_t i = 0; i < examples.size(); ++i) {
        result.policies[i] =
            SurrogateUpdate(config.reduction, std::move(result.policies[i]),
                            ExampleSpan(&examples[i], 1), step);
      }
    } else {
      result.policies[0] = SurrogateUpdate(
          config.reduction, std::move(result.policies[0]), examples, step);
    }
    result.rounds.push_back(std::move(round));
    if (config.store_examples) result.examples.push_back(std::move(examples));
  }
  return result;
}

std::vector<LinearPolicy> CandidatePool(std::span<const LinearPolicy> grid,
                                        const std::vector<bool>& mask,
                                        bool include_full) {
  std::vector<LinearPolicy> pool;
  for (const LinearPolicy& p : grid) {
    if (include_full) pool.push_back(p);
    pool.push_back(StateOnly(p, mask));
  }
  return pool;
}

}  // namespace

PredictionRule RuleFor(Reduction reduction) {
  return reduction == Reduction::kRegression ? PredictionRule::kMinPredictedCost
                                             : PredictionRule::kMaxScore;
}

Item LinearPolicy::Predict(const Eigen::MatrixXd& features) const {
  if (features.cols() != weights.size()) {
    throw std::invalid_argument("policy and feature dimensions differ");
  }
  const Eigen::VectorXd scores = features * weights;
  Item best = 0;
  for (Item s = 1; s < static_cast<Item>(scores.size()); ++s) {
    const bool better = rule == PredictionRule::kMaxScore
                            ? scores(s) > scores(best)
                            : scores(s) < scores(best);
    if (better) best = s;
  }
  return best;
}

ExampleBatch MakeCscExamples(const Objective& obj, const Featurizer& features,
                             int state, ItemSpan list, int k,
                             bool normalize_by_length) {
  if (list.empty()) throw std::invalid_argument("examples need |L| >= 1");
  std::vector<Eigen::MatrixXd> seen;
  seen.reserve(list.size());
  for (size_t i = 0; i < list.size(); ++i) {
    seen.push_back(features.Features(state, Prefix(list, i)));
  }
  const std::vector<double> w =
      PositionWeights(static_cast<int>(list.size()), k);
  return MakeCscExamples(obj, state, list, std::move(seen), w,
                         normalize_by_length);
}

ExampleBatch MakeCscExamples(const Objective& obj, int state, ItemSpan list,
                             std::vector<Eigen::MatrixXd> features_per_position,
                             std::span<const double> weights,
                             bool normalize_by_length) {
  if (features_per_position.size() != list.size() ||
      weights.size() != list.size()) {
    throw std::invalid_argument("one feature matrix and weight per position");
  }
  ExampleBatch out;
  out.reserve(list.size());
  for (size_t i = 0; i < list.size(); ++i) {
    const std::vector<double> b =
        SlotBenefits(obj, state, Prefix(list, i), normalize_by_length);
    const double best = *std::max_element(b.begin(), b.end());
    CostSensitiveExample ex;
    ex.features = std::move(features_per_position[i]);
    ex.costs.resize(static_cast<Eigen::Index>(b.size()));
    for (size_t s = 0; s < b.size(); ++s) ex.costs(s) = best - b[s];
    ex.weight = weights[i];
    ex.position = static_cast<int>(i) + 1;
    out.push_back(std::move(ex));
  }
  return out;
}

double CscLoss(const LinearPolicy& policy, ExampleSpan examples) {
  double loss = 0.0;
  for (const CostSensitiveExample& ex : examples) {
    loss += ex.weight * ex.costs(policy.Predict(ex.features));
  }
  return loss;
}

double RegressionLoss(const Eigen::VectorXd& h, const CostSensitiveExample& ex) {
  return ex.weight * (ex.features * h - ex.costs).squaredNorm();
}

Eigen::VectorXd RegressionGradient(const Eigen::VectorXd& h,
                                   const CostSensitiveExample& ex) {
  return 2.0 * ex.weight * ex.features.transpose() * (ex.features * h - ex.costs);
}

double RankingLoss(const Eigen::VectorXd& h, const CostSensitiveExample& ex) {
  const Eigen::VectorXd scores = ex.features * h;
  const Eigen::Index n = scores.size();
  double loss = 0.0;
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index t = s + 1; t < n; ++t) {
      const double delta = ex.costs(s) - ex.costs(t);
      if (delta == 0.0) continue;
      const double margin = (scores(s) - scores(t)) * Sign(-delta);
      loss += ex.weight * std::abs(delta) * std::max(0.0, 1.0 - margin);
    }
  }
  return loss;
}

Eigen::VectorXd RankingSubgradient(const Eigen::VectorXd& h,
                                   const CostSensitiveExample& ex) {
  const Eigen::VectorXd scores = ex.features * h;
  const Eigen::Index n = scores.size();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(h.size());
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index t = s + 1; t < n; ++t) {
      const double delta = ex.costs(s) - ex.costs(t);
      if (delta == 0.0) continue;
      const double sign = Sign(-delta);
      const double margin = (scores(s) - scores(t)) * sign;
      if (1.0 - margin > 0.0) {
        g -= (ex.weight * std::abs(delta) * sign) *
             (ex.features.row(s) - ex.features.row(t)).transpose();
      }
    }
  }
  return g;
}

double RankingKinkDistance(const Eigen::VectorXd& h,
                           const CostSensitiveExample& ex) {
  const Eigen::VectorXd scores = ex.features * h;
  double closest = std::numeric_limits<double>::infinity();
  for (Eigen::Index s = 0; s < scores.size(); ++s) {
    for (Eigen::Index t = s + 1; t < scores.size(); ++t) {
      const double delta = ex.costs(s) - ex.costs(t);
      if (delta == 0.0) continue;
      const double margin = (scores(s) - scores(t)) * Sign(-delta);
      closest = std::min(closest, std::abs(1.0 - margin));
    }
  }
  return closest;
}

double SurrogateLoss(Reduction reduction, const Eigen::VectorXd& h,
                     ExampleSpan examples) {
  double loss = 0.0;
  for (const CostSensitiveExample& ex : examples) {
    loss += reduction == Reduction::kRegression ? RegressionLoss(h, ex)
                                                : RankingLoss(h, ex);
  }
  return loss;
}

LinearPolicy RegressionUpdate(LinearPolicy policy, ExampleSpan examples,
                              double step) {
  return OnlineSteps(std::move(policy), examples, step, RegressionGradient);
}

LinearPolicy RankingUpdate(LinearPolicy policy, ExampleSpan examples,
                           double step) {
  return OnlineSteps(std::move(policy), examples, step, RankingSubgradient);
}

LinearPolicy SurrogateUpdate(Reduction reduction, LinearPolicy policy,
                             ExampleSpan examples, double step) {
  return reduction == Reduction::kRegression
             ? RegressionUpdate(std::move(policy), examples, step)
             : RankingUpdate(std::move(policy), examples, step);
}

ItemList BuildList(const Featurizer& features, int state,
                   std::span<const LinearPolicy> policies, int length,
                   std::vector<Eigen::MatrixXd>* features_out) {
  if (policies.empty()) throw std::invalid_argument("no policy to build with");
  ItemList list;
  list.reserve(length);
  for (int i = 0; i < length; ++i) {
    Eigen::MatrixXd v = features.Features(state, list);
    const LinearPolicy& p = policies.size() == 1 ? policies[0] : policies[i];
    list.push_back(p.Predict(v));
    if (features_out != nullptr) features_out->push_back(std::move(v));
  }
  return list;
}

void ValidateConfig(const ContextualConfig& config) {
  if (config.m < 1 || config.k < 1) {
    throw std::invalid_argument("m and k must be >= 1");
  }
  if (config.rounds < 0) throw std::invalid_argument("T must be >= 0");
  if (!(config.eta0 > 0.0)) throw std::invalid_argument("eta0 must be > 0");
  if (config.eval_every < 0) throw std::invalid_argument("eval_every < 0");
}

int ContextualRunResult::list_length() const {
  return policies.size() > 1 ? static_cast<int>(policies.size()) : config.m;
}

std::vector<int> ContextualRunResult::sampled_states() const {
  std::vector<int> out;
  out.reserve(rounds.size());
  for (const ContextualRound& r : rounds) out.push_back(r.state);
  return out;
}

ContextualRunResult RunScpContextual(const ContextualConfig& config,
                                     const ContextualProblem& problem) {
  return TrainLoop(config, problem, /*positional=*/false);
}

ContextualRunResult TrainConSeqOpt(const ContextualConfig& config,
                                   const ContextualProblem& problem) {
  return TrainLoop(config, problem, /*positional=*/true);
}

double EvaluatePolicies(const Objective& obj, const Featurizer& features,
                        std::span<const LinearPolicy> policies,
                        const WeightedStates& states, int length) {
  double total = 0.0;
  for (size_t j = 0; j < states.size(); ++j) {
    const ItemList list = BuildList(features, states.ids[j], policies, length);
    total += states.weights[j] * obj.Evaluate(states.ids[j], list);
  }
  return total;
}

std::vector<LinearPolicy> RandomPolicies(int dim, int count,
                                         PredictionRule rule, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<LinearPolicy> out(count);
  for (LinearPolicy& p : out) {
    p.weights.resize(dim);
    for (int j = 0; j < dim; ++j) p.weights(j) = normal(rng);
    p.rule = rule;
  }
  return out;
}

LinearPolicy StateOnly(const LinearPolicy& policy,
                       const std::vector<bool>& mask) {
  if (static_cast<Eigen::Index>(mask.size()) != policy.weights.size()) {
    throw std::invalid_argument("mask size differs from policy dimension");
  }
  LinearPolicy out = policy;
  for (size_t j = 0; j < mask.size(); ++j) {
    if (mask[j]) out.weights(static_cast<Eigen::Index>(j)) = 0.0;
  }
  return out;
}

ConvexGapReport ConvexGapEstimate(const ConvexGapInputs& inputs,
                                  const SurrogateFn& surrogate,
                                  std::span<const LinearPolicy> candidates,
                                  std::span<const std::string> candidate_names) {
  const size_t t_total = inputs.examples.size();
  if (t_total == 0 || inputs.played_csc.size() != t_total ||
      inputs.played_surrogate.size() != t_total) {
    throw std::invalid_argument(
        "convex gap needs stored examples and per-round played losses");
  }
  if (candidates.empty() || candidate_names.size() != candidates.size()) {
    throw std::invalid_argument("convex gap needs named candidate policies");
  }
  ConvexGapReport report;
  double played = 0.0;
  for (size_t t = 0; t < t_total; ++t) {
    played += inputs.played_csc[t] - inputs.played_surrogate[t];
  }
  report.min_surrogate = std::numeric_limits<double>::infinity();
  report.min_csc = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < candidates.size(); ++c) {
    double sum_surrogate = 0.0;
    double sum_csc = 0.0;
    for (const ExampleBatch& batch : inputs.examples) {
      sum_surrogate += surrogate(candidates[c], batch);
      sum_csc += CscLoss(candidates[c], batch);
    }
    if (sum_surrogate < report.min_surrogate) {
      report.min_surrogate = sum_surrogate;
      report.min_surrogate_source = candidate_names[c];
    }
    if (sum_csc < report.min_csc) {
      report.min_csc = sum_csc;
      report.min_csc_source = candidate_names[c];
    }
  }
  const double t = static_cast<double>(t_total);
  report.played_term = played / t;
  report.value = (played + report.min_surrogate - report.min_csc) / t;
  return report;
}

ConvexGapReport ConvexGapEstimate(const ContextualRunResult& run,
                                  uint64_t seed) {
  if (run.examples.empty() || run.examples.size() != run.rounds.size()) {
    throw std::invalid_argument(
        "convex gap needs a run with stored examples (store_examples)");
  }
  if (run.policies.size() != 1) {
    throw std::invalid_argument("convex gap is defined for a single policy");
  }
  const Reduction reduction = run.config.reduction;
  const LinearPolicy& final_policy = run.policies.front();
  const int dim = static_cast<int>(final_policy.weights.size());

  ConvexGapInputs inputs;
  inputs.examples = run.examples;
  for (const ContextualRound& r : run.rounds) {
    inputs.played_csc.push_back(r.csc_loss);
    inputs.played_surrogate.push_back(r.surrogate_loss);
  }

  // Retrain from scratch on every stored example, several passes.
  constexpr int kRetrainPasses = 20;
  LinearPolicy fresh{Eigen::VectorXd::Zero(dim), final_policy.rule};
  int64_t step_count = 0;
  for (int pass = 0; pass < kRetrainPasses; ++pass) {
    for (const ExampleBatch& batch : run.examples) {
      ++step_count;
      const double step =
          run.config.eta0 / std::sqrt(static_cast<double>(1 + step_count / 50));
      fresh = SurrogateUpdate(reduction, std::move(fresh), batch, step);
    }
  }

  std::vector<LinearPolicy> candidates{final_policy, fresh};
  std::vector<std::string> names{"final", "retrained"};
  constexpr int kRandomCandidates = 100;
  for (LinearPolicy& p :
       RandomPolicies(dim, kRandomCandidates, final_policy.rule, seed)) {
    names.push_back("random#" + std::to_string(candidates.size() - 2));
    candidates.push_back(std::move(p));
  }
  const SurrogateFn surrogate = [reduction](const LinearPolicy& p,
                                            ExampleSpan batch) {
    return SurrogateLoss(reduction, p.weights, batch);
  };
  ConvexGapReport report = ConvexGapEstimate(inputs, surrogate, candidates, names);
  report.method =
      "minima over {final policy, policy retrained for 20 passes on all "
      "stored examples, 100 N(0,1) random policies}";
  return report;
}

std::vector<int> GreedyPolicyList(const Objective& obj,
                                  const Featurizer& features,
                                  std::span<const LinearPolicy> pool,
                                  const WeightedStates& states, int k) {
  if (pool.empty()) throw std::invalid_argument("empty policy pool");
  std::vector<int> chosen;
  // Lists built so far, per state.
  std::vector<ItemList> lists(states.size());
  for (int i = 0; i < k; ++i) {
    std::vector<Eigen::MatrixXd> seen;
    seen.reserve(states.size());
    for (size_t j = 0; j < states.size(); ++j) {
      seen.push_back(features.Features(states.ids[j], lists[j]));
    }
    double best_value = -1.0;
    int best = 0;
    std::vector<Item> best_items;
    for (size_t p = 0; p < pool.size(); ++p) {
      double value = 0.0;
      std::vector<Item> items(states.size());
      for (size_t j = 0; j < states.size(); ++j) {
        ItemList& list = lists[j];
        items[j] = pool[p].Predict(seen[j]);
        list.push_back(items[j]);
        value += states.weights[j] * obj.Evaluate(states.ids[j], list);
        list.pop_back();
      }
      if (value > best_value) {
        best_value = value;
        best = static_cast<int>(p);
        best_items = std::move(items);
      }
    }
    chosen.push_back(best);
    for (size_t j = 0; j < states.size(); ++j) lists[j].push_back(best_items[j]);
  }
  return chosen;
}

double EvaluatePolicySequence(const Objective& obj, const Featurizer& features,
                              std::span<const LinearPolicy> pool,
                              std::span<const int> sequence,
                              const WeightedStates& states) {
  std::vector<LinearPolicy> slots;
  for (int idx : sequence) slots.push_back(pool[idx]);
  if (slots.size() == 1) {
    return EvaluatePolicies(obj, features, slots, states, 1);
  }
  return EvaluatePolicies(obj, features, slots, states,
                          static_cast<int>(slots.size()));
}

ContextualBoundReport CheckContextualBound(const ContextualProblem& problem,
                                           const ContextualRunResult& run,
                                           std::span<const LinearPolicy> grid,
                                           double delta) {
  if (run.examples.size() != run.rounds.size() || run.rounds.empty()) {
    throw std::invalid_argument("bound check needs stored examples");
  }
  if (run.policies.size() != 1) {
    throw std::invalid_argument("bound check is defined for SCP runs");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bad delta");
  const Objective& obj = *problem.objective;
  const Featurizer& feats = *problem.features;
  const int m = run.config.m;
  const int k = run.config.k;
  const double t_total = static_cast<double>(run.rounds.size());
  const std::vector<bool> mask = feats.ListDependentMask();

  ContextualBoundReport report;
  double mixture = 0.0;
  for (const PolicySnapshot& snap : run.snapshots) {
    mixture += EvaluatePolicies(obj, feats, snap.policies, problem.train, m);
  }
  report.f_mixture = mixture / run.snapshots.size();

  double played = 0.0;
  for (const ContextualRound& r : run.rounds) played += r.csc_loss;
  const std::vector<LinearPolicy> full_pool = CandidatePool(grid, mask, true);
  double best_fixed = std::numeric_limits<double>::infinity();
  for (const LinearPolicy& p : full_pool) {
    double total = 0.0;
    for (const ExampleBatch& batch : run.examples) total += CscLoss(p, batch);
    best_fixed = std::min(best_fixed, total);
  }
  report.regret_per_round = (played - best_fixed) / t_total;

  const std::vector<LinearPolicy> state_only = CandidatePool(grid, mask, false);
  const WeightedStates empirical = EmpiricalStates(run.sampled_states());
  const std::vector<int> seq = GreedyPolicyList(obj, feats, state_only, empirical, k);
  report.f_comparator =
      EvaluatePolicySequence(obj, feats, state_only, seq, empirical);
  report.comparator =
      "greedy list of " + std::to_string(k) + " state-only policies from a " +
      std::to_string(grid.size()) + "-policy random grid";

  report.ratio = 1.0 - std::exp(-static_cast<double>(m) / k);
  report.slack = 2.0 * std::sqrt(2.0 * std::log(1.0 / delta) / t_total);
  report.bound =
      report.ratio * report.f_comparator - report.regret_per_round - report.slack;
  report.holds = report.f_mixture >= report.bound;
  return report;
}

PolicyGridRunResult RunScpPolicyGrid(const ContextualConfig& config,
                                     const ContextualProblem& problem,
                                     std::span<const LinearPolicy> grid) {
  ValidateConfig(config);
  if (grid.empty()) throw std::invalid_argument("empty policy grid");
  if (config.normalize_by_length) {
    throw std::invalid_argument(
        "policy-grid runs need costs in [0, 1]; length normalization is off");
  }
  const Objective& obj = *problem.objective;
  const Featurizer& feats = *problem.features;
  const int n = static_cast<int>(grid.size());
  const int bound = LossBound(config.m, config.k);
  const std::vector<double> weights = PositionWeights(config.m, config.k);
  const int64_t every = config.eval_every > 0
                            ? config.eval_every
                            : std::max<int64_t>(1, (config.rounds + 199) / 200);
  const double eta = n >= 2 ? OptimalEta(n, std::max<int64_t>(config.rounds, 1))
                            : 1.0;

  PolicyGridRunResult result;
  result.ledger = RegretLedger(n);
  Rng rng(config.seed);
  ExpertDistribution dist = ExpertDistribution::Uniform(n);
  for (int64_t t = 1; t <= config.rounds; ++t) {
    if ((t - 1) % every == 0) {
      result.snapshots.push_back({t, dist.probabilities()});
    }
    const int x = SampleState(problem.train, rng);
    const std::vector<int> picks = dist.Sample(config.m, rng);
    ItemList list;
    std::vector<Eigen::MatrixXd> seen;
    for (int i = 0; i < config.m; ++i) {
      Eigen::MatrixXd v = feats.Features(x, list);
      list.push_back(grid[picks[i]].Predict(v));
      seen.push_back(std::move(v));
    }
    ExampleBatch examples =
        MakeCscExamples(obj, x, list, std::move(seen), weights, false);
    std::vector<double> losses(n);
    for (int p = 0; p < n; ++p) {
      losses[p] = std::clamp(CscLoss(grid[p], examples), 0.0,
                             static_cast<double>(bound));
    }
    result.ledger.Append(dist.probabilities(), losses);
    ContextualRound round;
    round.state = x;
    round.train_f = obj.Evaluate(x, list);
    for (int i = 0; i < config.m; ++i) {
      round.csc_loss += examples[i].weight * examples[i].costs(list[i]);
    }
    round.list = std::move(list);
    result.rounds.push_back(std::move(round));
    if (n >= 2) {
      dist = WmUpdate(dist, LossVector{losses, static_cast<double>(bound)}, eta);
    }
  }
  result.final_distribution = dist;
  return result;
}

double EvaluatePolicyGridMixture(const ContextualProblem& problem,
                                 const PolicyGridRunResult& run,
                                 std::span<const LinearPolicy> grid,
                                 const WeightedStates& states, int m, int n_mc,
                                 Rng& rng) {
  if (run.snapshots.empty()) throw std::invalid_argument("no snapshots");
  if (n_mc < 1) throw std::invalid_argument("n_mc must be >= 1");
  std::uniform_int_distribution<size_t> which(0, run.snapshots.size() - 1);
  double total = 0.0;
  std::vector<LinearPolicy> slots(m);
  for (int i = 0; i < n_mc; ++i) {
    const std::vector<double>& probs = run.snapshots[which(rng)].probabilities;
    std::discrete_distribution<int> pick(probs.begin(), probs.end());
    for (LinearPolicy& slot : slots) slot = grid[pick(rng)];
    total += EvaluatePolicies(*problem.objective, *problem.features, slots,
                              states, m);
  }
  return total / n_mc;
}

}  // namespace scp
