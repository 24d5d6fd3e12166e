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

// Context-free SCP: a single online learner over items is trained from
// position-discounted marginal benefits, and lists are built by sampling the
// learner's distribution m times. Also hosts the clairvoyant greedy baseline,
// the brute-force optimum, Monte Carlo evaluation of item distributions and
// the approximation-lemma checks built on them.

#ifndef SCP_CONTEXT_FREE_H_
#define SCP_CONTEXT_FREE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scp/learners.h"
#include "scp/objective.h"

namespace scp {

// w_i = (1 - 1/k)^(m - i) for i = 1..m, returned 0-based. w_m = 1.
std::vector<double> PositionWeights(int m, int k);

// k' = min(m, k), the range of every SCP loss.
inline int LossBound(int m, int k) { return m < k ? m : k; }

// r(s) = sum_{i=1..m} w_i * b(s | L_{i-1}, x), with m = |list|.
double DiscountedCumulativeBenefit(const Objective& obj, int state,
                                   ItemSpan list, Item item, int k);

// r(s) for every item of the ground set.
std::vector<double> DiscountedBenefits(const Objective& obj, int state,
                                       ItemSpan list, int k);

// l(s) = max_s' r(s') - r(s), declared bound min(|list|, k).
LossVector ScpLosses(const Objective& obj, int state, ItemSpan list, int k);

enum class LearnerKind { kWeightedMajority, kExp3 };
enum class EtaMode { kOptimal, kDoubling, kFixed };

struct ScpConfig {
  int m = 4;
  int k = 4;
  int64_t rounds = 0;
  uint64_t seed = 0;
  LearnerKind learner = LearnerKind::kWeightedMajority;
  EtaMode eta_mode = EtaMode::kOptimal;
  double eta = 1.0;  // used with EtaMode::kFixed
  // EXP3 uniform exploration; negative selects the horizon-tuned default.
  double exp3_gamma = -1.0;
  // Snapshot p_t every this many rounds; 0 means ceil(T / 200).
  int64_t snapshot_every = 0;
};

void ValidateConfig(const ScpConfig& config);

struct DistributionSnapshot {
  int64_t round = 0;  // 1-based round whose playing distribution this is
  std::vector<double> probabilities;
};

struct ContextFreeRound {
  int state = 0;
  ItemList list;
  double f_value = 0.0;
};

struct ContextFreeRunResult {
  ScpConfig config;
  std::vector<ContextFreeRound> rounds;
  ExpertDistribution final_distribution = ExpertDistribution::Uniform(1);
  RegretLedger ledger;
  std::vector<DistributionSnapshot> snapshots;
  double max_loss = 0.0;
  // Rounds whose losses left [0, k'] (beyond 1e-12).
  int loss_range_violations = 0;

  std::vector<int> sampled_states() const;
};

// Learning rate used at 1-based `round`.
double EtaForRound(const ScpConfig& config, int n_items, int64_t round);

// Runs `config.rounds` rounds of context-free SCP with states drawn from
// `distribution`. Evaluation failures are rethrown as std::runtime_error
// naming the round.
ContextFreeRunResult RunScpContextFree(const ScpConfig& config,
                                       const Objective& obj,
                                       const WeightedStates& distribution);

// Greedy list of length k on F(L) = E_states[f_x(L)]; ties go to the lowest
// item id.
ItemList GreedyClairvoyant(const Objective& obj, const WeightedStates& states,
                           int k);
// Extends `prefix` greedily until it has `length` items.
ItemList GreedyExtend(const Objective& obj, const WeightedStates& states,
                      ItemList prefix, int length);

inline constexpr double kBruteForceLimit = 1e7;

struct BruteForceResult {
  ItemList list;
  double value = 0.0;
};

// Exhaustive search over ordered length-k lists with repetition. Throws
// std::invalid_argument when |S|^k exceeds kBruteForceLimit.
BruteForceResult BruteForceOpt(const Objective& obj,
                               const WeightedStates& states, int k);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

// F(p, m): lists of m items drawn with replacement from `dist`, scored by
// their exact expectation over `states`.
McEstimate EvaluateDistribution(const Objective& obj,
                                const WeightedStates& states,
                                const std::vector<double>& dist, int m,
                                int n_mc, Rng& rng);

// F(pbar, m) for the uniform mixture over `snapshots`.
McEstimate EvaluateMixture(const Objective& obj, const WeightedStates& states,
                           const std::vector<DistributionSnapshot>& snapshots,
                           int m, int n_mc, Rng& rng);

struct SamplingLemmaReport {
  double mean = 0.0;
  double std_error = 0.0;
  double f_reference = 0.0;
  double factor = 0.0;     // 1 - (1 - 1/|B|)^k
  double threshold = 0.0;  // factor * f(B) - 3 SE
  bool holds = false;
};

// Draws `sample_len` items uniformly from `reference` n_mc times and checks
// mean f >= (1 - (1 - 1/|B|)^sample_len) f(B) - 3 SE for state `state`.
SamplingLemmaReport VerifySamplingLemma(const Objective& obj, int state,
                                        ItemSpan reference, int sample_len,
                                        int n_mc, Rng& rng);

struct AdditiveErrorReport {
  double f_list = 0.0;
  double f_reference = 0.0;
  std::vector<double> epsilons;  // eps_j, j = 1..|A|
  double bound = 0.0;
  bool holds = false;
};

// For any lists A (`list`) and B (`reference`) and
//   eps_j = E_{s ~ U(B)}[F(A_{j-1} + s)] - F(A_j),
// checks F(A) >= (1 - (1 - 1/|B|)^|A|) F(B) - sum_i (1 - 1/|B|)^(|A|-i) eps_i
// up to 1e-9.
AdditiveErrorReport CheckAdditiveErrorBound(const Objective& obj,
                                            const WeightedStates& states,
                                            ItemSpan list, ItemSpan reference);

struct TheoremBoundReport {
  double f_mixture = 0.0;
  double f_mixture_se = 0.0;
  double f_comparator = 0.0;
  double ratio = 0.0;   // 1 - exp(-m/k)
  double regret_per_round = 0.0;
  double slack = 0.0;   // confidence term
  double bound = 0.0;
  bool holds = false;
};

// F(pbar, m) >= (1 - e^{-m/k}) F_emp(L*_k) - R/T - 3 sqrt(2 k' ln(2/delta)/T),
// with F(pbar, m) estimated over `eval_states` and F_emp over the run's own
// sampled states. Requires |S|^k within the brute-force limit.
TheoremBoundReport CheckContextFreeBound(const Objective& obj,
                                         const ContextFreeRunResult& run,
                                         const WeightedStates& eval_states,
                                         double delta, int n_mc, Rng& rng);

}  // namespace scp

#endif  // SCP_CONTEXT_FREE_H_
