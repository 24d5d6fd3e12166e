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

// No-regret learners over a finite set of experts (items or policies):
// randomized Weighted Majority for full-information losses, EXP3 for bandit
// feedback, and an append-only regret ledger.

#ifndef SCP_LEARNERS_H_
#define SCP_LEARNERS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "scp/objective.h"

namespace scp {

inline constexpr double kWeightFloor = 1e-300;

// A strictly positive distribution over experts.
class ExpertDistribution {
 public:
  // Uniform over `n` experts (n >= 1).
  static ExpertDistribution Uniform(int n);
  // Normalizes `weights`; all entries must be finite and positive.
  static ExpertDistribution FromWeights(std::vector<double> weights);

  int size() const { return static_cast<int>(probs_.size()); }
  const std::vector<double>& probabilities() const { return probs_; }
  double probability(int i) const { return probs_[i]; }

  // `n` i.i.d. draws with replacement.
  std::vector<int> Sample(int n, Rng& rng) const;
  // Most probable expert; ties go to the lowest index.
  int Argmax() const;

 private:
  explicit ExpertDistribution(std::vector<double> probs)
      : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

// A loss per expert together with its declared range [0, bound].
struct LossVector {
  std::vector<double> values;
  double bound = 1.0;
};

// Randomized Weighted Majority step:
//   w_i <- w_i * exp(-eta * loss_i / bound), then renormalize.
// Losses are shifted by their minimum before exponentiating, which leaves the
// result unchanged mathematically. Weights are floored at kWeightFloor.
ExpertDistribution WmUpdate(const ExpertDistribution& dist,
                            const LossVector& loss, double eta);

// sqrt(8 ln(n) / horizon). Throws std::domain_error when n < 2 or horizon < 1.
double OptimalEta(int n_experts, int64_t horizon);

// Learning rate for an unknown horizon: at round t (1-based) use
// OptimalEta(n, 2^floor(log2 t)), so eta drops by sqrt(2) at 1, 2, 4, 8, ...
double DoublingEta(int n_experts, int64_t round);

// EXP3 sampling distribution: (1 - gamma) * weights + gamma / n.
ExpertDistribution Exp3Mix(const ExpertDistribution& weights, double gamma);

// One EXP3 step from bandit feedback. `chosen` are the experts played this
// round (drawn from Exp3Mix(weights, gamma)) and `observed` their losses. The
// importance-weighted estimate
//   lhat_i = (1/|chosen|) * sum_j observed_j * [chosen_j == i] / p_i
// is fed to WmUpdate. Throws if any played expert has probability zero.
ExpertDistribution Exp3Update(const ExpertDistribution& weights,
                              std::span<const int> chosen,
                              std::span<const double> observed, double bound,
                              double eta, double gamma);

// Importance-weighted loss estimate used by Exp3Update.
std::vector<double> Exp3LossEstimate(const ExpertDistribution& sampling,
                                     std::span<const int> chosen,
                                     std::span<const double> observed);

// Per-round record of the learner's expected loss and every expert's loss.
class RegretLedger {
 public:
  explicit RegretLedger(int n_experts = 0);

  // `probabilities` is the distribution the learner played with this round.
  void Append(std::span<const double> probabilities,
              std::span<const double> losses);
  // For deterministic learners the played loss is recorded directly.
  void AppendPlayed(double played_loss, std::span<const double> losses);

  int rounds() const { return static_cast<int>(expected_loss_.size()); }
  int n_experts() const { return n_experts_; }
  const std::vector<double>& expected_losses() const { return expected_loss_; }
  const std::vector<double>& losses(int round) const { return losses_[round]; }
  const std::vector<double>& cumulative_losses() const { return cumulative_; }

  // Running quantities after round index `t` (0-based, inclusive).
  double learner_cumloss(int t) const { return learner_cum_[t]; }
  double best_fixed_cumloss(int t) const { return best_cum_[t]; }
  double regret_at(int t) const { return learner_cum_[t] - best_cum_[t]; }

  void WriteCsv(std::ostream& out) const;

 private:
  int n_experts_;
  std::vector<double> expected_loss_;
  std::vector<std::vector<double>> losses_;
  std::vector<double> cumulative_;
  std::vector<double> learner_cum_;
  std::vector<double> best_cum_;
};

// sum_t E_{s~p_t}[l_t(s)] - min_s sum_t l_t(s), recomputed from the stored
// rows. Throws std::invalid_argument on an empty ledger.
double Regret(const RegretLedger& ledger);

}  // namespace scp

#endif  // SCP_LEARNERS_H_
