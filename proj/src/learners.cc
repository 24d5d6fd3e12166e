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

#include "scp/learners.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace scp {
namespace {

std::vector<double> Normalize(std::vector<double> w) {
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  bool floored = false;
  for (double& v : w) {
    if (!(v >= kWeightFloor)) {
      v = kWeightFloor;
      floored = true;
    }
  }
  if (floored) {
    total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= total;
  }
  return w;
}

}  // namespace

ExpertDistribution ExpertDistribution::Uniform(int n) {
  if (n < 1) throw std::invalid_argument("need at least one expert");
  return ExpertDistribution(std::vector<double>(n, 1.0 / n));
}

ExpertDistribution ExpertDistribution::FromWeights(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("need at least one expert");
  for (double w : weights) {
    if (!std::isfinite(w) || !(w > 0.0)) {
      throw std::invalid_argument("expert weights must be finite and positive");
    }
  }
  return ExpertDistribution(Normalize(std::move(weights)));
}

std::vector<int> ExpertDistribution::Sample(int n, Rng& rng) const {
  std::discrete_distribution<int> pick(probs_.begin(), probs_.end());
  std::vector<int> out(n);
  for (int& i : out) i = pick(rng);
  return out;
}

int ExpertDistribution::Argmax() const {
  return static_cast<int>(std::max_element(probs_.begin(), probs_.end()) -
                          probs_.begin());
}

ExpertDistribution WmUpdate(const ExpertDistribution& dist,
                            const LossVector& loss, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("eta must be positive and finite");
  }
  if (!(loss.bound > 0.0)) throw std::invalid_argument("loss bound must be > 0");
  if (static_cast<int>(loss.values.size()) != dist.size()) {
    throw std::invalid_argument("loss vector size does not match experts");
  }
  const double slack = 1e-9 * loss.bound;
  double min_loss = std::numeric_limits<double>::infinity();
  for (double l : loss.values) {
    if (!std::isfinite(l)) throw std::invalid_argument("non-finite loss");
    if (l < -slack || l > loss.bound + slack) {
      throw std::invalid_argument("loss " + std::to_string(l) +
                                  " outside [0, " + std::to_string(loss.bound) +
                                  "]");
    }
    min_loss = std::min(min_loss, l);
  }
  std::vector<double> w(dist.probabilities());
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] *= std::exp(-eta * (loss.values[i] - min_loss) / loss.bound);
  }
  return ExpertDistribution::FromWeights(Normalize(std::move(w)));
}

double OptimalEta(int n_experts, int64_t horizon) {
  if (n_experts < 2) throw std::domain_error("optimal eta needs >= 2 experts");
  if (horizon < 1) throw std::domain_error("horizon must be >= 1");
  return std::sqrt(8.0 * std::log(static_cast<double>(n_experts)) /
                   static_cast<double>(horizon));
}

double DoublingEta(int n_experts, int64_t round) {
  if (round < 1) throw std::domain_error("rounds are 1-based");
  int64_t epoch_start = 1;
  while (epoch_start * 2 <= round) epoch_start *= 2;
  return OptimalEta(n_experts, epoch_start);
}

ExpertDistribution Exp3Mix(const ExpertDistribution& weights, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1]");
  }
  std::vector<double> p(weights.probabilities());
  const double uniform = 1.0 / p.size();
  for (double& v : p) v = (1.0 - gamma) * v + gamma * uniform;
  return ExpertDistribution::FromWeights(std::move(p));
}

std::vector<double> Exp3LossEstimate(const ExpertDistribution& sampling,
                                     std::span<const int> chosen,
                                     std::span<const double> observed) {
  if (chosen.size() != observed.size() || chosen.empty()) {
    throw std::invalid_argument("EXP3 needs one observed loss per play");
  }
  std::vector<double> estimate(sampling.size(), 0.0);
  for (size_t j = 0; j < chosen.size(); ++j) {
    const int i = chosen[j];
    if (i < 0 || i >= sampling.size()) {
      throw std::invalid_argument("played expert out of range");
    }
    const double p = sampling.probability(i);
    if (!(p > 0.0)) throw std::invalid_argument("played expert has p = 0");
    estimate[i] += observed[j] / (p * chosen.size());
  }
  return estimate;
}

ExpertDistribution Exp3Update(const ExpertDistribution& weights,
                              std::span<const int> chosen,
                              std::span<const double> observed, double bound,
                              double eta, double gamma) {
  const ExpertDistribution sampling = Exp3Mix(weights, gamma);
  const std::vector<double> estimate =
      Exp3LossEstimate(sampling, chosen, observed);
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  // Estimates are unbounded above, so shift by the minimum before
  // exponentiating to keep at least one weight at full scale.
  const double min_est = *std::min_element(estimate.begin(), estimate.end());
  std::vector<double> w(weights.probabilities());
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] *= std::exp(-eta * (estimate[i] - min_est) / bound);
  }
  return ExpertDistribution::FromWeights(Normalize(std::move(w)));
}

RegretLedger::RegretLedger(int n_experts)
    : n_experts_(n_experts), cumulative_(n_experts, 0.0) {}

void RegretLedger::Append(std::span<const double> probabilities,
                          std::span<const double> losses) {
  if (static_cast<int>(probabilities.size()) != n_experts_) {
    throw std::invalid_argument("ledger: probability vector size mismatch");
  }
  double expected = 0.0;
  for (int i = 0; i < n_experts_; ++i) expected += probabilities[i] * losses[i];
  AppendPlayed(expected, losses);
}

void RegretLedger::AppendPlayed(double played_loss,
                                std::span<const double> losses) {
  if (static_cast<int>(losses.size()) != n_experts_) {
    throw std::invalid_argument("ledger: loss vector size mismatch");
  }
  expected_loss_.push_back(played_loss);
  losses_.emplace_back(losses.begin(), losses.end());
  for (int i = 0; i < n_experts_; ++i) cumulative_[i] += losses[i];
  const double prev = learner_cum_.empty() ? 0.0 : learner_cum_.back();
  learner_cum_.push_back(prev + played_loss);
  best_cum_.push_back(*std::min_element(cumulative_.begin(), cumulative_.end()));
}

void RegretLedger::WriteCsv(std::ostream& out) const {
  out << "round,expected_loss,best_fixed_cumloss,regret\n";
  for (int t = 0; t < rounds(); ++t) {
    out << (t + 1) << ',' << expected_loss_[t] << ',' << best_cum_[t] << ','
        << regret_at(t) << '\n';
  }
}

double Regret(const RegretLedger& ledger) {
  if (ledger.rounds() < 1) throw std::invalid_argument("ledger is empty");
  double learner = 0.0;
  std::vector<double> per_expert(ledger.n_experts(), 0.0);
  for (int t = 0; t < ledger.rounds(); ++t) {
    learner += ledger.expected_losses()[t];
    const std::vector<double>& l = ledger.losses(t);
    for (int i = 0; i < ledger.n_experts(); ++i) per_expert[i] += l[i];
  }
  return learner - *std::min_element(per_expert.begin(), per_expert.end());
}

}  // namespace scp
