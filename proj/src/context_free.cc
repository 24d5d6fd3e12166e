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

#include "scp/context_free.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scp {
namespace {

constexpr double kLossTolerance = 1e-12;

McEstimate Summarize(double sum, double sum_sq, int n) {
  McEstimate out;
  out.samples = n;
  out.mean = sum / n;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1));
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

double Exp3Gamma(const ScpConfig& config, int n_items) {
  if (config.exp3_gamma >= 0.0) return config.exp3_gamma;
  const double n = n_items;
  const double horizon = std::max<int64_t>(config.rounds, 1);
  return std::min(1.0, std::sqrt(n * std::log(std::max(n, 2.0)) /
                                 ((std::numbers::e - 1.0) * horizon)));
}

}  // namespace

std::vector<double> PositionWeights(int m, int k) {
  if (m < 1 || k < 1) throw std::invalid_argument("m and k must be >= 1");
  std::vector<double> w(m);
  const double base = 1.0 - 1.0 / k;
  for (int i = 1; i <= m; ++i) w[i - 1] = std::pow(base, m - i);
  return w;
}

double DiscountedCumulativeBenefit(const Objective& obj, int state,
                                   ItemSpan list, Item item, int k) {
  obj.CheckItem(item);
  if (list.empty()) return 0.0;
  const std::vector<double> w = PositionWeights(static_cast<int>(list.size()), k);
  double r = 0.0;
  for (size_t i = 0; i < list.size(); ++i) {
    r += w[i] * MarginalBenefit(obj, state, Prefix(list, i), item);
  }
  return r;
}

std::vector<double> DiscountedBenefits(const Objective& obj, int state,
                                       ItemSpan list, int k) {
  std::vector<double> r(obj.num_items(), 0.0);
  if (list.empty()) return r;
  const std::vector<double> w = PositionWeights(static_cast<int>(list.size()), k);
  for (size_t i = 0; i < list.size(); ++i) {
    const std::vector<double> b = AllMarginalBenefits(obj, state, Prefix(list, i));
    for (size_t s = 0; s < r.size(); ++s) r[s] += w[i] * b[s];
  }
  return r;
}

LossVector ScpLosses(const Objective& obj, int state, ItemSpan list, int k) {
  if (list.empty()) throw std::invalid_argument("SCP losses need |L| >= 1");
  const std::vector<double> r = DiscountedBenefits(obj, state, list, k);
  const double best = *std::max_element(r.begin(), r.end());
  LossVector loss;
  loss.bound = LossBound(static_cast<int>(list.size()), k);
  loss.values.resize(r.size());
  for (size_t s = 0; s < r.size(); ++s) loss.values[s] = best - r[s];
  return loss;
}

void ValidateConfig(const ScpConfig& config) {
  if (config.m < 1) throw std::invalid_argument("m must be >= 1");
  if (config.k < 1) throw std::invalid_argument("k must be >= 1");
  if (config.rounds < 0) throw std::invalid_argument("T must be >= 0");
  if (config.eta_mode == EtaMode::kFixed && !(config.eta > 0.0)) {
    throw std::invalid_argument("fixed eta must be positive");
  }
  if (config.snapshot_every < 0) {
    throw std::invalid_argument("snapshot interval must be >= 0");
  }
}

std::vector<int> ContextFreeRunResult::sampled_states() const {
  std::vector<int> out;
  out.reserve(rounds.size());
  for (const ContextFreeRound& r : rounds) out.push_back(r.state);
  return out;
}

double EtaForRound(const ScpConfig& config, int n_items, int64_t round) {
  if (config.eta_mode == EtaMode::kFixed) return config.eta;
  if (n_items < 2) return 1.0;  // a single expert never moves
  const bool exp3 = config.learner == LearnerKind::kExp3;
  int64_t horizon = std::max<int64_t>(config.rounds, 1);
  if (config.eta_mode == EtaMode::kDoubling) {
    horizon = 1;
    while (horizon * 2 <= round) horizon *= 2;
  }
  if (exp3) {
    return std::sqrt(2.0 * std::log(static_cast<double>(n_items)) /
                     (static_cast<double>(n_items) * horizon));
  }
  return OptimalEta(n_items, horizon);
}

ContextFreeRunResult RunScpContextFree(const ScpConfig& config,
                                       const Objective& obj,
                                       const WeightedStates& distribution) {
  ValidateConfig(config);
  if (distribution.empty()) throw std::invalid_argument("empty state sampler");
  const int n = obj.num_items();
  const int bound = LossBound(config.m, config.k);
  const int64_t every =
      config.snapshot_every > 0
          ? config.snapshot_every
          : std::max<int64_t>(1, (config.rounds + 199) / 200);
  const double gamma = Exp3Gamma(config, n);

  ContextFreeRunResult result;
  result.config = config;
  result.ledger = RegretLedger(n);
  result.rounds.reserve(config.rounds);

  Rng rng(config.seed);
  ExpertDistribution dist = ExpertDistribution::Uniform(n);
  for (int64_t t = 1; t <= config.rounds; ++t) {
    const ExpertDistribution playing =
        config.learner == LearnerKind::kExp3 ? Exp3Mix(dist, gamma) : dist;
    if ((t - 1) % every == 0) {
      result.snapshots.push_back({t, playing.probabilities()});
    }
    const int x = SampleState(distribution, rng);
    ItemList list = playing.Sample(config.m, rng);

    double f = 0.0;
    std::vector<double> r;
    try {
      f = obj.Evaluate(x, list);
      r = DiscountedBenefits(obj, x, list, config.k);
    } catch (const std::exception& e) {
      throw std::runtime_error("objective evaluation failed in round " +
                               std::to_string(t) + " (state " +
                               std::to_string(x) + "): " + e.what());
    }
    const double best = *std::max_element(r.begin(), r.end());
    LossVector loss{std::vector<double>(n), static_cast<double>(bound)};
    bool out_of_range = false;
    for (int s = 0; s < n; ++s) {
      loss.values[s] = best - r[s];
      if (loss.values[s] < -kLossTolerance ||
          loss.values[s] > bound + kLossTolerance) {
        out_of_range = true;
      }
      result.max_loss = std::max(result.max_loss, loss.values[s]);
    }
    if (out_of_range) ++result.loss_range_violations;

    result.ledger.Append(playing.probabilities(), loss.values);
    result.rounds.push_back({x, list, f});

    const double eta = EtaForRound(config, n, t);
    if (n < 2) continue;
    if (config.learner == LearnerKind::kWeightedMajority) {
      dist = WmUpdate(dist, loss, eta);
    } else {
      // Bandit feedback: only the played items' benefits are observed, so the
      // loss is measured against the bound rather than against max r.
      std::vector<double> observed(list.size());
      for (size_t j = 0; j < list.size(); ++j) {
        observed[j] = std::clamp(bound - r[list[j]], 0.0,
                                 static_cast<double>(bound));
      }
      dist = Exp3Update(dist, list, observed, bound, eta, gamma);
    }
  }
  result.final_distribution =
      config.learner == LearnerKind::kExp3 ? Exp3Mix(dist, gamma) : dist;
  return result;
}

ItemList GreedyExtend(const Objective& obj, const WeightedStates& states,
                      ItemList prefix, int length) {
  if (states.empty()) throw std::invalid_argument("greedy needs >= 1 state");
  const int n = obj.num_items();
  while (static_cast<int>(prefix.size()) < length) {
    std::vector<double> avg(n, 0.0);
    for (size_t j = 0; j < states.size(); ++j) {
      const std::vector<double> b = AllMarginalBenefits(obj, states.ids[j], prefix);
      for (int s = 0; s < n; ++s) avg[s] += states.weights[j] * b[s];
    }
    prefix.push_back(
        static_cast<Item>(std::max_element(avg.begin(), avg.end()) - avg.begin()));
  }
  return prefix;
}

ItemList GreedyClairvoyant(const Objective& obj, const WeightedStates& states,
                           int k) {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  return GreedyExtend(obj, states, {}, k);
}

BruteForceResult BruteForceOpt(const Objective& obj,
                               const WeightedStates& states, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (states.empty()) throw std::invalid_argument("brute force needs states");
  const int n = obj.num_items();
  const double count = std::pow(static_cast<double>(n), k);
  if (count > kBruteForceLimit) {
    throw std::invalid_argument(
        "brute force refused: |S|^k = " + std::to_string(n) + "^" +
        std::to_string(k) + " exceeds the limit of 1e7 lists");
  }
  BruteForceResult best;
  best.value = -1.0;
  ItemList list(k, 0);
  while (true) {
    const double v = ExpectedValue(obj, states, list);
    if (v > best.value) {
      best.value = v;
      best.list = list;
    }
    int pos = k - 1;
    while (pos >= 0 && ++list[pos] == n) list[pos--] = 0;
    if (pos < 0) break;
  }
  return best;
}

McEstimate EvaluateDistribution(const Objective& obj,
                                const WeightedStates& states,
                                const std::vector<double>& dist, int m,
                                int n_mc, Rng& rng) {
  if (n_mc < 1) throw std::invalid_argument("n_mc must be >= 1");
  if (static_cast<int>(dist.size()) != obj.num_items()) {
    throw std::invalid_argument("distribution size does not match items");
  }
  std::discrete_distribution<Item> pick(dist.begin(), dist.end());
  ItemList list(m);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n_mc; ++i) {
    for (Item& s : list) s = pick(rng);
    const double v = ExpectedValue(obj, states, list);
    sum += v;
    sum_sq += v * v;
  }
  return Summarize(sum, sum_sq, n_mc);
}

McEstimate EvaluateMixture(const Objective& obj, const WeightedStates& states,
                           const std::vector<DistributionSnapshot>& snapshots,
                           int m, int n_mc, Rng& rng) {
  if (snapshots.empty()) throw std::invalid_argument("no snapshots");
  if (n_mc < 1) throw std::invalid_argument("n_mc must be >= 1");
  std::vector<std::discrete_distribution<Item>> picks;
  picks.reserve(snapshots.size());
  for (const DistributionSnapshot& snap : snapshots) {
    picks.emplace_back(snap.probabilities.begin(), snap.probabilities.end());
  }
  std::uniform_int_distribution<size_t> which(0, snapshots.size() - 1);
  ItemList list(m);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n_mc; ++i) {
    auto& pick = picks[which(rng)];
    for (Item& s : list) s = pick(rng);
    const double v = ExpectedValue(obj, states, list);
    sum += v;
    sum_sq += v * v;
  }
  return Summarize(sum, sum_sq, n_mc);
}

SamplingLemmaReport VerifySamplingLemma(const Objective& obj, int state,
                                        ItemSpan reference, int sample_len,
                                        int n_mc, Rng& rng) {
  if (reference.empty()) throw std::invalid_argument("reference list is empty");
  if (n_mc < 1) throw std::invalid_argument("n_mc must be >= 1");
  std::uniform_int_distribution<size_t> pick(0, reference.size() - 1);
  ItemList list(sample_len);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n_mc; ++i) {
    for (Item& s : list) s = reference[pick(rng)];
    const double v = obj.Evaluate(state, list);
    sum += v;
    sum_sq += v * v;
  }
  const McEstimate est = Summarize(sum, sum_sq, n_mc);
  SamplingLemmaReport report;
  report.mean = est.mean;
  report.std_error = est.std_error;
  report.f_reference = obj.Evaluate(state, reference);
  report.factor =
      1.0 - std::pow(1.0 - 1.0 / static_cast<double>(reference.size()),
                     sample_len);
  report.threshold = report.factor * report.f_reference - 3.0 * est.std_error;
  report.holds = report.mean >= report.threshold;
  return report;
}

AdditiveErrorReport CheckAdditiveErrorBound(const Objective& obj,
                                            const WeightedStates& states,
                                            ItemSpan list, ItemSpan reference) {
  if (reference.empty()) throw std::invalid_argument("reference list is empty");
  const double shrink = 1.0 - 1.0 / static_cast<double>(reference.size());
  const int a = static_cast<int>(list.size());
  AdditiveErrorReport report;
  report.f_list = ExpectedValue(obj, states, list);
  report.f_reference = ExpectedValue(obj, states, reference);
  double penalty = 0.0;
  ItemList prefix;
  for (int j = 1; j <= a; ++j) {
    double avg = 0.0;
    prefix.push_back(0);
    for (Item s : reference) {
      prefix.back() = s;
      avg += ExpectedValue(obj, states, prefix);
    }
    avg /= reference.size();
    prefix.back() = list[j - 1];
    const double eps = avg - ExpectedValue(obj, states, prefix);
    report.epsilons.push_back(eps);
    penalty += std::pow(shrink, a - j) * eps;
  }
  report.bound = (1.0 - std::pow(shrink, a)) * report.f_reference - penalty;
  report.holds = report.f_list >= report.bound - 1e-9;
  return report;
}

TheoremBoundReport CheckContextFreeBound(const Objective& obj,
                                         const ContextFreeRunResult& run,
                                         const WeightedStates& eval_states,
                                         double delta, int n_mc, Rng& rng) {
  const int64_t t_total = static_cast<int64_t>(run.rounds.size());
  if (t_total < 1) throw std::invalid_argument("run has no rounds");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const int m = run.config.m;
  const int k = run.config.k;
  const std::vector<int> sampled = run.sampled_states();
  const WeightedStates empirical = EmpiricalStates(sampled);

  TheoremBoundReport report;
  const McEstimate mix = EvaluateMixture(obj, eval_states, run.snapshots, m, n_mc, rng);
  report.f_mixture = mix.mean;
  report.f_mixture_se = mix.std_error;
  report.f_comparator = BruteForceOpt(obj, empirical, k).value;
  report.ratio = 1.0 - std::exp(-static_cast<double>(m) / k);
  report.regret_per_round = Regret(run.ledger) / t_total;
  report.slack = 3.0 * std::sqrt(2.0 * LossBound(m, k) * std::log(2.0 / delta) /
                                 t_total);
  report.bound = report.ratio * report.f_comparator - report.regret_per_round -
                 report.slack;
  report.holds = report.f_mixture >= report.bound;
  return report;
}

}  // namespace scp
