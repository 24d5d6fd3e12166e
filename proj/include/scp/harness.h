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

// Experiment orchestration behind the `scp` tool: seeding, replicate worker
// pool, CSV and JSON artifacts, and the bundled verification suite.
//
// Seeds. A root seed r expands to sub-seeds SplitSeed(r, i) (splitmix64 of
// r + (i + 1) * 0x9e3779b97f4a7c15). Stream 0 seeds environment generation and
// replicate j uses stream j + 1, so adding replicates never changes earlier
// ones. Inside a replicate the same scheme derives the training, Monte Carlo
// and policy-grid seeds.
//
// Artifacts. Every replicate writes <out>/rep_NNN/ with config.json (the full
// configuration including its own seed), one or more per-round CSV files and
// summary.json. A replicate that fails part-way keeps what it wrote and adds
// an ERROR file holding the message.

#ifndef SCP_HARNESS_H_
#define SCP_HARNESS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "scp/context_free.h"
#include "scp/contextual.h"
#include "scp/environments.h"
#include "scp/instance_io.h"

namespace scp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

uint64_t SplitSeed(uint64_t root, uint64_t stream);

// Raised for configuration problems; maps to kExitUsage.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;
  uint64_t seed = 0;
  std::string out;  // empty: no artifacts
  int replicates = 1;
  int workers = 1;
  nlohmann::json params = nlohmann::json::object();
};

void ValidateExperiment(const ExperimentConfig& config);

struct GenEnvOptions {
  std::string kind = "news";  // news | unigram | random
  NewsEnvConfig news;
  UnigramEnvConfig unigram;
  int random_states = 20;
  int random_items = 10;
};

struct ContextFreeOptions {
  std::string instance;  // empty: random coverage instance
  int random_states = 20;
  int random_items = 10;
  int m = 4;
  int k = 4;
  int64_t rounds = 1000;
  LearnerKind learner = LearnerKind::kWeightedMajority;
  EtaMode eta_mode = EtaMode::kOptimal;
  double eta = 1.0;
  double exp3_gamma = -1.0;
  int n_mc = 2000;
  double delta = 0.05;
};

struct ContextualOptions {
  std::string env = "news";  // news | unigram | file
  std::string instance;      // for env == file
  NewsEnvConfig news;
  UnigramEnvConfig unigram;
  Reduction reduction = Reduction::kRegression;
  int m = 5;
  int k = 5;
  int64_t rounds = 400;
  double eta0 = 0.5;
  std::string baseline = "scp";  // scp | conseqopt | both
  // deterministic: one learned policy builds each list. grid: WM over
  // grid_size random policies, sampling one per position.
  std::string list_mode = "deterministic";
  // Unset: on exactly when the objective declares item lengths.
  std::optional<bool> normalize_by_length;
  int grid_size = 100;
  double delta = 0.05;
};

struct BruteForceOptions {
  std::string instance;
  int k = 3;
};

struct VerifyOptions {
  int validator_trials = 10000;
  int theorem_seeds = 10;
  int64_t theorem_rounds = 2000;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

nlohmann::json ToJson(const ContextFreeOptions& options);
nlohmann::json ToJson(const ContextualOptions& options);

// Each Run* returns an exit code, logs progress to `log` and writes
// artifacts under config.out when it is set.
int RunGenEnv(const ExperimentConfig& config, const GenEnvOptions& options,
              std::ostream& log);
int RunContextFreeExperiment(const ExperimentConfig& config,
                             const ContextFreeOptions& options,
                             std::ostream& log);
int RunContextualExperiment(const ExperimentConfig& config,
                            const ContextualOptions& options, std::ostream& log);
int RunBruteForce(const ExperimentConfig& config,
                  const BruteForceOptions& options, std::ostream& log);
int RunVerify(const ExperimentConfig& config, const VerifyOptions& options,
              std::ostream& log);

// One context-free replicate on an already-loaded problem. Writes its
// artifacts into `dir` (if non-empty) and returns the summary.
nlohmann::json ContextFreeReplicate(const Objective& obj,
                                    const WeightedStates& train,
                                    const ContextFreeOptions& options,
                                    uint64_t seed, const std::string& dir);

VerifyReport VerifyAll(uint64_t seed, const VerifyOptions& options = {});

// Runs fn(0..count-1) on `workers` threads. The first exception is rethrown
// after all workers stop.
void ParallelFor(int count, int workers, const std::function<void(int)>& fn);

}  // namespace scp

#endif  // SCP_HARNESS_H_
