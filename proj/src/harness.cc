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

#include "scp/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "scp/validators.h"

namespace scp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Stored examples beyond this many doubles are not kept; the gap and bound
// checks that need them are then skipped.
constexpr double kExampleMemoryCap = 2.5e7;

std::string RepDir(const std::string& out, int rep) {
  if (out.empty()) return {};
  char name[32];
  std::snprintf(name, sizeof(name), "rep_%03d", rep);
  return (fs::path(out) / name).string();
}

void WriteJson(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

void WriteErrorMarker(const std::string& dir, const std::string& message) {
  if (dir.empty()) return;
  std::ofstream out(fs::path(dir) / "ERROR");
  out << message << '\n';
}

json ExperimentJson(const ExperimentConfig& config) {
  return {{"command", config.command},
          {"seed", config.seed},
          {"replicates", config.replicates},
          {"workers", config.workers},
          {"params", config.params}};
}

const char* LearnerName(LearnerKind k) {
  return k == LearnerKind::kExp3 ? "exp3" : "wm";
}

const char* EtaModeName(EtaMode m) {
  switch (m) {
    case EtaMode::kOptimal:
      return "optimal";
    case EtaMode::kDoubling:
      return "doubling";
    case EtaMode::kFixed:
      return "fixed";
  }
  return "?";
}

const char* ReductionName(Reduction r) {
  return r == Reduction::kRanking ? "ranking" : "regression";
}

WeightedStates StatesOrAll(const Objective& obj, const std::vector<int>* ids) {
  if (ids != nullptr && !ids->empty()) return UniformStates(*ids);
  return AllStatesUniform(obj);
}

Instance LoadOrConfigError(const std::string& path) {
  if (path.empty()) throw ConfigError("an instance file is required");
  if (!fs::exists(path)) throw ConfigError("instance file not found: " + path);
  try {
    return LoadInstance(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

// Allowed per-replicate bound violations: 2 of 20.
int AllowedViolations(int replicates) { return replicates / 10; }

template <typename Fn>
CheckResult Timed(const std::string& name, Fn fn) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = name;
  try {
    std::tie(r.passed, r.detail) = fn();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start)
                  .count();
  return r;
}

std::string Fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

// ---- contextual problem assembly -------------------------------------------

struct LoadedContextual {
  std::shared_ptr<const Objective> objective;
  std::shared_ptr<const Featurizer> features;
  WeightedStates train;
  WeightedStates heldout;
};

LoadedContextual LoadContextual(const ContextualOptions& options,
                                uint64_t env_seed) {
  LoadedContextual out;
  StateSplits splits;
  if (options.env == "news") {
    NewsEnvConfig cfg = options.news;
    cfg.seed = env_seed;
    const NewsEnv env = NewsEnv::Generate(cfg);
    out.objective = env.shared_objective();
    out.features = std::make_shared<ListFeaturizer>(env.featurizer());
    splits = env.splits();
  } else if (options.env == "unigram") {
    UnigramEnvConfig cfg = options.unigram;
    cfg.seed = env_seed;
    const UnigramEnv env = UnigramEnv::Generate(cfg);
    out.objective = env.shared_objective();
    out.features = std::make_shared<ListFeaturizer>(env.featurizer());
    splits = env.splits();
  } else if (options.env == "file") {
    Instance inst = LoadOrConfigError(options.instance);
    if (!inst.base_features.has_value()) {
      throw ConfigError("instance has no base_features; contextual runs need them");
    }
    out.objective = inst.objective;
    out.features = std::make_shared<ListFeaturizer>(*inst.base_features);
    if (inst.splits.has_value()) splits = *inst.splits;
  } else {
    throw ConfigError("unknown env '" + options.env + "'");
  }
  out.train = StatesOrAll(*out.objective, &splits.train);
  out.heldout = StatesOrAll(*out.objective, &splits.test);
  return out;
}

void WriteContextualCsv(const fs::path& path, const ContextualRunResult& run) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot write " + path.string());
  csv << std::setprecision(12);
  csv << "round,train_f,heldout_f,failure_prob,surrogate_loss,csc_loss\n";
  size_t snap = 0;
  for (size_t t = 0; t < run.rounds.size(); ++t) {
    const int64_t round = static_cast<int64_t>(t) + 1;
    while (snap + 1 < run.snapshots.size() &&
           run.snapshots[snap + 1].round <= round) {
      ++snap;
    }
    const double heldout =
        run.snapshots.empty() ? 0.0 : run.snapshots[snap].heldout_f;
    const ContextualRound& r = run.rounds[t];
    csv << round << ',' << r.train_f << ',' << heldout << ',' << 1.0 - heldout
        << ',' << r.surrogate_loss << ',' << r.csc_loss << '\n';
  }
}

// SCP over a finite random policy grid, one sampled policy per position.
json PolicyGridSummary(const ContextualProblem& cp, const ContextualConfig& cc,
                       const ContextualOptions& options, uint64_t seed,
                       const std::string& dir) {
  const std::vector<LinearPolicy> grid =
      RandomPolicies(cp.features->dim(), options.grid_size,
                     RuleFor(options.reduction), SplitSeed(seed, 3));
  const PolicyGridRunResult run = RunScpPolicyGrid(cc, cp, grid);
  Rng mc(SplitSeed(seed, 1));
  if (!dir.empty()) {
    std::ofstream csv(fs::path(dir) / "rounds_scp.csv");
    if (!csv) throw std::runtime_error("cannot write rounds_scp.csv");
    csv << std::setprecision(12);
    csv << "round,train_f,heldout_f,failure_prob,surrogate_loss,csc_loss\n";
    // Held-out value of each snapshot's own distribution, 20 sampled lists.
    size_t snap = 0;
    double heldout = 0.0;
    for (size_t t = 0; t < run.rounds.size(); ++t) {
      const int64_t round = static_cast<int64_t>(t) + 1;
      if (snap < run.snapshots.size() && run.snapshots[snap].round == round) {
        PolicyGridRunResult one;
        one.snapshots = {run.snapshots[snap]};
        heldout = EvaluatePolicyGridMixture(cp, one, grid, cp.heldout, cc.m, 20, mc);
        ++snap;
      }
      const ContextualRound& r = run.rounds[t];
      csv << round << ',' << r.train_f << ',' << heldout << ',' << 1.0 - heldout
          << ",0," << r.csc_loss << '\n';
    }
  }
  json s;
  s["list_mode"] = "grid";
  s["list_length"] = cc.m;
  if (run.rounds.empty()) return s;
  const double heldout =
      EvaluatePolicyGridMixture(cp, run, grid, cp.heldout, cc.m, 500, mc);
  s["final_heldout_f"] = heldout;
  s["final_failure_prob"] = 1.0 - heldout;
  s["final_train_f"] =
      EvaluatePolicyGridMixture(cp, run, grid, cp.train, cc.m, 500, mc);
  double csc = 0.0;
  for (const ContextualRound& r : run.rounds) csc += r.csc_loss;
  const double t_total = static_cast<double>(run.rounds.size());
  s["mean_csc_loss"] = csc / t_total;
  s["regret"] = Regret(run.ledger);
  s["regret_per_round"] = Regret(run.ledger) / t_total;
  s["final_probabilities"] = run.final_distribution.probabilities();

  std::vector<int> sampled;
  for (const ContextualRound& r : run.rounds) sampled.push_back(r.state);
  const WeightedStates empirical = EmpiricalStates(sampled);
  const std::vector<int> seq =
      GreedyPolicyList(*cp.objective, *cp.features, grid, empirical, cc.k);
  const double comparator =
      EvaluatePolicySequence(*cp.objective, *cp.features, grid, seq, empirical);
  const double f_mix =
      EvaluatePolicyGridMixture(cp, run, grid, cp.train, cc.m, 500, mc);
  const double ratio = 1.0 - std::exp(-static_cast<double>(cc.m) / cc.k);
  const double slack =
      3.0 * std::sqrt(2.0 * LossBound(cc.m, cc.k) * std::log(2.0 / options.delta) /
                      t_total);
  const double bound = ratio * comparator - Regret(run.ledger) / t_total - slack;
  s["bound_check"] = {{"f_mixture", f_mix},
                      {"f_comparator", comparator},
                      {"ratio", ratio},
                      {"regret_per_round", Regret(run.ledger) / t_total},
                      {"slack", slack},
                      {"bound", bound},
                      {"holds", f_mix >= bound},
                      {"comparator", "greedy sequence over the policy grid"}};
  return s;
}

json ContextualReplicate(const LoadedContextual& problem,
                         const ContextualOptions& options, uint64_t seed,
                         const std::string& dir) {
  const bool normalize =
      options.normalize_by_length.value_or(
          problem.objective->ItemLength(0, 0).has_value());
  ContextualProblem cp{problem.objective.get(), problem.features.get(),
                       problem.train, problem.heldout};
  std::vector<std::string> methods;
  if (options.baseline == "scp" || options.baseline == "both") {
    methods.push_back("scp");
  }
  if (options.baseline == "conseqopt" || options.baseline == "both") {
    methods.push_back("conseqopt");
  }

  json summary = {{"seed", seed}, {"normalize_by_length", normalize}};
  Rng mc(SplitSeed(seed, 1));
  const int length_scp = options.m;
  summary["random_list_heldout_f"] =
      EvaluateDistribution(
          *problem.objective, problem.heldout,
          ExpertDistribution::Uniform(problem.objective->num_items())
              .probabilities(),
          length_scp, 1000, mc)
          .mean;

  for (const std::string& method : methods) {
    const bool scp = method == "scp";
    ContextualConfig cc;
    cc.m = scp ? options.m : options.k;
    cc.k = options.k;
    cc.rounds = options.rounds;
    cc.seed = SplitSeed(seed, 0);
    cc.reduction = options.reduction;
    cc.eta0 = options.eta0;
    cc.normalize_by_length = normalize;
    const double example_doubles =
        static_cast<double>(options.rounds) * cc.m *
        problem.objective->num_items() * problem.features->dim();
    cc.store_examples = scp && example_doubles <= kExampleMemoryCap;

    if (scp && options.list_mode == "grid") {
      summary[method] = PolicyGridSummary(cp, cc, options, seed, dir);
      continue;
    }
    const ContextualRunResult run =
        scp ? RunScpContextual(cc, cp) : TrainConSeqOpt(cc, cp);
    if (!dir.empty()) {
      WriteContextualCsv(fs::path(dir) / ("rounds_" + method + ".csv"), run);
    }
    json s;
    const double heldout =
        EvaluatePolicies(*problem.objective, *problem.features, run.policies,
                         problem.heldout, run.list_length());
    s["final_heldout_f"] = heldout;
    s["final_failure_prob"] = 1.0 - heldout;
    s["final_train_f"] =
        EvaluatePolicies(*problem.objective, *problem.features, run.policies,
                         problem.train, run.list_length());
    s["list_length"] = run.list_length();
    double csc = 0.0;
    for (const ContextualRound& r : run.rounds) csc += r.csc_loss;
    s["mean_csc_loss"] = run.rounds.empty() ? 0.0 : csc / run.rounds.size();

    if (scp && !run.rounds.empty()) {
      if (!cc.store_examples) {
        s["convex_gap"] = "skipped: stored examples exceed the memory cap";
        s["bound_check"] = "skipped: stored examples exceed the memory cap";
      } else {
        const ConvexGapReport gap = ConvexGapEstimate(run, SplitSeed(seed, 2));
        s["convex_gap"] = {{"value", gap.value},
                           {"played_term", gap.played_term},
                           {"min_surrogate", gap.min_surrogate},
                           {"min_csc", gap.min_csc},
                           {"min_surrogate_source", gap.min_surrogate_source},
                           {"min_csc_source", gap.min_csc_source},
                           {"method", gap.method}};
        if (normalize) {
          s["bound_check"] = "skipped: costs are length-normalized";
        } else {
          const std::vector<LinearPolicy> grid =
              RandomPolicies(problem.features->dim(), options.grid_size,
                             RuleFor(options.reduction), SplitSeed(seed, 3));
          const ContextualBoundReport b =
              CheckContextualBound(cp, run, grid, options.delta);
          s["bound_check"] = {{"f_mixture", b.f_mixture},
                              {"f_comparator", b.f_comparator},
                              {"ratio", b.ratio},
                              {"regret_per_round", b.regret_per_round},
                              {"slack", b.slack},
                              {"bound", b.bound},
                              {"holds", b.holds},
                              {"comparator", b.comparator}};
        }
      }
    }
    summary[method] = std::move(s);
  }
  return summary;
}

// ---- verification helpers ---------------------------------------------------

double CentralDifferenceError(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& grad, const Eigen::VectorXd& h) {
  constexpr double kStep = 1e-6;
  Eigen::VectorXd fd(h.size());
  for (Eigen::Index j = 0; j < h.size(); ++j) {
    Eigen::VectorXd hp = h;
    Eigen::VectorXd hm = h;
    hp(j) += kStep;
    hm(j) -= kStep;
    fd(j) = (f(hp) - f(hm)) / (2 * kStep);
  }
  return (grad - fd).norm() / std::max(1.0, fd.norm());
}

CostSensitiveExample RandomExample(int n_items, int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CostSensitiveExample ex;
  ex.features = Eigen::MatrixXd::NullaryExpr(n_items, dim,
                                             [&]() { return normal(rng); });
  ex.costs = Eigen::VectorXd::NullaryExpr(n_items, [&]() { return unit(rng); });
  ex.costs.array() -= ex.costs.minCoeff();
  ex.weight = 0.2 + 0.8 * unit(rng);
  return ex;
}

}  // namespace

uint64_t SplitSeed(uint64_t root, uint64_t stream) {
  uint64_t z = root + (stream + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void ValidateExperiment(const ExperimentConfig& config) {
  if (config.replicates < 1) throw ConfigError("--replicates must be >= 1");
  if (config.workers < 1) throw ConfigError("--workers must be >= 1");
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

json ToJson(const ContextFreeOptions& o) {
  return {{"instance", o.instance},
          {"random_states", o.random_states},
          {"random_items", o.random_items},
          {"m", o.m},
          {"k", o.k},
          {"rounds", o.rounds},
          {"learner", LearnerName(o.learner)},
          {"eta_mode", EtaModeName(o.eta_mode)},
          {"eta", o.eta},
          {"exp3_gamma", o.exp3_gamma},
          {"n_mc", o.n_mc},
          {"delta", o.delta}};
}

json ToJson(const ContextualOptions& o) {
  json j = {{"env", o.env},
            {"instance", o.instance},
            {"reduction", ReductionName(o.reduction)},
            {"m", o.m},
            {"k", o.k},
            {"rounds", o.rounds},
            {"eta0", o.eta0},
            {"baseline", o.baseline},
            {"list_mode", o.list_mode},
            {"grid_size", o.grid_size},
            {"delta", o.delta},
            {"news",
             {{"n_users", o.news.n_users},
              {"n_articles", o.news.n_articles},
              {"d_base", o.news.d_base},
              {"n_clusters", o.news.n_clusters},
              {"noise", o.news.noise}}},
            {"unigram",
             {{"n_clusters", o.unigram.n_clusters},
              {"n_sentences", o.unigram.n_sentences},
              {"vocab", o.unigram.vocab},
              {"budget", o.unigram.budget}}}};
  j["normalize_by_length"] = o.normalize_by_length.has_value()
                                 ? json(*o.normalize_by_length)
                                 : json("auto");
  return j;
}

void ParallelFor(int count, int workers, const std::function<void(int)>& fn) {
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex mu;
  auto work = [&]() {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min(workers, count));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (first) std::rethrow_exception(first);
}

int RunGenEnv(const ExperimentConfig& config, const GenEnvOptions& options,
              std::ostream& log) {
  ValidateExperiment(config);
  if (config.out.empty()) throw ConfigError("gen-env needs --out");
  const uint64_t env_seed = SplitSeed(config.seed, 0);
  Instance inst;
  if (options.kind == "news") {
    NewsEnvConfig cfg = options.news;
    cfg.seed = env_seed;
    inst = NewsEnv::Generate(cfg).ToInstance();
  } else if (options.kind == "unigram") {
    UnigramEnvConfig cfg = options.unigram;
    cfg.seed = env_seed;
    inst = UnigramEnv::Generate(cfg).ToInstance();
  } else if (options.kind == "random") {
    inst.objective = std::make_shared<ProbabilisticCoverage>(
        GenerateRandomCoverage(options.random_states, options.random_items,
                               env_seed));
    inst.metadata = {{"generator", "random"}, {"seed", env_seed}};
  } else {
    throw ConfigError("unknown env kind '" + options.kind + "'");
  }
  fs::create_directories(config.out);
  WriteJson(fs::path(config.out) / "config.json", ExperimentJson(config));
  const fs::path path = fs::path(config.out) / "instance.json";
  SaveInstance(inst, path.string());
  log << "wrote " << path.string() << " (" << inst.objective->num_states()
      << " states, " << inst.objective->num_items() << " items)\n";
  return kExitOk;
}

json ContextFreeReplicate(const Objective& obj, const WeightedStates& train,
                          const ContextFreeOptions& options, uint64_t seed,
                          const std::string& dir) {
  if (!dir.empty()) {
    fs::create_directories(dir);
    json echo = ToJson(options);
    echo["replicate_seed"] = seed;
    WriteJson(fs::path(dir) / "config.json", echo);
  }
  try {
    ScpConfig cfg;
    cfg.m = options.m;
    cfg.k = options.k;
    cfg.rounds = options.rounds;
    cfg.seed = SplitSeed(seed, 0);
    cfg.learner = options.learner;
    cfg.eta_mode = options.eta_mode;
    cfg.eta = options.eta;
    cfg.exp3_gamma = options.exp3_gamma;
    const ContextFreeRunResult run = RunScpContextFree(cfg, obj, train);

    Rng mc(SplitSeed(seed, 1));
    json summary = {{"seed", seed}, {"rounds", run.rounds.size()}};
    if (run.rounds.empty()) {
      summary["final_probabilities"] = run.final_distribution.probabilities();
      if (!dir.empty()) {
        std::ofstream(fs::path(dir) / "rounds.csv")
            << "round,f_value,expected_loss,regret,F_mixture_estimate\n";
        WriteJson(fs::path(dir) / "summary.json", summary);
      }
      return summary;
    }

    // Per-snapshot estimates; the CSV reports their running mean.
    const int per_snapshot = std::max<int>(
        1, options.n_mc / static_cast<int>(run.snapshots.size()));
    std::vector<double> snap_estimate;
    for (const DistributionSnapshot& snap : run.snapshots) {
      snap_estimate.push_back(
          EvaluateDistribution(obj, train, snap.probabilities, options.m,
                               per_snapshot, mc)
              .mean);
    }
    if (!dir.empty()) {
      std::ofstream csv(fs::path(dir) / "rounds.csv");
      csv << std::setprecision(12);
      csv << "round,f_value,expected_loss,regret,F_mixture_estimate\n";
      size_t snap = 0;
      double running = snap_estimate[0];
      for (size_t t = 0; t < run.rounds.size(); ++t) {
        const int64_t round = static_cast<int64_t>(t) + 1;
        while (snap + 1 < run.snapshots.size() &&
               run.snapshots[snap + 1].round <= round) {
          ++snap;
          running += (snap_estimate[snap] - running) / (snap + 1);
        }
        csv << round << ',' << run.rounds[t].f_value << ','
            << run.ledger.expected_losses()[t] << ','
            << run.ledger.regret_at(static_cast<int>(t)) << ',' << running
            << '\n';
      }
    }

    const double regret = Regret(run.ledger);
    summary["regret"] = regret;
    summary["regret_per_round"] = regret / run.rounds.size();
    summary["max_loss"] = run.max_loss;
    summary["loss_bound"] = LossBound(options.m, options.k);
    summary["loss_range_violations"] = run.loss_range_violations;
    const McEstimate last = EvaluateDistribution(
        obj, train, run.final_distribution.probabilities(), options.m,
        options.n_mc, mc);
    summary["F_final"] = {{"mean", last.mean}, {"std_error", last.std_error}};
    const double lists =
        std::pow(static_cast<double>(obj.num_items()), options.k);
    if (lists <= kBruteForceLimit) {
      const TheoremBoundReport b =
          CheckContextFreeBound(obj, run, train, options.delta, options.n_mc, mc);
      summary["F_mixture"] = {{"mean", b.f_mixture},
                              {"std_error", b.f_mixture_se}};
      summary["bound_check"] = {{"f_mixture", b.f_mixture},
                                {"f_comparator", b.f_comparator},
                                {"ratio", b.ratio},
                                {"regret_per_round", b.regret_per_round},
                                {"slack", b.slack},
                                {"bound", b.bound},
                                {"holds", b.holds}};
    } else {
      const McEstimate mix = EvaluateMixture(obj, train, run.snapshots,
                                             options.m, options.n_mc, mc);
      summary["F_mixture"] = {{"mean", mix.mean}, {"std_error", mix.std_error}};
      summary["bound_check"] = "skipped: brute force over |S|^k is too large";
    }
    if (!dir.empty()) WriteJson(fs::path(dir) / "summary.json", summary);
    return summary;
  } catch (const std::exception& e) {
    WriteErrorMarker(dir, e.what());
    throw;
  }
}

int RunContextFreeExperiment(const ExperimentConfig& config_in,
                             const ContextFreeOptions& options,
                             std::ostream& log) {
  ExperimentConfig config = config_in;
  config.params = ToJson(options);
  ValidateExperiment(config);
  ScpConfig probe;
  probe.m = options.m;
  probe.k = options.k;
  probe.rounds = options.rounds;
  probe.eta_mode = options.eta_mode;
  probe.eta = options.eta;
  try {
    ValidateConfig(probe);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (options.n_mc < 1) throw ConfigError("--n-mc must be >= 1");

  std::shared_ptr<const Objective> obj;
  WeightedStates train;
  if (options.instance.empty()) {
    obj = std::make_shared<ProbabilisticCoverage>(GenerateRandomCoverage(
        options.random_states, options.random_items, SplitSeed(config.seed, 0)));
    train = AllStatesUniform(*obj);
  } else {
    Instance inst = LoadOrConfigError(options.instance);
    obj = inst.objective;
    train = StatesOrAll(*obj, inst.splits ? &inst.splits->train : nullptr);
  }

  if (!config.out.empty()) {
    fs::create_directories(config.out);
    WriteJson(fs::path(config.out) / "config.json", ExperimentJson(config));
  }
  std::vector<json> summaries(config.replicates);
  std::vector<std::string> errors(config.replicates);
  std::mutex log_mu;
  ParallelFor(config.replicates, config.workers, [&](int r) {
    try {
      summaries[r] = ContextFreeReplicate(*obj, train, options,
                                          SplitSeed(config.seed, r + 1),
                                          RepDir(config.out, r));
    } catch (const std::exception& e) {
      errors[r] = e.what();
    }
    std::lock_guard<std::mutex> lock(log_mu);
    if (!errors[r].empty()) {
      log << "replicate " << r << ": ERROR " << errors[r] << '\n';
    } else if (summaries[r].contains("regret")) {
      log << "replicate " << r << ": regret/T="
          << Fmt(summaries[r]["regret_per_round"].get<double>())
          << " F_mixture=" << Fmt(summaries[r]["F_mixture"]["mean"].get<double>());
      if (summaries[r]["bound_check"].is_object()) {
        log << " bound="
            << Fmt(summaries[r]["bound_check"]["bound"].get<double>())
            << (summaries[r]["bound_check"]["holds"].get<bool>() ? " holds"
                                                                 : " VIOLATED");
      }
      log << '\n';
    } else {
      log << "replicate " << r << ": no rounds\n";
    }
  });

  int violations = 0;
  int failed = 0;
  for (int r = 0; r < config.replicates; ++r) {
    if (!errors[r].empty()) {
      ++failed;
    } else if (summaries[r].contains("bound_check") &&
               summaries[r]["bound_check"].is_object() &&
               !summaries[r]["bound_check"]["holds"].get<bool>()) {
      ++violations;
    }
  }
  const bool ok = failed == 0 && violations <= AllowedViolations(config.replicates);
  if (!config.out.empty()) {
    WriteJson(fs::path(config.out) / "summary.json",
              {{"replicates", config.replicates},
               {"failed", failed},
               {"bound_violations", violations},
               {"allowed_violations", AllowedViolations(config.replicates)},
               {"ok", ok}});
  }
  log << "bound violations: " << violations << "/" << config.replicates
      << " (allowed " << AllowedViolations(config.replicates) << ")\n";
  return ok ? kExitOk : kExitCheckFailure;
}

int RunContextualExperiment(const ExperimentConfig& config_in,
                            const ContextualOptions& options,
                            std::ostream& log) {
  ExperimentConfig config = config_in;
  config.params = ToJson(options);
  ValidateExperiment(config);
  if (options.baseline != "scp" && options.baseline != "conseqopt" &&
      options.baseline != "both") {
    throw ConfigError("--baseline must be scp, conseqopt or both");
  }
  if (options.list_mode != "deterministic" && options.list_mode != "grid") {
    throw ConfigError("--list-mode must be deterministic or grid");
  }
  ContextualConfig probe;
  probe.m = options.m;
  probe.k = options.k;
  probe.rounds = options.rounds;
  probe.eta0 = options.eta0;
  try {
    ValidateConfig(probe);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (options.grid_size < 1) throw ConfigError("--grid-size must be >= 1");

  LoadedContextual problem;
  try {
    problem = LoadContextual(options, SplitSeed(config.seed, 0));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (options.list_mode == "grid" &&
      options.normalize_by_length.value_or(
          problem.objective->ItemLength(0, 0).has_value())) {
    throw ConfigError("--list-mode grid needs --normalize-length off");
  }

  if (!config.out.empty()) {
    fs::create_directories(config.out);
    WriteJson(fs::path(config.out) / "config.json", ExperimentJson(config));
  }
  std::vector<json> summaries(config.replicates);
  std::vector<std::string> errors(config.replicates);
  std::mutex log_mu;
  ParallelFor(config.replicates, config.workers, [&](int r) {
    const std::string dir = RepDir(config.out, r);
    const uint64_t seed = SplitSeed(config.seed, r + 1);
    try {
      if (!dir.empty()) {
        fs::create_directories(dir);
        json echo = config.params;
        echo["replicate_seed"] = seed;
        echo["env_seed"] = SplitSeed(config.seed, 0);
        WriteJson(fs::path(dir) / "config.json", echo);
      }
      summaries[r] = ContextualReplicate(problem, options, seed, dir);
      if (!dir.empty()) WriteJson(fs::path(dir) / "summary.json", summaries[r]);
    } catch (const std::exception& e) {
      errors[r] = e.what();
      WriteErrorMarker(dir, errors[r]);
    }
    std::lock_guard<std::mutex> lock(log_mu);
    if (!errors[r].empty()) {
      log << "replicate " << r << ": ERROR " << errors[r] << '\n';
      return;
    }
    log << "replicate " << r << ":";
    for (const char* method : {"scp", "conseqopt"}) {
      if (!summaries[r].contains(method)) continue;
      log << ' ' << method << " failure="
          << Fmt(summaries[r][method]["final_failure_prob"].get<double>());
    }
    log << " random-list failure="
        << Fmt(1.0 - summaries[r]["random_list_heldout_f"].get<double>()) << '\n';
  });

  int failed = 0;
  int violations = 0;
  for (int r = 0; r < config.replicates; ++r) {
    if (!errors[r].empty()) {
      ++failed;
      continue;
    }
    if (summaries[r].contains("scp")) {
      const json& b = summaries[r]["scp"]["bound_check"];
      if (b.is_object() && !b["holds"].get<bool>()) ++violations;
    }
  }
  const bool ok = failed == 0 && violations <= AllowedViolations(config.replicates);
  if (!config.out.empty()) {
    WriteJson(fs::path(config.out) / "summary.json",
              {{"replicates", config.replicates},
               {"failed", failed},
               {"bound_violations", violations},
               {"ok", ok}});
  }
  return ok ? kExitOk : kExitCheckFailure;
}

int RunBruteForce(const ExperimentConfig& config,
                  const BruteForceOptions& options, std::ostream& log) {
  ValidateExperiment(config);
  if (options.k < 1) throw ConfigError("--k must be >= 1");
  const Instance inst = LoadOrConfigError(options.instance);
  const Objective& obj = *inst.objective;
  const WeightedStates states = AllStatesUniform(obj);
  BruteForceResult best;
  try {
    best = BruteForceOpt(obj, states, options.k);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const ItemList greedy = GreedyClairvoyant(obj, states, options.k);
  const double greedy_value = ExpectedValue(obj, states, greedy);
  const double floor = (1.0 - std::exp(-1.0)) * best.value;
  const bool ok = greedy_value >= floor - 1e-12 &&
                  best.value >= greedy_value - 1e-12;
  log << "OPT list:";
  for (Item s : best.list) log << ' ' << s;
  log << "  value=" << Fmt(best.value) << "\ngreedy list:";
  for (Item s : greedy) log << ' ' << s;
  log << "  value=" << Fmt(greedy_value) << "  ratio="
      << Fmt(best.value > 0 ? greedy_value / best.value : 1.0)
      << (ok ? "  (>= 1-1/e)" : "  (BELOW 1-1/e)") << '\n';
  if (!config.out.empty()) {
    fs::create_directories(config.out);
    ExperimentConfig echo = config;
    echo.params = {{"instance", options.instance}, {"k", options.k}};
    WriteJson(fs::path(config.out) / "config.json", ExperimentJson(echo));
    WriteJson(fs::path(config.out) / "brute_force.json",
              {{"opt_list", best.list},
               {"opt_value", best.value},
               {"greedy_list", greedy},
               {"greedy_value", greedy_value},
               {"ok", ok}});
  }
  return ok ? kExitOk : kExitCheckFailure;
}

VerifyReport VerifyAll(uint64_t seed, const VerifyOptions& options) {
  VerifyReport report;
  auto add = [&](CheckResult r) { report.checks.push_back(std::move(r)); };
  const int trials = options.validator_trials;

  // Objective validators.
  {
    const ProbabilisticCoverage random_cov =
        GenerateRandomCoverage(20, 10, SplitSeed(seed, 10));
    NewsEnvConfig news_cfg;
    news_cfg.seed = SplitSeed(seed, 11);
    const NewsEnv news = NewsEnv::Generate(news_cfg);
    UnigramEnvConfig uni_cfg;
    uni_cfg.seed = SplitSeed(seed, 12);
    const UnigramEnv uni = UnigramEnv::Generate(uni_cfg);
    const ModularObjective modular = GenerateModular(10, 10, SplitSeed(seed, 13));
    const std::pair<const char*, const Objective*> objectives[] = {
        {"random_coverage", &random_cov},
        {"news_coverage", &news.objective()},
        {"unigram_coverage", &uni.objective()},
        {"modular", &modular}};
    for (const auto& [name, obj] : objectives) {
      add(Timed(std::string("validators/") + name, [&, obj = obj]() {
        const PropertyReport mono = CheckMonotone(*obj, trials, SplitSeed(seed, 20));
        const PropertyReport sub =
            CheckSubmodular(*obj, trials, SplitSeed(seed, 21));
        return std::make_pair(mono.ok() && sub.ok(),
                              "monotone violations " +
                                  std::to_string(mono.violations) +
                                  ", submodular violations " +
                                  std::to_string(sub.violations) + " over " +
                                  std::to_string(trials) + " trials each");
      }));
    }
  }

  add(Timed("position_weights", []() {
    for (int m = 1; m <= 20; ++m) {
      for (int k = 1; k <= 20; ++k) {
        const std::vector<double> w = PositionWeights(m, k);
        double sq = 0.0;
        for (double v : w) sq += v * v;
        if (sq > LossBound(m, k) + 1e-12 || w.back() != 1.0) {
          return std::make_pair(false, "failed at m=" + std::to_string(m) +
                                           " k=" + std::to_string(k));
        }
      }
    }
    return std::make_pair(true, std::string("sum w_i^2 <= min(m,k), w_m = 1"));
  }));

  add(Timed("loss_construction", [&]() {
    Rng rng(SplitSeed(seed, 30));
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const ProbabilisticCoverage obj =
          GenerateRandomCoverage(3, 6, SplitSeed(seed, 300 + trial));
      const int m = std::uniform_int_distribution<int>(1, 6)(rng);
      const int k = std::uniform_int_distribution<int>(1, 6)(rng);
      ItemList list(m);
      for (Item& s : list) s = std::uniform_int_distribution<int>(0, 5)(rng);
      const int x = trial % 3;
      const LossVector loss = ScpLosses(obj, x, list, k);
      std::vector<double> r(6, 0.0);
      for (Item s = 0; s < 6; ++s) {
        for (int i = 1; i <= m; ++i) {
          const ItemSpan prefix(list.data(), i - 1);
          ItemList ext(prefix.begin(), prefix.end());
          ext.push_back(s);
          r[s] += std::pow(1.0 - 1.0 / k, m - i) *
                  (obj.Evaluate(x, ext) - obj.Evaluate(x, prefix));
        }
      }
      const double best = *std::max_element(r.begin(), r.end());
      for (Item s = 0; s < 6; ++s) {
        worst = std::max(worst, std::abs(loss.values[s] - (best - r[s])));
      }
    }
    return std::make_pair(worst <= 1e-12, "max abs deviation " + Fmt(worst));
  }));

  add(Timed("greedy_vs_brute_force", [&]() {
    int passed = 0;
    double worst = 1.0;
    for (int i = 0; i < 20; ++i) {
      const ProbabilisticCoverage obj =
          GenerateRandomCoverage(10, 8, SplitSeed(seed, 400 + i));
      const WeightedStates states = AllStatesUniform(obj);
      const double opt = BruteForceOpt(obj, states, 3).value;
      const double g =
          ExpectedValue(obj, states, GreedyClairvoyant(obj, states, 3));
      worst = std::min(worst, g / opt);
      if (g >= (1.0 - std::exp(-1.0)) * opt && opt >= g - 1e-12) ++passed;
    }
    return std::make_pair(passed == 20, std::to_string(passed) +
                                            "/20 instances, worst ratio " +
                                            Fmt(worst));
  }));

  add(Timed("additive_error_and_scaled_lengths", [&]() {
    int passed = 0;
    double worst3 = std::numeric_limits<double>::infinity();
    double worst7 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
      const ProbabilisticCoverage obj =
          GenerateRandomCoverage(10, 30, SplitSeed(seed, 500 + i));
      const WeightedStates states = AllStatesUniform(obj);
      const BruteForceResult b = BruteForceOpt(obj, states, 3);
      bool ok = true;
      for (int factor : {1, 3, 7}) {
        const ItemList a = GreedyExtend(obj, states, {}, 3 * factor);
        const AdditiveErrorReport rep =
            CheckAdditiveErrorBound(obj, states, a, b.list);
        ok = ok && rep.holds;
        for (double e : rep.epsilons) ok = ok && e <= 1e-12;
        const double ratio = rep.f_list / rep.f_reference;
        if (factor == 3) {
          worst3 = std::min(worst3, ratio);
          ok = ok && ratio >= 0.950;
        }
        if (factor == 7) {
          worst7 = std::min(worst7, ratio);
          ok = ok && ratio >= 0.999;
        }
      }
      if (ok) ++passed;
    }
    return std::make_pair(passed == 20,
                          std::to_string(passed) + "/20 instances; worst " +
                              "ratio at 3|B| " + Fmt(worst3) + ", at 7|B| " +
                              Fmt(worst7));
  }));

  add(Timed("sampling_lemma", [&]() {
    int passed = 0;
    int passed_alpha = 0;
    for (int i = 0; i < 5; ++i) {
      const ProbabilisticCoverage obj =
          GenerateRandomCoverage(1, 8, SplitSeed(seed, 600 + i));
      const int ids[] = {0};
      const BruteForceResult b = BruteForceOpt(obj, UniformStates(ids), 5);
      Rng rng(SplitSeed(seed, 650 + i));
      if (VerifySamplingLemma(obj, 0, b.list, 5, 10000, rng).holds) ++passed;
      // ceil(|B| ln(1/alpha)) draws for alpha = 0.05.
      const int len = static_cast<int>(std::ceil(5 * std::log(20.0)));
      const SamplingLemmaReport rep =
          VerifySamplingLemma(obj, 0, b.list, len, 10000, rng);
      if (rep.holds && rep.factor >= 0.95) ++passed_alpha;
    }
    return std::make_pair(passed == 5 && passed_alpha == 5,
                          std::to_string(passed) + "/5 at k=|B|, " +
                              std::to_string(passed_alpha) +
                              "/5 at k=ceil(|B| ln 20)");
  }));

  add(Timed("gradients", [&]() {
    Rng rng(SplitSeed(seed, 700));
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst_reg = 0.0;
    double worst_rank = 0.0;
    int points = 0;
    while (points < 20) {
      const CostSensitiveExample ex = RandomExample(4, 6, rng);
      const Eigen::VectorXd h =
          Eigen::VectorXd::NullaryExpr(6, [&]() { return normal(rng); });
      if (RankingKinkDistance(h, ex) < 1e-3) continue;
      ++points;
      worst_reg = std::max(
          worst_reg,
          CentralDifferenceError(
              [&](const Eigen::VectorXd& v) { return RegressionLoss(v, ex); },
              RegressionGradient(h, ex), h));
      worst_rank = std::max(
          worst_rank,
          CentralDifferenceError(
              [&](const Eigen::VectorXd& v) { return RankingLoss(v, ex); },
              RankingSubgradient(h, ex), h));
    }
    return std::make_pair(worst_reg <= 1e-5 && worst_rank <= 1e-5,
                          "worst relative error regression " + Fmt(worst_reg) +
                              ", ranking " + Fmt(worst_rank));
  }));

  add(Timed("regret_sublinear", [&]() {
    int passed = 0;
    for (int i = 0; i < 3; ++i) {
      const ProbabilisticCoverage obj =
          GenerateRandomCoverage(20, 10, SplitSeed(seed, 800 + i));
      double avg[2];
      const int64_t horizons[2] = {1000, 4000};
      for (int j = 0; j < 2; ++j) {
        ScpConfig cfg;
        cfg.rounds = horizons[j];
        cfg.seed = SplitSeed(seed, 850 + i);
        const ContextFreeRunResult run =
            RunScpContextFree(cfg, obj, AllStatesUniform(obj));
        avg[j] = Regret(run.ledger) / horizons[j];
      }
      if (avg[1] < avg[0]) ++passed;
    }
    return std::make_pair(passed == 3, std::to_string(passed) +
                                           "/3 seeds with regret/T falling "
                                           "from T=1000 to T=4000");
  }));

  add(Timed("context_free_bound", [&]() {
    int holds = 0;
    for (int i = 0; i < options.theorem_seeds; ++i) {
      const ProbabilisticCoverage obj =
          GenerateRandomCoverage(20, 10, SplitSeed(seed, 900 + i));
      ScpConfig cfg;
      cfg.rounds = options.theorem_rounds;
      cfg.seed = SplitSeed(seed, 950 + i);
      const WeightedStates states = AllStatesUniform(obj);
      const ContextFreeRunResult run = RunScpContextFree(cfg, obj, states);
      Rng mc(SplitSeed(seed, 990 + i));
      if (CheckContextFreeBound(obj, run, states, 0.05, 2000, mc).holds) ++holds;
    }
    const int allowed = AllowedViolations(options.theorem_seeds);
    return std::make_pair(options.theorem_seeds - holds <= allowed,
                          std::to_string(holds) + "/" +
                              std::to_string(options.theorem_seeds) +
                              " runs satisfy the bound (allowed misses " +
                              std::to_string(allowed) + ")");
  }));

  add(Timed("convex_gap_realizable", [&]() {
    auto obj = std::make_shared<ModularObjective>(
        GenerateModular(20, 10, SplitSeed(seed, 1000)));
    const BenefitFeaturizer feats(obj, 3, SplitSeed(seed, 1001));
    ContextualProblem problem{obj.get(), &feats, AllStatesUniform(*obj), {}};
    ContextualConfig cfg;
    cfg.rounds = 2000;
    cfg.eta0 = 1.0;
    cfg.seed = SplitSeed(seed, 1002);
    cfg.store_examples = true;
    const ContextualRunResult run = RunScpContextual(cfg, problem);
    const ConvexGapReport gap = ConvexGapEstimate(run, SplitSeed(seed, 1003));
    return std::make_pair(gap.value <= 0.05, "G = " + Fmt(gap.value));
  }));

  add(Timed("contextual_bound", [&]() {
    NewsEnvConfig news_cfg;
    news_cfg.seed = SplitSeed(seed, 1100);
    const NewsEnv env = NewsEnv::Generate(news_cfg);
    ContextualProblem problem{&env.objective(), &env.featurizer(),
                              UniformStates(env.splits().train),
                              UniformStates(env.splits().test)};
    ContextualConfig cfg;
    cfg.rounds = 200;
    cfg.seed = SplitSeed(seed, 1101);
    cfg.store_examples = true;
    const ContextualRunResult run = RunScpContextual(cfg, problem);
    const std::vector<LinearPolicy> grid =
        RandomPolicies(env.featurizer().dim(), 100,
                       RuleFor(cfg.reduction), SplitSeed(seed, 1102));
    const ContextualBoundReport b = CheckContextualBound(problem, run, grid, 0.05);
    return std::make_pair(b.holds, "F(mixture) " + Fmt(b.f_mixture) +
                                       " vs bound " + Fmt(b.bound) +
                                       " (comparator " + Fmt(b.f_comparator) +
                                       ", R/T " + Fmt(b.regret_per_round) + ")");
  }));

  return report;
}

int RunVerify(const ExperimentConfig& config, const VerifyOptions& options,
              std::ostream& log) {
  ValidateExperiment(config);
  const VerifyReport report = VerifyAll(config.seed, options);
  json checks = json::array();
  for (const CheckResult& c : report.checks) {
    log << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail
        << " (" << Fmt(c.seconds) << " s)\n";
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"detail", c.detail},
                      {"seconds", c.seconds}});
  }
  if (!config.out.empty()) {
    fs::create_directories(config.out);
    ExperimentConfig echo = config;
    echo.params = {{"validator_trials", options.validator_trials},
                   {"theorem_seeds", options.theorem_seeds},
                   {"theorem_rounds", options.theorem_rounds}};
    WriteJson(fs::path(config.out) / "config.json", ExperimentJson(echo));
    WriteJson(fs::path(config.out) / "verify.json",
              {{"all_passed", report.all_passed()}, {"checks", checks}});
  }
  return report.all_passed() ? kExitOk : kExitCheckFailure;
}

}  // namespace scp
