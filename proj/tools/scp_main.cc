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

// scp: command-line front end.
//
//   scp gen-env          --kind news|unigram|random --out DIR
//   scp run-context-free [--instance FILE] --k 4 --m 4 --T 5000 --learner wm
//   scp run-contextual   --env news|unigram|file --reduction regression ...
//   scp verify
//   scp brute-force      --instance FILE --k 3
//
// Global flags: --seed, --out, --replicates, --workers.
// Exit codes: 0 ok, 1 a check failed, 2 usage or configuration error.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "scp/harness.h"

namespace {

using scp::ExperimentConfig;

bool ParseEta(const std::string& text, scp::ContextFreeOptions& o) {
  if (text == "auto") {
    o.eta_mode = scp::EtaMode::kOptimal;
  } else if (text == "doubling") {
    o.eta_mode = scp::EtaMode::kDoubling;
  } else {
    try {
      size_t used = 0;
      o.eta = std::stod(text, &used);
      if (used != text.size() || !(o.eta > 0.0)) return false;
    } catch (const std::exception&) {
      return false;
    }
    o.eta_mode = scp::EtaMode::kFixed;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Submodular contextual policy learning experiments"};
  app.require_subcommand(1);

  ExperimentConfig config;
  app.add_option("--seed", config.seed, "Root random seed")->capture_default_str();
  app.add_option("--out", config.out, "Output directory for artifacts");
  app.add_option("--replicates", config.replicates, "Independent replicates")
      ->capture_default_str();
  app.add_option("--workers", config.workers, "Worker threads for replicates")
      ->capture_default_str();
  for (CLI::Option* opt : app.get_options()) {
    if (opt->get_name() != "--help") opt->configurable();
  }
  app.fallthrough();

  // gen-env
  scp::GenEnvOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-env", "Write a synthetic instance");
  gen_cmd->add_option("--kind", gen.kind, "news | unigram | random")
      ->check(CLI::IsMember({"news", "unigram", "random"}))
      ->capture_default_str();
  gen_cmd->add_option("--users", gen.news.n_users)->capture_default_str();
  gen_cmd->add_option("--articles", gen.news.n_articles)->capture_default_str();
  gen_cmd->add_option("--topics", gen.news.d_base)->capture_default_str();
  gen_cmd->add_option("--clusters", gen.news.n_clusters)->capture_default_str();
  gen_cmd->add_option("--noise", gen.news.noise)->capture_default_str();
  gen_cmd->add_option("--documents", gen.unigram.n_clusters)
      ->capture_default_str();
  gen_cmd->add_option("--sentences", gen.unigram.n_sentences)
      ->capture_default_str();
  gen_cmd->add_option("--vocab", gen.unigram.vocab)->capture_default_str();
  gen_cmd->add_option("--budget", gen.unigram.budget)->capture_default_str();
  gen_cmd->add_option("--states", gen.random_states)->capture_default_str();
  gen_cmd->add_option("--items", gen.random_items)->capture_default_str();

  // run-context-free
  scp::ContextFreeOptions cf;
  std::string cf_learner = "wm";
  std::string cf_eta = "auto";
  int cf_m = 0;
  CLI::App* cf_cmd =
      app.add_subcommand("run-context-free", "Context-free SCP over single items");
  cf_cmd->add_option("--instance", cf.instance,
                     "Instance file; a random coverage instance if omitted");
  cf_cmd->add_option("--states", cf.random_states)->capture_default_str();
  cf_cmd->add_option("--items", cf.random_items)->capture_default_str();
  cf_cmd->add_option("--k", cf.k, "Length of the competitor list")
      ->capture_default_str();
  cf_cmd->add_option("--m", cf_m, "Length of the built list (default k)");
  cf_cmd->add_option("--T,--rounds", cf.rounds)->capture_default_str();
  cf_cmd->add_option("--learner", cf_learner, "wm | exp3")
      ->check(CLI::IsMember({"wm", "exp3"}))
      ->capture_default_str();
  cf_cmd->add_option("--eta", cf_eta, "auto | doubling | <value>")
      ->capture_default_str();
  cf_cmd->add_option("--gamma", cf.exp3_gamma, "EXP3 exploration (<0: auto)");
  cf_cmd->add_option("--n-mc", cf.n_mc)->capture_default_str();
  cf_cmd->add_option("--delta", cf.delta)->capture_default_str();

  // run-contextual
  scp::ContextualOptions cx;
  std::string cx_reduction = "regression";
  std::string cx_normalize = "auto";
  int cx_m = 0;
  CLI::App* cx_cmd =
      app.add_subcommand("run-contextual", "Contextual SCP with linear list policies");
  cx_cmd->add_option("--env", cx.env, "news | unigram | file")
      ->check(CLI::IsMember({"news", "unigram", "file"}))
      ->capture_default_str();
  cx_cmd->add_option("--instance", cx.instance, "Instance file for --env file");
  cx_cmd->add_option("--reduction", cx_reduction, "regression | ranking")
      ->check(CLI::IsMember({"regression", "ranking"}))
      ->capture_default_str();
  cx_cmd->add_option("--k", cx.k)->capture_default_str();
  cx_cmd->add_option("--m", cx_m, "List length during training (default k)");
  cx_cmd->add_option("--T,--rounds", cx.rounds)->capture_default_str();
  cx_cmd->add_option("--eta0", cx.eta0)->capture_default_str();
  cx_cmd->add_option("--baseline", cx.baseline, "scp | conseqopt | both")
      ->check(CLI::IsMember({"scp", "conseqopt", "both"}))
      ->capture_default_str();
  cx_cmd->add_option("--list-mode", cx.list_mode,
                     "deterministic | grid (WM over --grid-size random policies)")
      ->check(CLI::IsMember({"deterministic", "grid"}))
      ->capture_default_str();
  cx_cmd->add_option("--normalize-length", cx_normalize, "auto | on | off")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  cx_cmd->add_option("--grid-size", cx.grid_size)->capture_default_str();
  cx_cmd->add_option("--delta", cx.delta)->capture_default_str();
  cx_cmd->add_option("--users", cx.news.n_users)->capture_default_str();
  cx_cmd->add_option("--articles", cx.news.n_articles)->capture_default_str();
  cx_cmd->add_option("--noise", cx.news.noise)->capture_default_str();
  cx_cmd->add_option("--documents", cx.unigram.n_clusters)
      ->capture_default_str();
  cx_cmd->add_option("--budget", cx.unigram.budget)->capture_default_str();

  // verify
  scp::VerifyOptions verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run the bundled lemma and theorem checks");
  verify_cmd->add_option("--trials", verify.validator_trials)
      ->capture_default_str();
  verify_cmd->add_option("--theorem-seeds", verify.theorem_seeds)
      ->capture_default_str();
  verify_cmd->add_option("--theorem-rounds", verify.theorem_rounds)
      ->capture_default_str();

  // brute-force
  scp::BruteForceOptions bf;
  CLI::App* bf_cmd =
      app.add_subcommand("brute-force", "Exhaustive optimum vs greedy");
  bf_cmd->add_option("--instance", bf.instance)->required();
  bf_cmd->add_option("--k", bf.k)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return scp::kExitUsage;
  }

  try {
    if (*gen_cmd) {
      config.command = "gen-env";
      return scp::RunGenEnv(config, gen, std::cout);
    }
    if (*cf_cmd) {
      config.command = "run-context-free";
      cf.m = cf_m > 0 ? cf_m : cf.k;
      cf.learner = cf_learner == "exp3" ? scp::LearnerKind::kExp3
                                        : scp::LearnerKind::kWeightedMajority;
      if (!ParseEta(cf_eta, cf)) {
        std::cerr << "error: --eta must be auto, doubling or a positive number\n";
        return scp::kExitUsage;
      }
      return scp::RunContextFreeExperiment(config, cf, std::cout);
    }
    if (*cx_cmd) {
      config.command = "run-contextual";
      cx.m = cx_m > 0 ? cx_m : cx.k;
      cx.reduction = cx_reduction == "ranking" ? scp::Reduction::kRanking
                                               : scp::Reduction::kRegression;
      if (cx_normalize != "auto") cx.normalize_by_length = cx_normalize == "on";
      return scp::RunContextualExperiment(config, cx, std::cout);
    }
    if (*verify_cmd) {
      config.command = "verify";
      return scp::RunVerify(config, verify, std::cout);
    }
    if (*bf_cmd) {
      config.command = "brute-force";
      return scp::RunBruteForce(config, bf, std::cout);
    }
  } catch (const scp::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return scp::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return scp::kExitCheckFailure;
  }
  return scp::kExitUsage;
}
