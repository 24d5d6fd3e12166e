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

// Python bindings for the scp core library (module scp._core).

#include <memory>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scp/context_free.h"
#include "scp/contextual.h"
#include "scp/coverage.h"
#include "scp/environments.h"
#include "scp/harness.h"
#include "scp/instance_io.h"
#include "scp/learners.h"
#include "scp/objective.h"
#include "scp/validators.h"

namespace py = pybind11;

namespace {

using scp::Item;
using scp::ItemList;
using scp::Objective;

scp::WeightedStates StatesOrAll(const Objective& obj,
                                const std::vector<int>& states) {
  return states.empty() ? scp::AllStatesUniform(obj)
                        : scp::UniformStates(states);
}

py::dict ReportDict(const scp::PropertyReport& r) {
  py::dict d;
  d["trials"] = r.trials;
  d["violations"] = r.violations;
  d["worst"] = r.worst;
  d["ok"] = r.ok();
  return d;
}

// Summaries cross the boundary as JSON text; the Python side parses them.
std::string Dump(const nlohmann::json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Submodular contextual policy learning core";

  py::class_<Objective, std::shared_ptr<Objective>>(m, "Objective")
      .def_property_readonly("num_items", &Objective::num_items)
      .def_property_readonly("num_states", &Objective::num_states)
      .def(
          "evaluate",
          [](const Objective& o, int state, const ItemList& list) {
            o.CheckState(state);
            for (Item s : list) o.CheckItem(s);
            return o.Evaluate(state, list);
          },
          py::arg("state"), py::arg("items"))
      .def("item_length", &Objective::ItemLength);

  py::class_<scp::ProbabilisticCoverage, Objective,
             std::shared_ptr<scp::ProbabilisticCoverage>>(
      m, "ProbabilisticCoverage")
      .def(py::init<std::vector<std::vector<double>>>(),
           py::arg("success_prob"))
      .def("success_prob", &scp::ProbabilisticCoverage::success_prob);

  py::class_<scp::ModularObjective, Objective,
             std::shared_ptr<scp::ModularObjective>>(m, "ModularObjective")
      .def(py::init<std::vector<std::vector<double>>>(), py::arg("values"));

  py::class_<scp::UnigramCoverage, Objective,
             std::shared_ptr<scp::UnigramCoverage>>(m, "UnigramCoverage")
      .def_property_readonly("budget", &scp::UnigramCoverage::budget);

  m.def(
      "random_coverage",
      [](int n_states, int n_items, uint64_t seed) {
        return std::make_shared<scp::ProbabilisticCoverage>(
            scp::GenerateRandomCoverage(n_states, n_items, seed));
      },
      py::arg("n_states"), py::arg("n_items"), py::arg("seed"));

  m.def(
      "load_instance",
      [](const std::string& path) {
        scp::Instance inst = scp::LoadInstance(path);
        return std::const_pointer_cast<Objective>(inst.objective);
      },
      py::arg("path"), "Objective stored in a JSON instance file.");

  m.def(
      "marginal_benefit",
      [](const Objective& o, int state, const ItemList& list, Item item) {
        return scp::MarginalBenefit(o, state, list, item);
      },
      py::arg("objective"), py::arg("state"), py::arg("items"),
      py::arg("item"));
  m.def(
      "normalized_benefit",
      [](const Objective& o, int state, const ItemList& list, Item item) {
        return scp::NormalizedBenefit(o, state, list, item);
      },
      py::arg("objective"), py::arg("state"), py::arg("items"),
      py::arg("item"));

  m.def(
      "check_monotone",
      [](const Objective& o, int trials, uint64_t seed) {
        return ReportDict(scp::CheckMonotone(o, trials, seed));
      },
      py::arg("objective"), py::arg("trials"), py::arg("seed"));
  m.def(
      "check_submodular",
      [](const Objective& o, int trials, uint64_t seed) {
        return ReportDict(scp::CheckSubmodular(o, trials, seed));
      },
      py::arg("objective"), py::arg("trials"), py::arg("seed"));

  // Learners operate on plain probability vectors here.
  m.def(
      "wm_update",
      [](std::vector<double> probs, std::vector<double> losses, double bound,
         double eta) {
        auto dist = scp::ExpertDistribution::FromWeights(std::move(probs));
        return scp::WmUpdate(dist, {std::move(losses), bound}, eta)
            .probabilities();
      },
      py::arg("probabilities"), py::arg("losses"), py::arg("bound"),
      py::arg("eta"));
  m.def("optimal_eta", &scp::OptimalEta, py::arg("n_experts"),
        py::arg("horizon"));
  m.def("doubling_eta", &scp::DoublingEta, py::arg("n_experts"),
        py::arg("round"));

  m.def("position_weights", &scp::PositionWeights, py::arg("m"), py::arg("k"));
  m.def(
      "discounted_cumulative_benefit",
      [](const Objective& o, int state, const ItemList& list, Item item,
         int k) {
        return scp::DiscountedCumulativeBenefit(o, state, list, item, k);
      },
      py::arg("objective"), py::arg("state"), py::arg("items"),
      py::arg("item"), py::arg("k"));
  m.def(
      "scp_losses",
      [](const Objective& o, int state, const ItemList& list, int k) {
        scp::LossVector l = scp::ScpLosses(o, state, list, k);
        return py::make_tuple(l.values, l.bound);
      },
      py::arg("objective"), py::arg("state"), py::arg("items"), py::arg("k"),
      "Returns (losses, bound).");

  m.def(
      "greedy_clairvoyant",
      [](const Objective& o, int k, const std::vector<int>& states) {
        return scp::GreedyClairvoyant(o, StatesOrAll(o, states), k);
      },
      py::arg("objective"), py::arg("k"),
      py::arg("states") = std::vector<int>{});
  m.def(
      "brute_force_opt",
      [](const Objective& o, int k, const std::vector<int>& states) {
        scp::BruteForceResult r =
            scp::BruteForceOpt(o, StatesOrAll(o, states), k);
        return py::make_tuple(r.list, r.value);
      },
      py::arg("objective"), py::arg("k"),
      py::arg("states") = std::vector<int>{}, "Returns (items, value).");
  m.def(
      "expected_value",
      [](const Objective& o, const ItemList& list,
         const std::vector<int>& states) {
        return scp::ExpectedValue(o, StatesOrAll(o, states), list);
      },
      py::arg("objective"), py::arg("items"),
      py::arg("states") = std::vector<int>{});

  m.def(
      "run_context_free",
      [](const Objective& o, int m_len, int k, int64_t rounds, uint64_t seed,
         const std::string& learner, int n_mc) {
        scp::ContextFreeOptions opt;
        opt.m = m_len;
        opt.k = k;
        opt.rounds = rounds;
        opt.n_mc = n_mc;
        if (learner == "exp3") {
          opt.learner = scp::LearnerKind::kExp3;
        } else if (learner != "wm") {
          throw std::invalid_argument("learner must be wm or exp3");
        }
        py::gil_scoped_release release;
        return Dump(scp::ContextFreeReplicate(o, scp::AllStatesUniform(o), opt,
                                              seed, ""));
      },
      py::arg("objective"), py::arg("m"), py::arg("k"), py::arg("rounds"),
      py::arg("seed") = 0, py::arg("learner") = "wm", py::arg("n_mc") = 2000,
      "JSON summary of one context-free replicate.");

  py::class_<scp::NewsEnv>(m, "NewsEnv")
      .def_static(
          "generate",
          [](int n_users, int n_articles, int d_base, int n_clusters,
             double noise, uint64_t seed) {
            scp::NewsEnvConfig c;
            c.n_users = n_users;
            c.n_articles = n_articles;
            c.d_base = d_base;
            c.n_clusters = n_clusters;
            c.noise = noise;
            c.seed = seed;
            return scp::NewsEnv::Generate(c);
          },
          py::arg("n_users") = 75, py::arg("n_articles") = 20,
          py::arg("d_base") = 5, py::arg("n_clusters") = 4,
          py::arg("noise") = 0.1, py::arg("seed") = 0)
      .def_property_readonly("n_users", &scp::NewsEnv::n_users)
      .def_property_readonly("n_articles", &scp::NewsEnv::n_articles)
      .def_property_readonly("objective",
                             [](const scp::NewsEnv& e) {
                               return std::const_pointer_cast<
                                   scp::ProbabilisticCoverage>(
                                   e.shared_objective());
                             })
      .def_property_readonly("feature_dim",
                             [](const scp::NewsEnv& e) {
                               return e.featurizer().dim();
                             })
      .def_property_readonly(
          "train_users",
          [](const scp::NewsEnv& e) { return e.splits().train; })
      .def_property_readonly(
          "test_users", [](const scp::NewsEnv& e) { return e.splits().test; })
      .def("click_prob", &scp::NewsEnv::click_prob)
      .def("features",
           [](const scp::NewsEnv& e, int user, const ItemList& list) {
             return e.featurizer().Features(user, list);
           })
      .def(
          "failure_probability",
          [](const scp::NewsEnv& e, const std::vector<int>& users,
             const std::vector<ItemList>& lists) {
            return scp::FailureProbability(e.objective(), users, lists);
          },
          py::arg("users"), py::arg("lists"));

  m.def(
      "train_news",
      [](const scp::NewsEnv& env, const std::string& method,
         const std::string& reduction, int n_train, int64_t rounds,
         double eta0, int k, uint64_t seed) {
        scp::ContextualConfig c;
        c.m = k;
        c.k = k;
        c.rounds = rounds;
        c.seed = seed;
        c.eta0 = eta0;
        if (reduction == "ranking") {
          c.reduction = scp::Reduction::kRanking;
        } else if (reduction != "regression") {
          throw std::invalid_argument("reduction must be regression or ranking");
        }
        const std::vector<int>& train = env.splits().train;
        if (n_train < 1 || n_train > static_cast<int>(train.size())) {
          throw std::invalid_argument("n_train out of range");
        }
        std::vector<int> users(train.begin(), train.begin() + n_train);
        scp::ContextualProblem p{&env.objective(), &env.featurizer(),
                                 scp::UniformStates(users), {}};
        py::gil_scoped_release release;
        scp::ContextualRunResult run;
        if (method == "scp") {
          run = scp::RunScpContextual(c, p);
        } else if (method == "conseqopt") {
          run = scp::TrainConSeqOpt(c, p);
        } else {
          throw std::invalid_argument("method must be scp or conseqopt");
        }
        const scp::WeightedStates test = scp::UniformStates(env.splits().test);
        return 1.0 - scp::EvaluatePolicies(env.objective(), env.featurizer(),
                                           run.policies, test, k);
      },
      py::arg("env"), py::arg("method") = "scp",
      py::arg("reduction") = "regression", py::arg("n_train") = 40,
      py::arg("rounds") = 400, py::arg("eta0") = 0.5, py::arg("k") = 5,
      py::arg("seed") = 0,
      "Trains on the first n_train training users; returns the held-out "
      "failure probability.");

  m.def(
      "verify_all",
      [](uint64_t seed, int trials, int theorem_seeds, int64_t theorem_rounds) {
        scp::VerifyOptions o;
        o.validator_trials = trials;
        o.theorem_seeds = theorem_seeds;
        o.theorem_rounds = theorem_rounds;
        scp::VerifyReport r;
        {
          py::gil_scoped_release release;
          r = scp::VerifyAll(seed, o);
        }
        py::list out;
        for (const scp::CheckResult& c : r.checks) {
          out.append(py::make_tuple(c.name, c.passed, c.detail));
        }
        return out;
      },
      py::arg("seed") = 0, py::arg("trials") = 10000,
      py::arg("theorem_seeds") = 10, py::arg("theorem_rounds") = 2000,
      "List of (name, passed, detail).");

  m.def("split_seed", &scp::SplitSeed, py::arg("root"), py::arg("stream"));
}
