# Copyright 2026 The SCP Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Submodular contextual policy learning."""

import json as _json

from scp._core import (
    ModularObjective,
    NewsEnv,
    Objective,
    ProbabilisticCoverage,
    UnigramCoverage,
    brute_force_opt,
    check_monotone,
    check_submodular,
    discounted_cumulative_benefit,
    doubling_eta,
    expected_value,
    greedy_clairvoyant,
    load_instance,
    marginal_benefit,
    normalized_benefit,
    optimal_eta,
    position_weights,
    random_coverage,
    scp_losses,
    split_seed,
    train_news,
    verify_all,
    wm_update,
)
from scp._core import run_context_free as _run_context_free


def run_context_free(objective, m, k, rounds, seed=0, learner="wm", n_mc=2000):
    """One context-free run; returns its summary as a dict."""
    return _json.loads(
        _run_context_free(objective, m, k, rounds, seed, learner, n_mc))


__all__ = [
    "ModularObjective",
    "NewsEnv",
    "Objective",
    "ProbabilisticCoverage",
    "UnigramCoverage",
    "brute_force_opt",
    "check_monotone",
    "check_submodular",
    "discounted_cumulative_benefit",
    "doubling_eta",
    "expected_value",
    "greedy_clairvoyant",
    "load_instance",
    "marginal_benefit",
    "normalized_benefit",
    "optimal_eta",
    "position_weights",
    "random_coverage",
    "run_context_free",
    "scp_losses",
    "split_seed",
    "train_news",
    "verify_all",
    "wm_update",
]
