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

import math

import pytest

import scp


def two_item():
    return scp.ProbabilisticCoverage([[0.5, 0.3]])


def test_marginal_benefit_examples():
    obj = two_item()
    assert scp.marginal_benefit(obj, 0, [], 0) == pytest.approx(0.5)
    assert scp.marginal_benefit(obj, 0, [0], 0) == 0.0
    assert scp.marginal_benefit(obj, 0, [0], 1) == pytest.approx(0.15)
    assert obj.evaluate(0, []) == 0.0


def test_out_of_range_item_raises():
    with pytest.raises(ValueError):
        scp.marginal_benefit(two_item(), 0, [], 5)


def test_validators_on_random_coverage():
    obj = scp.random_coverage(5, 8, seed=3)
    assert scp.check_monotone(obj, 500, 1)["violations"] == 0
    assert scp.check_submodular(obj, 500, 1)["violations"] == 0


def test_wm_update_and_eta():
    p = scp.wm_update([0.5, 0.5], [1.0, 0.0], 1.0, math.log(2.0))
    assert p == pytest.approx([1 / 3, 2 / 3])
    assert scp.optimal_eta(2, 8) == pytest.approx(math.sqrt(math.log(2.0)))
    with pytest.raises(ValueError):
        scp.optimal_eta(1, 10)


def test_losses_and_weights():
    w = scp.position_weights(3, 2)
    assert w == pytest.approx([0.25, 0.5, 1.0])
    obj = scp.random_coverage(3, 6, seed=4)
    losses, bound = scp.scp_losses(obj, 1, [0, 2, 2], 2)
    assert bound == 2
    assert min(losses) == 0.0
    assert all(0.0 <= l <= bound for l in losses)


def test_greedy_within_bound_of_brute_force():
    obj = scp.random_coverage(6, 6, seed=11)
    greedy = scp.greedy_clairvoyant(obj, 3)
    _, opt = scp.brute_force_opt(obj, 3)
    assert scp.expected_value(obj, greedy) >= (1 - 1 / math.e) * opt


def test_run_context_free_summary():
    obj = scp.random_coverage(10, 6, seed=2)
    s = scp.run_context_free(obj, 3, 3, 300, seed=7, n_mc=200)
    again = scp.run_context_free(obj, 3, 3, 300, seed=7, n_mc=200)
    assert s == again
    assert 0.0 <= s["F_final"]["mean"] <= 1.0


def test_news_env():
    env = scp.NewsEnv.generate(seed=5)
    assert env.n_users == 75
    assert len(env.train_users) == 40 and len(env.test_users) == 15
    assert 0.0 <= env.click_prob(0, 0) <= 1.0
    assert env.failure_probability([0], [[]]) == 1.0
    assert env.features(0, []).shape == (20, env.feature_dim)
    fail = scp.train_news(env, "scp", "ranking", n_train=10, rounds=50, seed=1)
    assert 0.0 <= fail <= 1.0


def test_split_seed_is_stable():
    assert scp.split_seed(0, 0) == scp.split_seed(0, 0)
    assert scp.split_seed(0, 0) != scp.split_seed(0, 1)
