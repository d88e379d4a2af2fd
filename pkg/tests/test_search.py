import random

import pytest

from openshop_games import (
    AS1,
    AS3,
    AS4,
    BAR2,
    Instance,
    InvalidInstanceError,
    Schedule,
    SearchConfig,
    SearchLimitExceeded,
    all_regimes,
    coalition_cost,
    is_admissible,
    min_coalition_cost,
    optimal_total_cost,
)
from openshop_games.generate import gen_instance, random_feasible
from openshop_games.search import default_horizon, default_node_limit, horizon_stability_check

from conftest import coalitions, oracle_keys
from oracles import brute_min_cost

_ = None


def _oracle_cases(count, seed):
    rng = random.Random(seed)
    for _k in range(count):
        n, m = rng.randint(1, 3), rng.randint(1, 2)
        H = rng.randint(max(n, m), 6)
        yield Instance(random_feasible(n, m, H, rng)), H


@pytest.mark.parametrize("seed", range(6))
def test_matches_exhaustive_oracle(seed):
    for inst, H in _oracle_cases(8, seed):
        cfg = SearchConfig(horizon=H)
        for T in coalitions(inst.n):
            for regime in all_regimes():
                res = min_coalition_cost(inst, T, regime, cfg)
                expected = brute_min_cost(inst.s0.start, T, *oracle_keys(regime), H)
                assert res.min_cost == expected, (inst, T, regime.name)
                assert res.value == coalition_cost(inst.s0, T) - expected
                assert is_admissible(res.witness, inst, T, regime)
                assert res.witness.makespan <= H
                assert coalition_cost(res.witness, T) == res.min_cost


def test_empty_coalition_has_zero_value():
    inst = gen_instance(3, 2, 1)
    res = min_coalition_cost(inst, set(), AS4)
    assert res.value == 0


@pytest.mark.parametrize("seed", range(10))
def test_grand_coalition_reaches_closed_form(seed):
    inst = gen_instance(2 + seed % 3, 1 + seed % 3, seed)
    res = min_coalition_cost(inst, range(1, inst.n + 1), BAR2)
    assert res.min_cost == optimal_total_cost(inst.n, inst.m)


def test_values_are_nonnegative_and_witness_lexicographically_first():
    inst = Instance.from_machine_rows([[1, 2, _, 3, 4, 5], [5, 1, 3, 4, 2, _]])
    res = min_coalition_cost(inst, {3, 5}, AS1)
    assert res.value == 1
    assert res.witness == Schedule.from_machine_rows([[1, 2, 3, 4, 5, _], [5, 1, _, 3, 4, 2]])


def test_completion_rule_versus_start_rule():
    inst = Instance.from_machine_rows([[1, 2, 3, _, _], [_, 1, _, 3, 2]])
    assert min_coalition_cost(inst, {2}, AS4).value == 1
    assert min_coalition_cost(inst, {2}, AS3).value == 0


def test_node_limit_reports_lower_bound():
    inst = gen_instance(4, 3, 7)
    with pytest.raises(SearchLimitExceeded) as info:
        min_coalition_cost(inst, {1, 2, 3, 4}, BAR2, SearchConfig(node_limit=1))
    exc = info.value
    assert exc.value_lower_bound >= 0
    assert exc.value_lower_bound <= min_coalition_cost(inst, {1, 2, 3, 4}, BAR2).value


def test_env_node_limit(monkeypatch):
    monkeypatch.setenv("OPENSHOP_NODE_LIMIT", "123")
    assert default_node_limit() == 123
    assert SearchConfig().node_limit == 123


def test_horizon_too_short():
    inst = Instance(Schedule.from_rows([[0, 3], [1, 0]]))
    with pytest.raises(InvalidInstanceError):
        min_coalition_cost(inst, {1}, AS4, SearchConfig(horizon=2))


@pytest.mark.parametrize("seed", range(8))
def test_default_horizon_is_stable(seed):
    inst = gen_instance(3, 2 + seed % 2, seed)
    H = default_horizon(inst)
    for T in coalitions(inst.n):
        for regime in (AS1, AS4, BAR2):
            assert horizon_stability_check(inst, T, regime, H)
