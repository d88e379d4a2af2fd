import pytest

from openshop_games import (
    Instance,
    adiri_amit,
    completion_times,
    is_feasible_schedule,
    is_semi_active,
    j_based_optimal,
    optimal_total_cost,
    scheme_of,
)
from openshop_games.generate import gen_instance
from openshop_games.optimal import block_structure, continuous_machines

from oracles import dp_optimal_total_cost

SIZES = [(n, m) for n in range(1, 25) for m in range(1, 9)]


def test_closed_form_small():
    assert optimal_total_cost(6, 4) == 32
    assert optimal_total_cost(4, 4) == 16
    assert optimal_total_cost(1, 5) == 5
    with pytest.raises(ValueError):
        optimal_total_cost(0, 2)


@pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 4) for m in range(1, 4)] + [(4, 3), (4, 2), (5, 2)])
def test_closed_form_matches_exhaustive_dp(n, m):
    assert optimal_total_cost(n, m) == dp_optimal_total_cost(n, m)


@pytest.mark.parametrize("n,m", SIZES)
def test_adiri_amit_is_optimal_and_semi_active(n, m):
    s = adiri_amit(n, m)
    assert is_feasible_schedule(s, n, m)
    assert is_semi_active(s)
    assert sum(completion_times(s)) == optimal_total_cost(n, m)
    assert continuous_machines(s)


@pytest.mark.parametrize("n,m", SIZES)
def test_blocks_are_compact(n, m):
    s = adiri_amit(n, m)
    bs = block_structure(s)
    done = completion_times(s)
    for r in range(bs.k):
        assert len(bs.blocks[r]) == m
        assert all(done[i - 1] == (r + 1) * m for i in bs.blocks[r])
    if bs.remainder:
        assert len(bs.blocks[-1]) == bs.remainder


def test_continuous_machine_formula_when_divisible():
    assert continuous_machines(adiri_amit(8, 4)) == [1, 2, 3, 4]


@pytest.mark.parametrize("seed", range(40))
def test_j_based_optimal_postconditions(seed):
    n, m = 2 + seed % 6, 1 + seed % 4
    inst = gen_instance(n, m, seed)
    for j in range(1, m + 1):
        s = j_based_optimal(inst, j)
        assert is_feasible_schedule(s)
        assert sum(completion_times(s)) == optimal_total_cost(n, m)
        assert sorted(row[j - 1] for row in s.start) == list(range(n))
        assert scheme_of(s).order(j) == inst.scheme().order(j)


def test_j_based_rejects_bad_machine():
    with pytest.raises(ValueError):
        j_based_optimal(Instance(adiri_amit(3, 2)), 3)
