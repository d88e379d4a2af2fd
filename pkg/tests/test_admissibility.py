import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openshop_games import (
    AS1,
    AS2,
    AS2P,
    AS3,
    AS3P,
    AS4,
    AS4P,
    BAR2,
    BAR3,
    BAR4,
    REGIMES,
    Instance,
    InvalidInstanceError,
    Regime,
    Schedule,
    SchemeCondition,
    TimeCondition,
    all_regimes,
    is_admissible,
)
from openshop_games.admissibility import active_cooperation_witnesses
from openshop_games.generate import random_feasible

# Inclusions that hold for every instance and coalition.
CHAINS = [(AS2, AS3, AS4), (AS2P, AS3P, AS4P), (BAR2, BAR3, BAR4)]
# A fixed position does not fix the predecessor set (two coalition members may
# swap sides around an outsider), so the primed regimes only nest in bar.
NESTED = [(AS2P, BAR2), (AS3P, BAR3), (AS4P, BAR4), (AS2, BAR2), (AS3, BAR3), (AS4, BAR4), (AS4, AS1)]


def test_position_does_not_imply_predecessors():
    # outsider 3 stays second on the machine but its predecessor changes
    inst = Instance.from_machine_rows([[1, 3, 2]])
    moved = Schedule.from_machine_rows([[2, 3, 1]])
    assert is_admissible(moved, inst, {1, 2}, AS2P)
    assert not is_admissible(moved, inst, {1, 2}, AS2)


def test_named_regimes():
    assert list(REGIMES) == ["as1", "as2", "as3", "as4", "as2p", "as3p", "as4p", "bar2", "bar3", "bar4"]
    assert Regime.from_name("AS4") == AS4
    assert AS4P == Regime(SchemeCondition.POSITION, TimeCondition.COMPLETION_LEQ)
    assert len(all_regimes()) == 12
    assert sum(r.is_named for r in all_regimes()) == 10
    with pytest.raises(InvalidInstanceError):
        Regime.from_name("as5")


def test_generated_names_round_trip():
    for r in all_regimes():
        assert Regime.from_name(r.name) == r


def test_grand_coalition_admits_everything_feasible():
    inst = Instance(Schedule.from_rows([[0, 1], [1, 0]]))
    other = Schedule.from_rows([[3, 2], [0, 1]])
    assert all(is_admissible(other, inst, {1, 2}, r) for r in all_regimes())


def test_infeasible_never_admissible():
    inst = Instance(Schedule.from_rows([[0, 1], [1, 0]]))
    bad = Schedule.from_rows([[0, 1], [0, 2]])
    assert not any(is_admissible(bad, inst, {1}, r) for r in all_regimes())


def test_initial_schedule_always_admissible():
    inst = Instance(Schedule.from_rows([[0, 2], [1, 0], [2, 1]]))
    for T in ({1}, {2, 3}, set()):
        assert all(is_admissible(inst.s0, inst, T, r) for r in all_regimes())


def test_shape_mismatch_raises():
    inst = Instance(Schedule.from_rows([[0, 1], [1, 0]]))
    with pytest.raises(InvalidInstanceError):
        is_admissible(Schedule.from_rows([[0]]), inst, {1}, AS1)


def test_active_cooperation_lists_delayed_outsider_ops():
    s0 = Schedule.from_rows([[0, 1], [1, 0]])
    s = Schedule.from_rows([[0, 2], [1, 0]])
    assert active_cooperation_witnesses(s, s0, {2}) == [(1, 2)]
    assert active_cooperation_witnesses(s, s0, {1}) == []


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3), st.integers(0, 10**9), st.data())
def test_regime_inclusions_on_random_pairs(n, m, seed, data):
    rng = random.Random(seed)
    H = max(n, m) + 2
    inst = Instance(random_feasible(n, m, H, rng))
    # bias towards schedules sharing structure with s0: perturb a copy
    s = inst.s0
    for _ in range(data.draw(st.integers(0, 4))):
        i, j = rng.randrange(n), rng.randrange(m)
        s = s.replace(i + 1, j + 1, rng.randrange(H + 1))
    T = frozenset(i for i in range(1, n + 1) if rng.random() < 0.5)
    verdict = {r: is_admissible(s, inst, T, r) for r in all_regimes()}
    for chain in CHAINS:
        for a, b in zip(chain, chain[1:]):
            assert not verdict[a] or verdict[b]
    for a, b in NESTED:
        assert not verdict[a] or verdict[b]
