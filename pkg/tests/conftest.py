import random

import pytest

from openshop_games import Instance, SchemeCondition, TimeCondition
from openshop_games.generate import gen_instance, random_feasible

SCHEME_KEY = {
    SchemeCondition.PREDECESSOR_SET: "pred",
    SchemeCondition.POSITION: "pos",
    SchemeCondition.NONE: "none",
}
TIME_KEY = {
    TimeCondition.NONE: "none",
    TimeCondition.START_EQUAL: "eq",
    TimeCondition.START_LEQ: "le",
    TimeCondition.COMPLETION_LEQ: "cl",
}


def oracle_keys(regime):
    return SCHEME_KEY[regime.scheme_cond], TIME_KEY[regime.time_cond]


def small_instances(count, n_max=4, m_max=3, seed=0):
    """Mix of compact and gapped initial schedules."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(2, n_max)
        m = rng.randint(2, m_max)
        if k % 3 == 2:
            out.append(Instance(random_feasible(n, m, max(n, m) + 2, rng)))
        else:
            out.append(gen_instance(n, m, seed=rng.randrange(10**6), style="semiactive-random"))
    return out


def coalitions(n):
    return [frozenset(i + 1 for i in range(n) if S >> i & 1) for S in range(1, 1 << n)]


@pytest.fixture
def rng():
    return random.Random(12345)
