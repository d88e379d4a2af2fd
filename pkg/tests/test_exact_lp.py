import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openshop_games.exact_lp import EQ, GE, LE, linprog_exact


def test_simple_optimum():
    # min x + y  s.t. x + 2y >= 4, 3x + y >= 6
    res = linprog_exact([1, 1], [[1, 2], [3, 1]], [GE, GE], [4, 6])
    assert res.status == "optimal"
    assert res.objective == Fraction(14, 5)
    assert res.x == (Fraction(8, 5), Fraction(6, 5))


def test_infeasible_and_unbounded():
    assert linprog_exact([1], [[1], [1]], [GE, LE], [3, 2]).status == "infeasible"
    assert linprog_exact([-1], [[1]], [GE], [1]).status == "unbounded"


def test_equality_and_negative_rhs():
    res = linprog_exact([1, 1], [[1, -1], [1, 1]], [EQ, GE], [-2, 0])
    assert res.status == "optimal"
    assert res.objective == 2
    assert res.x == (0, 2)


def test_degenerate_problem_terminates():
    rows = [[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
    res = linprog_exact([1, 1, 1], rows, [GE] * 4, [0, 0, 0, 0])
    assert res.status == "optimal" and res.objective == 0


def test_bad_sense():
    with pytest.raises(ValueError):
        linprog_exact([1], [[1]], ["<"], [1])


def _solve(a, b):
    """Gauss-Jordan over Fractions; None if singular."""
    n = len(a)
    m = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(a, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        m[c] = [v / m[c][c] for v in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][-1] for r in range(n)]


def vertex_minimum(n, rows, b):
    """Minimum of sum(x) over rows x >= b, x >= 0 by enumerating vertices."""
    cons = [(list(r), bi) for r, bi in zip(rows, b)]
    cons += [([1 if k == i else 0 for k in range(n)], 0) for i in range(n)]
    best = None
    for pick in itertools.combinations(cons, n):
        x = _solve([c[0] for c in pick], [c[1] for c in pick])
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(r, x)) >= bi for r, bi in cons):
            obj = sum(x)
            best = obj if best is None else min(best, obj)
    return best


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n), min_size=1, max_size=6),
            st.lists(st.integers(-3, 6), min_size=6, max_size=6),
        )
    )
)
def test_covering_lp_matches_vertex_enumeration(args):
    n, rows, b = args
    b = b[: len(rows)]
    res = linprog_exact([1] * n, rows, [GE] * len(rows), b)
    expected = vertex_minimum(n, rows, b)
    if expected is None:
        assert res.status == "infeasible"
        return
    assert res.status == "optimal"
    assert res.objective == expected
    assert all(v >= 0 for v in res.x)
    assert all(sum(a * x for a, x in zip(r, res.x)) >= bi for r, bi in zip(rows, b))
