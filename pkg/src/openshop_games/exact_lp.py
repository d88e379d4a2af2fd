"""Dense two-phase simplex over ``fractions.Fraction``.

Small and exact: meant for core computations with a few thousand rows at
most. Bland's rule guarantees termination.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

GE, LE, EQ = ">=", "<=", "=="


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = tab[r]
    p = row[c]
    if p != 1:
        tab[r] = row = [v / p for v in row]
    for k, other in enumerate(tab):
        if k == r:
            continue
        f = other[c]
        if f:
            tab[k] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _simplex(tab: list[list[Fraction]], basis: list[int], allowed: int) -> bool:
    """Minimise the last row of ``tab`` in place. False if unbounded."""
    obj = tab[-1]
    while True:
        obj = tab[-1]
        entering = next((c for c in range(allowed) if obj[c] < 0), None)
        if entering is None:
            return True
        best = None
        leave = None
        for r in range(len(tab) - 1):
            a = tab[r][entering]
            if a > 0:
                ratio = tab[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            return False
        _pivot(tab, basis, leave, entering)


def linprog_exact(
    c: Sequence,
    rows: Sequence[Sequence],
    senses: Sequence[str],
    rhs: Sequence,
) -> LPResult:
    """Minimise ``c @ x`` subject to ``rows[k] @ x (sense) rhs[k]`` and ``x >= 0``."""
    nvar = len(c)
    nrow = len(rows)
    cons = []
    slack_cols = 0
    for a, sense, b in zip(rows, senses, rhs):
        if sense not in (GE, LE, EQ):
            raise ValueError(f"bad constraint sense {sense!r}")
        cons.append(([Fraction(v) for v in a], sense, Fraction(b)))
        if sense != EQ:
            slack_cols += 1

    width = nvar + slack_cols + nrow + 1  # variables, slacks, artificials, rhs
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    s = nvar
    for k, (a, sense, b) in enumerate(cons):
        row = [Fraction(0)] * width
        row[:nvar] = a
        if sense == GE:
            row[s] = Fraction(-1)
            s += 1
        elif sense == LE:
            row[s] = Fraction(1)
            s += 1
        row[-1] = b
        if b < 0:
            row = [-v for v in row]
        row[nvar + slack_cols + k] = Fraction(1)
        tab.append(row)
        basis.append(nvar + slack_cols + k)

    first_art = nvar + slack_cols
    # phase one: minimise the sum of artificials
    phase1 = [Fraction(0)] * width
    for row in tab:
        phase1 = [p - v for p, v in zip(phase1, row)]
    for k in range(nrow):
        phase1[first_art + k] = Fraction(0)
    tab.append(phase1)
    _simplex(tab, basis, first_art)
    if tab[-1][-1] != 0:
        return LPResult("infeasible")
    tab.pop()
    # drive remaining artificials out of the basis
    for r in range(len(tab)):
        if basis[r] >= first_art:
            col = next((cc for cc in range(first_art) if tab[r][cc] != 0), None)
            if col is not None:
                _pivot(tab, basis, r, col)
    keep = [r for r in range(len(tab)) if basis[r] < first_art]
    tab = [tab[r][:first_art] + [tab[r][-1]] for r in keep]
    basis = [basis[r] for r in keep]

    objective = [Fraction(v) for v in c] + [Fraction(0)] * (first_art - nvar) + [Fraction(0)]
    for r, b in enumerate(basis):
        f = objective[b]
        if f:
            objective = [o - f * v for o, v in zip(objective, tab[r])]
    tab.append(objective)
    if not _simplex(tab, basis, first_art):
        return LPResult("unbounded")
    x = [Fraction(0)] * first_art
    for r, b in enumerate(basis):
        x[b] = tab[r][-1]
    values = tuple(x[:nvar])
    return LPResult("optimal", values, sum((Fraction(ci) * xi for ci, xi in zip(c, values)), Fraction(0)))
