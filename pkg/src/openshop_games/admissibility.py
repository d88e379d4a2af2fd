"""Admissible rearrangements of a coalition.

A regime pairs a condition on the processing order of the players outside
the coalition with a condition on their timing. The named regimes are

=======  =================  ===============
name     order condition    time condition
=======  =================  ===============
as1      same predecessors  none
as2      same predecessors  starts unchanged
as3      same predecessors  starts not later
as4      same predecessors  completion not later
as2p     same positions     starts unchanged
as3p     same positions     starts not later
as4p     same positions     completion not later
bar2     none               starts unchanged
bar3     none               starts not later
bar4     none               completion not later
=======  =================  ===============

The two remaining products (positions or nothing, with no time condition)
are representable and get generated names.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .schedule import (
    Instance,
    InvalidInstanceError,
    Schedule,
    as_mask,
    completion_times,
    is_feasible_schedule,
    scheme_of,
)


class SchemeCondition(enum.Enum):
    PREDECESSOR_SET = "predecessors"
    POSITION = "position"
    NONE = "none"


class TimeCondition(enum.Enum):
    NONE = "none"
    START_EQUAL = "start_eq"
    START_LEQ = "start_leq"
    COMPLETION_LEQ = "completion_leq"


@dataclass(frozen=True)
class Regime:
    scheme_cond: SchemeCondition
    time_cond: TimeCondition

    @property
    def name(self) -> str:
        for key, regime in REGIMES.items():
            if regime == self:
                return key
        return f"{self.scheme_cond.value}+{self.time_cond.value}"

    @property
    def is_named(self) -> bool:
        return self in REGIMES.values()

    @classmethod
    def from_name(cls, name: str) -> "Regime":
        key = name.strip().lower()
        if key in REGIMES:
            return REGIMES[key]
        for regime in all_regimes():
            if regime.name == key:
                return regime
        raise InvalidInstanceError(f"unknown regime {name!r}; expected one of {', '.join(REGIMES)}")

    def __str__(self) -> str:
        return self.name


_P, _Q, _X = SchemeCondition.PREDECESSOR_SET, SchemeCondition.POSITION, SchemeCondition.NONE
_EQ, _LE, _CL = TimeCondition.START_EQUAL, TimeCondition.START_LEQ, TimeCondition.COMPLETION_LEQ

REGIMES: dict[str, Regime] = {
    "as1": Regime(_P, TimeCondition.NONE),
    "as2": Regime(_P, _EQ),
    "as3": Regime(_P, _LE),
    "as4": Regime(_P, _CL),
    "as2p": Regime(_Q, _EQ),
    "as3p": Regime(_Q, _LE),
    "as4p": Regime(_Q, _CL),
    "bar2": Regime(_X, _EQ),
    "bar3": Regime(_X, _LE),
    "bar4": Regime(_X, _CL),
}

AS1, AS2, AS3, AS4 = (REGIMES[k] for k in ("as1", "as2", "as3", "as4"))
AS2P, AS3P, AS4P = (REGIMES[k] for k in ("as2p", "as3p", "as4p"))
BAR2, BAR3, BAR4 = (REGIMES[k] for k in ("bar2", "bar3", "bar4"))


def all_regimes() -> list[Regime]:
    """All twelve condition pairs, named ones first."""
    named = list(REGIMES.values())
    rest = [Regime(s, t) for s in SchemeCondition for t in TimeCondition if Regime(s, t) not in named]
    return named + rest


def satisfies_scheme_condition(s: Schedule, s0: Schedule, coalition, cond: SchemeCondition) -> bool:
    if cond is SchemeCondition.NONE:
        return True
    mask = as_mask(coalition, s0.n)
    sigma, sigma0 = scheme_of(s), scheme_of(s0)
    outsiders = [i for i in range(1, s0.n + 1) if not mask >> (i - 1) & 1]
    for j in range(1, s0.m + 1):
        for i in outsiders:
            if cond is SchemeCondition.POSITION:
                if sigma.sigma(j, i) != sigma0.sigma(j, i):
                    return False
            elif sigma.predecessors(j, i) != sigma0.predecessors(j, i):
                return False
    return True


def satisfies_time_condition(s: Schedule, s0: Schedule, coalition, cond: TimeCondition) -> bool:
    if cond is TimeCondition.NONE:
        return True
    mask = as_mask(coalition, s0.n)
    done, done0 = completion_times(s), completion_times(s0)
    for i in range(s0.n):
        if mask >> i & 1:
            continue
        if cond is TimeCondition.COMPLETION_LEQ:
            if done[i] > done0[i]:
                return False
            continue
        for t, t0 in zip(s.start[i], s0.start[i]):
            if t > t0 or (cond is TimeCondition.START_EQUAL and t != t0):
                return False
    return True


def is_admissible(s: Schedule, inst: Instance, coalition, regime: Regime) -> bool:
    """Whether ``s`` is an admissible rearrangement of ``coalition`` under ``regime``.

    For the grand coalition every feasible schedule is admissible. An
    infeasible ``s`` is never admissible.
    """
    if s.n != inst.n or s.m != inst.m:
        raise InvalidInstanceError("schedule shape does not match the instance")
    if not is_feasible_schedule(s):
        return False
    mask = as_mask(coalition, inst.n)
    if mask == inst.grand_coalition:
        return True
    return satisfies_scheme_condition(s, inst.s0, mask, regime.scheme_cond) and satisfies_time_condition(
        s, inst.s0, mask, regime.time_cond
    )


def active_cooperation_witnesses(s: Schedule, s0: Schedule, coalition) -> list[tuple[int, int]]:
    """Outsider operations ``(i, j)`` that start later than initially.

    A nonempty result means the move from ``s0`` to ``s`` relies on an
    outsider processing an operation later than before. Diagnostic only; no
    regime uses it.
    """
    mask = as_mask(coalition, s0.n)
    return [
        (i + 1, j + 1)
        for i in range(s0.n)
        if not mask >> i & 1
        for j in range(s0.m)
        if s.start[i][j] > s0.start[i][j]
    ]
