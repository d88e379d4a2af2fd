"""Optimal schedules for the grand coalition of a unit open shop."""
from __future__ import annotations

from dataclasses import dataclass

from .schedule import Instance, Schedule, completion_times, is_feasible_schedule, scheme_of


@dataclass(frozen=True)
class BlockStructure:
    """Compact blocks of ``m`` jobs built by :func:`adiri_amit`.

    ``blocks[r]`` holds the jobs completing at ``(r + 1) * m``; the last
    entry is the partial block of ``remainder`` jobs when ``n % m != 0``.
    """

    m: int
    k: int
    remainder: int
    blocks: tuple[frozenset[int], ...]

    def block_start(self, r: int) -> int:
        return r * self.m


def optimal_total_cost(n: int, m: int) -> int:
    """Minimum total completion time: ``m * sum(ceil(k / m) for k = 1..n)``."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    return m * sum(-(-k // m) for k in range(1, n + 1))


def adiri_amit(n: int, m: int) -> Schedule:
    """Schedule produced by the Adiri-Amit rule.

    Job ``i`` first runs on machine ``i mod m`` (machine ``m`` when the
    remainder is zero) and then on the following machines up to ``m``, each
    operation at the earliest slot not before the previous one where both
    the machine and the job are free. It then wraps round to machine 1 and
    places the remaining operations the same way. Jobs are placed in index
    order.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    machine_busy: list[set[int]] = [set() for _ in range(m)]
    start = [[0] * m for _ in range(n)]
    for i in range(1, n + 1):
        first = i % m or m
        sequence = list(range(first, m + 1)) + list(range(1, first))
        busy: set[int] = set()
        t = 0
        for j in sequence:
            while t in machine_busy[j - 1] or t in busy:
                t += 1
            start[i - 1][j - 1] = t
            machine_busy[j - 1].add(t)
            busy.add(t)
            t += 1
    return Schedule.from_rows(start)


def block_structure(sch: Schedule) -> BlockStructure:
    n, m = sch.n, sch.m
    k, remainder = divmod(n, m)
    done = completion_times(sch)
    blocks = [frozenset(i + 1 for i in range(n) if done[i] == (r + 1) * m) for r in range(k)]
    if remainder:
        blocks.append(frozenset(i + 1 for i in range(n) if done[i] > k * m))
    return BlockStructure(m, k, remainder, tuple(blocks))


def continuous_machines(sch: Schedule) -> list[int]:
    """Machines (1-based) whose occupied slots are exactly ``0..n-1``."""
    target = set(range(sch.n))
    return [j + 1 for j in range(sch.m) if {row[j] for row in sch.start} == target]


def j_based_optimal(inst: Instance, j: int) -> Schedule:
    """Optimal schedule keeping machine ``j``'s initial order with no idle time.

    The Adiri-Amit schedule has a machine that runs continuously. Jobs are
    renamed so that its processing order becomes the initial order of
    machine ``j``, and machines are rotated so that it becomes machine ``j``.
    """
    n, m = inst.n, inst.m
    if not 1 <= j <= m:
        raise ValueError(f"machine {j} outside 1..{m}")
    base = adiri_amit(n, m)
    candidates = continuous_machines(base)
    if not candidates:
        raise AssertionError("Adiri-Amit schedule has no continuous machine")
    pivot = j if j in candidates else candidates[0]

    base_order = scheme_of(base).order(pivot)
    target_order = inst.scheme().order(j)
    rename = {old: new for old, new in zip(base_order, target_order)}
    shift = j - pivot

    start = [[0] * m for _ in range(n)]
    for old in range(1, n + 1):
        for jj in range(1, m + 1):
            moved = (jj - 1 + shift) % m + 1
            start[rename[old] - 1][moved - 1] = base.t(old, jj)
    result = Schedule.from_rows(start)

    assert is_feasible_schedule(result)
    assert sum(completion_times(result)) == optimal_total_cost(n, m)
    assert scheme_of(result).order(j) == target_order
    assert sorted(result.start[i][j - 1] for i in range(n)) == list(range(n))
    return result
