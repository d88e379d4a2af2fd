"""Deterministic random instances."""
from __future__ import annotations

import random

from .optimal import adiri_amit
from .schedule import Instance, Schedule, left_compact

STYLES = ("semiactive-random", "permuted-blocks")


def gen_instance(n: int, m: int, seed: int = 0, style: str = "semiactive-random") -> Instance:
    """Random feasible initial schedule.

    ``semiactive-random`` draws a processing order per machine, lays the
    machines out one after another and left-compacts the result.
    ``permuted-blocks`` renames the jobs and machines of the Adiri-Amit
    schedule, so the initial schedule is already optimal.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    rng = random.Random(seed)
    if style == "semiactive-random":
        start = [[0] * m for _ in range(n)]
        for j in range(m):
            order = list(range(n))
            rng.shuffle(order)
            for p, i in enumerate(order):
                start[i][j] = j * n + p
        return Instance(left_compact(Schedule.from_rows(start)))
    if style == "permuted-blocks":
        base = adiri_amit(n, m)
        jobs = list(range(n))
        machines = list(range(m))
        rng.shuffle(jobs)
        rng.shuffle(machines)
        start = [[0] * m for _ in range(n)]
        for i in range(n):
            for j in range(m):
                start[jobs[i]][machines[j]] = base.start[i][j]
        return Instance(Schedule.from_rows(start))
    raise ValueError(f"unknown style {style!r}; expected one of {STYLES}")


def random_feasible(n: int, m: int, horizon: int, rng: random.Random) -> Schedule:
    """Random feasible schedule inside ``horizon`` slots, usually with idle gaps.

    Operations are visited in random order and each takes a random slot free
    for both its job and its machine; a dead end restarts the draw. With
    ``horizon >= n + m - 1`` no dead end is possible.
    """
    if horizon < max(n, m):
        raise ValueError("horizon too short for a feasible schedule")
    ops = [(i, j) for i in range(n) for j in range(m)]
    while True:
        rng.shuffle(ops)
        start = [[0] * m for _ in range(n)]
        job_busy = [set() for _ in range(n)]
        mach_busy = [set() for _ in range(m)]
        for i, j in ops:
            free = [t for t in range(horizon) if t not in job_busy[i] and t not in mach_busy[j]]
            if not free:
                break
            t = rng.choice(free)
            start[i][j] = t
            job_busy[i].add(t)
            mach_busy[j].add(t)
        else:
            return Schedule.from_rows(start)
