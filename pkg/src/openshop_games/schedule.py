"""Unit-time open shop data model.

Jobs (players) and machines are numbered from 1 in every public function and
in the JSON format. Internally a schedule is an ``n x m`` tuple of tuples
where ``start[i - 1][j - 1]`` is the start slot of operation ``(i, j)``.
Every operation takes exactly one slot.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


class InvalidInstanceError(ValueError):
    """Raised for malformed schedules, instances or coalitions."""


# ---------------------------------------------------------------------------
# coalitions


def coalition_mask(members: Iterable[int], n: int | None = None) -> int:
    """Bitmask of a set of 1-based players (bit ``i - 1`` for player ``i``)."""
    mask = 0
    for i in members:
        i = int(i)
        if i < 1 or (n is not None and i > n):
            raise InvalidInstanceError(f"player {i} outside 1..{n}")
        mask |= 1 << (i - 1)
    return mask


def coalition_members(mask: int, n: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(n) if mask >> i & 1)


def as_mask(coalition, n: int) -> int:
    """Accept either a bitmask or an iterable of players."""
    if isinstance(coalition, int):
        if coalition < 0 or coalition >> n:
            raise InvalidInstanceError(f"coalition mask {coalition} outside {n} players")
        return coalition
    return coalition_mask(coalition, n)


def format_coalition(members: Iterable[int]) -> str:
    return ",".join(str(i) for i in sorted(members))


def parse_coalition(text: str) -> frozenset[int]:
    text = text.strip().strip("{}")
    if not text:
        return frozenset()
    try:
        return frozenset(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise InvalidInstanceError(f"bad coalition {text!r}") from exc


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class Schedule:
    """Start slot of every operation; row ``i`` is job ``i + 1``."""

    start: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(t) for t in row) for row in self.start)
        if not rows or not rows[0]:
            raise InvalidInstanceError("schedule needs at least one job and one machine")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise InvalidInstanceError("ragged start matrix")
        if any(t < 0 for row in rows for t in row):
            raise InvalidInstanceError("start times must be nonnegative")
        object.__setattr__(self, "start", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Schedule":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_machine_rows(cls, table: Sequence[Sequence[int | None]], n: int | None = None) -> "Schedule":
        """Build a schedule from a slot table (one row per machine).

        ``table[j][t]`` is the job processed by machine ``j + 1`` in slot
        ``t`` or ``None``/``0`` for an idle slot, which is how schedules are
        usually drawn.
        """
        jobs = {job for row in table for job in row if job}
        n = n or max(jobs)
        m = len(table)
        start: list[list[int | None]] = [[None] * m for _ in range(n)]
        for j, row in enumerate(table):
            for t, job in enumerate(row):
                if not job:
                    continue
                if start[job - 1][j] is not None:
                    raise InvalidInstanceError(f"job {job} appears twice on machine {j + 1}")
                start[job - 1][j] = t
        missing = [(i + 1, j + 1) for i in range(n) for j in range(m) if start[i][j] is None]
        if missing:
            raise InvalidInstanceError(f"operations missing from table: {missing}")
        return cls.from_rows(start)  # type: ignore[arg-type]

    @property
    def n(self) -> int:
        return len(self.start)

    @property
    def m(self) -> int:
        return len(self.start[0])

    @property
    def makespan(self) -> int:
        return max(max(row) for row in self.start) + 1

    def t(self, i: int, j: int) -> int:
        """Start of operation ``(i, j)`` (1-based)."""
        return self.start[i - 1][j - 1]

    def machine_rows(self) -> list[list[int | None]]:
        """Slot table: ``rows[j][t]`` is the job on machine ``j + 1`` at ``t``."""
        rows: list[list[int | None]] = [[None] * self.makespan for _ in range(self.m)]
        for i, row in enumerate(self.start):
            for j, t in enumerate(row):
                rows[j][t] = i + 1
        return rows

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.start]

    def replace(self, i: int, j: int, t: int) -> "Schedule":
        rows = [list(r) for r in self.start]
        rows[i - 1][j - 1] = t
        return Schedule.from_rows(rows)


def _check_shape(sch: Schedule, n: int | None, m: int | None) -> None:
    if n is not None and sch.n != n:
        raise InvalidInstanceError(f"schedule has {sch.n} jobs, expected {n}")
    if m is not None and sch.m != m:
        raise InvalidInstanceError(f"schedule has {sch.m} machines, expected {m}")


def is_feasible_schedule(sch: Schedule, n: int | None = None, m: int | None = None) -> bool:
    """No machine and no job is used twice in the same slot."""
    _check_shape(sch, n, m)
    for row in sch.start:
        if len(set(row)) != len(row):
            return False
    for j in range(sch.m):
        column = [row[j] for row in sch.start]
        if len(set(column)) != len(column):
            return False
    return True


def completion_time(sch: Schedule, i: int) -> int:
    """``C_i(s)``: the slot after the last operation of job ``i``."""
    if not 1 <= i <= sch.n:
        raise InvalidInstanceError(f"job {i} outside 1..{sch.n}")
    return max(sch.start[i - 1]) + 1


def completion_times(sch: Schedule) -> tuple[int, ...]:
    return tuple(max(row) + 1 for row in sch.start)


def coalition_cost(sch: Schedule, coalition) -> int:
    """Total completion time of the members (unit weights)."""
    mask = as_mask(coalition, sch.n)
    return sum(max(row) + 1 for i, row in enumerate(sch.start) if mask >> i & 1)


# ---------------------------------------------------------------------------
# schemes


@dataclass(frozen=True)
class Scheme:
    """``position[j][i]`` is the 1-based position of job ``i+1`` on machine ``j+1``."""

    position: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(p) for p in row) for row in self.position)
        for row in rows:
            if sorted(row) != list(range(1, len(row) + 1)):
                raise InvalidInstanceError(f"scheme row {row} is not a permutation")
        object.__setattr__(self, "position", rows)

    @classmethod
    def from_orders(cls, orders: Sequence[Sequence[int]]) -> "Scheme":
        """From processing orders, e.g. ``[[1, 4, 3, 2], ...]``."""
        rows = []
        for order in orders:
            pos = [0] * len(order)
            for k, job in enumerate(order):
                pos[job - 1] = k + 1
            rows.append(tuple(pos))
        return cls(tuple(rows))

    @property
    def m(self) -> int:
        return len(self.position)

    @property
    def n(self) -> int:
        return len(self.position[0])

    def sigma(self, j: int, i: int) -> int:
        return self.position[j - 1][i - 1]

    def order(self, j: int) -> tuple[int, ...]:
        """Jobs on machine ``j`` in processing order."""
        row = self.position[j - 1]
        return tuple(sorted(range(1, len(row) + 1), key=lambda i: row[i - 1]))

    def orders(self) -> list[tuple[int, ...]]:
        return [self.order(j) for j in range(1, self.m + 1)]

    def predecessors(self, j: int, i: int) -> frozenset[int]:
        row = self.position[j - 1]
        return frozenset(k + 1 for k, p in enumerate(row) if p < row[i - 1])


def scheme_of(sch: Schedule) -> Scheme:
    """The unique scheme compatible with a feasible schedule."""
    if not is_feasible_schedule(sch):
        raise InvalidInstanceError("scheme is undefined for an infeasible schedule")
    rows = []
    for j in range(sch.m):
        order = sorted(range(sch.n), key=lambda i: sch.start[i][j])
        pos = [0] * sch.n
        for k, i in enumerate(order):
            pos[i] = k + 1
        rows.append(tuple(pos))
    return Scheme(tuple(rows))


def earlier_starts(sch: Schedule, i: int, j: int, scheme: Scheme | None = None) -> list[int]:
    """Smaller start slots for ``(i, j)`` that keep feasibility and the scheme."""
    scheme = scheme or scheme_of(sch)
    found = []
    for t in range(sch.t(i, j) - 1, -1, -1):
        candidate = sch.replace(i, j, t)
        if is_feasible_schedule(candidate) and scheme_of(candidate) == scheme:
            found.append(t)
    return found


def is_semi_active(sch: Schedule) -> bool:
    """True iff no single operation can start earlier with the same scheme."""
    scheme = scheme_of(sch)
    return not any(
        earlier_starts(sch, i, j, scheme)
        for i in range(1, sch.n + 1)
        for j in range(1, sch.m + 1)
    )


def left_compact(sch: Schedule) -> Schedule:
    """Shift operations left one at a time until the schedule is semi-active.

    Each step moves one operation to its smallest admissible earlier slot, so
    the scheme is unchanged and every start only decreases.
    """
    scheme = scheme_of(sch)
    changed = True
    while changed:
        changed = False
        for i in range(1, sch.n + 1):
            for j in range(1, sch.m + 1):
                options = earlier_starts(sch, i, j, scheme)
                if options:
                    sch = sch.replace(i, j, min(options))
                    changed = True
    return sch


def connected_components(coalition, sigma0_j: Sequence[int]) -> list[frozenset[int]]:
    """Maximal runs of coalition members in the processing order ``sigma0_j``.

    ``sigma0_j`` is a machine's processing order (jobs listed first to last).
    Components come back in processing order.
    """
    order = list(sigma0_j)
    members = set(coalition_members(coalition, len(order)) if isinstance(coalition, int) else coalition)
    if not members <= set(order):
        raise InvalidInstanceError(f"coalition {sorted(members)} not a subset of the jobs")
    components: list[frozenset[int]] = []
    run: list[int] = []
    for job in order:
        if job in members:
            run.append(job)
        elif run:
            components.append(frozenset(run))
            run = []
    if run:
        components.append(frozenset(run))
    return components


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class Instance:
    """An open shop problem with an initial schedule ``s0``."""

    s0: Schedule

    def __post_init__(self):
        if not isinstance(self.s0, Schedule):
            object.__setattr__(self, "s0", Schedule.from_rows(self.s0))
        if not is_feasible_schedule(self.s0):
            raise InvalidInstanceError("initial schedule is not feasible")

    @property
    def n(self) -> int:
        return self.s0.n

    @property
    def m(self) -> int:
        return self.s0.m

    @property
    def grand_coalition(self) -> int:
        return (1 << self.n) - 1

    def scheme(self) -> Scheme:
        return scheme_of(self.s0)

    def initial_costs(self) -> tuple[int, ...]:
        return completion_times(self.s0)

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "s0": self.s0.to_json()}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        try:
            n, m, rows = int(data["n"]), int(data["m"]), data["s0"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInstanceError(f"instance needs integer n, m and s0: {exc}") from exc
        if n < 1 or m < 1:
            raise InvalidInstanceError("n and m must be positive")
        sch = Schedule.from_rows(rows)
        _check_shape(sch, n, m)
        return cls(sch)

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_machine_rows(cls, table, n: int | None = None) -> "Instance":
        return cls(Schedule.from_machine_rows(table, n))


def load_instance(path) -> Instance:
    with open(path) as fh:
        return Instance.from_dict(json.load(fh))


def schedule_to_dict(sch: Schedule) -> dict:
    return {"n": sch.n, "m": sch.m, "schedule": sch.to_json()}


def schedule_from_dict(data: dict) -> Schedule:
    rows = data.get("schedule", data.get("s0"))
    if rows is None:
        raise InvalidInstanceError("expected a 'schedule' key")
    sch = Schedule.from_rows(rows)
    _check_shape(sch, data.get("n"), data.get("m"))
    return sch
