"""Exact coalition values by branch-and-bound over integer timetables.

The search walks the time slots in increasing order. In every slot each
machine either idles or processes one job that still needs it. Three things
keep the tree small:

* the order and time conditions of the regime are enforced as soon as an
  operation is placed (outsiders behave as fixed separators or reserved
  positions, time conditions become per-operation start windows);
* a lower bound on the coalition cost built from per-operation release
  dates;
* left-shift dominance: an operation placed after an idle gap on its machine
  must have had its job busy during the whole gap, otherwise moving it into
  the gap gives a schedule that is at least as good, admissible and
  lexicographically smaller.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .admissibility import Regime, SchemeCondition, TimeCondition
from .schedule import Instance, InvalidInstanceError, Schedule, as_mask, coalition_cost

DEFAULT_NODE_LIMIT = 5_000_000
NODE_LIMIT_ENV = "OPENSHOP_NODE_LIMIT"


def default_node_limit() -> int | None:
    raw = os.environ.get(NODE_LIMIT_ENV)
    if raw is None:
        return DEFAULT_NODE_LIMIT
    value = int(raw)
    return value if value > 0 else None


def default_horizon(inst: Instance) -> int:
    return inst.s0.makespan + inst.n * inst.m


@dataclass(frozen=True)
class SearchConfig:
    """Search limits.

    ``horizon`` is the exclusive upper bound on start slots; ``None`` means
    ``makespan(s0) + n * m``. With ``record_witness`` the result carries the
    lexicographically smallest optimal start matrix.
    """

    horizon: int | None = None
    node_limit: int | None = field(default_factory=default_node_limit)
    record_witness: bool = True

    def horizon_for(self, inst: Instance) -> int:
        return default_horizon(inst) if self.horizon is None else self.horizon


@dataclass(frozen=True)
class CoalitionResult:
    value: int
    min_cost: int
    witness: Schedule | None
    nodes: int
    horizon: int

    def to_dict(self) -> dict:
        out = {"value": self.value, "min_cost": self.min_cost, "nodes": self.nodes, "horizon": self.horizon}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


class SearchLimitExceeded(RuntimeError):
    """Node budget exhausted before optimality was proven.

    ``best_cost`` is the cheapest admissible schedule found so far, so
    ``value_lower_bound`` is a valid lower bound on the coalition value.
    """

    def __init__(self, best_cost: int, initial_cost: int, witness: Schedule | None, nodes: int):
        self.best_cost = best_cost
        self.initial_cost = initial_cost
        self.witness = witness
        self.nodes = nodes
        super().__init__(
            f"node limit reached after {nodes} nodes; value >= {self.value_lower_bound} (best cost {best_cost})"
        )

    @property
    def value_lower_bound(self) -> int:
        return self.initial_cost - self.best_cost


def _greedy_finish(releases: list[int]) -> list[int]:
    """Earliest distinct unit-slot completions for operations with release dates."""
    out = []
    last = -1
    for r in sorted(releases):
        last = r if r > last else last + 1
        out.append(last + 1)
    return out


def min_coalition_cost(inst: Instance, coalition, regime: Regime, cfg: SearchConfig | None = None) -> CoalitionResult:
    """Cheapest admissible schedule for ``coalition`` and the resulting value."""
    cfg = cfg or SearchConfig()
    n = inst.n
    mask = as_mask(coalition, n)
    H = cfg.horizon_for(inst)
    s0 = inst.s0
    if H < s0.makespan:
        raise InvalidInstanceError(f"horizon {H} is shorter than the initial makespan {s0.makespan}")
    initial = coalition_cost(s0, mask)
    if mask == 0:
        return CoalitionResult(0, 0, s0 if cfg.record_witness else None, 0, H)
    return _Search(inst, mask, regime, H, cfg).run(initial)


class _Search:
    def __init__(self, inst: Instance, mask: int, regime: Regime, H: int, cfg: SearchConfig):
        n, m = inst.n, inst.m
        self.n, self.m, self.H = n, m, H
        self.mask = mask
        self.cfg = cfg
        self.lex = cfg.record_witness
        s0 = inst.s0.start
        self.s0 = s0
        grand = mask == inst.grand_coalition
        scheme_cond = SchemeCondition.NONE if grand else regime.scheme_cond
        time_cond = TimeCondition.NONE if grand else regime.time_cond
        self.scheme_cond = scheme_cond
        self.members = [i for i in range(n) if mask >> i & 1]
        member = [bool(mask >> i & 1) for i in range(n)]
        self.member = member

        # start windows
        lo = [[0] * m for _ in range(n)]
        hi = [[H - 1] * m for _ in range(n)]
        pinned = [[-1] * H for _ in range(m)]
        self.pinned_ops = [[False] * m for _ in range(n)]
        for i in range(n):
            if member[i]:
                continue
            c0 = max(s0[i]) + 1
            for j in range(m):
                if time_cond is TimeCondition.START_EQUAL:
                    lo[i][j] = hi[i][j] = s0[i][j]
                    pinned[j][s0[i][j]] = i
                    self.pinned_ops[i][j] = True
                elif time_cond is TimeCondition.START_LEQ:
                    hi[i][j] = s0[i][j]
                elif time_cond is TimeCondition.COMPLETION_LEQ:
                    hi[i][j] = c0 - 1
        self.lo, self.hi, self.pinned = lo, hi, pinned
        # first slot >= t on machine j not taken by a pinned outsider
        nxt = [[H] * (H + 1) for _ in range(m)]
        for j in range(m):
            for t in range(H - 1, -1, -1):
                nxt[j][t] = t if pinned[j][t] < 0 else nxt[j][t + 1]
        self.next_unpinned = nxt

        # order conditions from the initial scheme (0-based positions)
        pos0 = [[0] * n for _ in range(m)]
        order0 = []
        for j in range(m):
            order = sorted(range(n), key=lambda i: s0[i][j])
            order0.append(order)
            for p, i in enumerate(order):
                pos0[j][i] = p
        self.pos0 = pos0
        self.out_order = [[i for i in order0[j] if not member[i]] for j in range(m)]
        # jobs that must precede member i on machine j under the predecessor rule
        before = [[0] * n for _ in range(m)]
        reserved = [[-1] * n for _ in range(m)]
        run = [[0] * (n + 1) for _ in range(m)]
        for j in range(m):
            prefix = 0
            guard = 0
            for p, i in enumerate(order0[j]):
                if member[i]:
                    before[j][i] = guard
                else:
                    reserved[j][p] = i
                prefix |= 1 << i
                if not member[i]:
                    guard = prefix
            for p in range(n - 1, -1, -1):
                run[j][p] = run[j][p + 1] + 1 if reserved[j][p] >= 0 else 0
        self.before, self.reserved, self.reserved_run = before, reserved, run

        # mutable state
        self.start = [[-1] * m for _ in range(n)]
        self.job_busy = [0] * n
        self.job_rem = [(1 << m) - 1] * n
        self.job_last = [-1] * n
        self.mach_done = [0] * m
        self.mach_count = [0] * m
        self.mach_last = [-1] * m
        self.mach_last_stack: list[int] = []
        self.mach_outs = [0] * m
        self.remaining = n * m
        self.done_cost = 0
        self.nodes = 0
        self.node_limit = cfg.node_limit
        self.best_cost = None
        self.best = None

    # ------------------------------------------------------------------
    def run(self, initial: int) -> CoalitionResult:
        # s0 is admissible for every coalition and regime
        self.best_cost = initial
        self.best = [list(r) for r in self.s0]
        self.initial = initial
        self._slot(0)
        witness = Schedule.from_rows(self.best) if self.cfg.record_witness else None
        return CoalitionResult(initial - self.best_cost, self.best_cost, witness, self.nodes, self.H)

    # ------------------------------------------------------------------
    def _lower_bound(self, t: int) -> int:
        m = self.m
        releases_by_machine: list[list[int]] = [[] for _ in range(m)]
        owners_by_machine: list[list[int]] = [[] for _ in range(m)]
        bounds = {}
        rems = []
        cond = self.scheme_cond
        nxt = self.next_unpinned
        for i in self.members:
            rem = self.job_rem[i]
            if not rem:
                continue
            rel = []
            for j in range(m):
                if not rem >> j & 1:
                    continue
                if cond is SchemeCondition.PREDECESSOR_SET:
                    r = t + (self.before[j][i] & ~self.mach_done[j]).bit_count()
                elif cond is SchemeCondition.POSITION:
                    r = t + self.reserved_run[j][self.mach_count[j]]
                else:
                    r = t
                if r < self.H:
                    r = nxt[j][r]
                rel.append(r)
                releases_by_machine[j].append(r)
                owners_by_machine[j].append(i)
            b = _greedy_finish(rel)[-1]
            bounds[i] = b
            rems.append(len(rel))
        if not bounds:
            return self.done_cost
        base = sum(bounds.values())
        gain = 0
        for j in range(m):
            owners = owners_by_machine[j]
            if len(owners) < 2:
                continue
            e = _greedy_finish(releases_by_machine[j])
            bs = sorted(bounds[i] for i in owners)
            g = sum(max(x, y) for x, y in zip(bs, e)) - sum(bs)
            if g > gain:
                gain = g
        # k jobs cannot all finish before their combined work fits on m machines
        rems.sort()
        bs = sorted(bounds.values())
        acc = 0
        g = 0
        for k, r in enumerate(rems):
            acc += r
            a = t + -(-acc // m)
            if a > bs[k]:
                g += a - bs[k]
        if g > gain:
            gain = g
        return self.done_cost + base + gain

    def _lex_bound_not_better(self, t: int) -> bool:
        """True if every completion is lexicographically >= the incumbent."""
        best = self.best
        for i in range(self.n):
            row = self.start[i]
            brow = best[i]
            for j in range(self.m):
                v = row[j]
                if v < 0:
                    v = t
                    if v < brow[j]:
                        return False
                    if v > brow[j]:
                        return True
                else:
                    if v < brow[j]:
                        return False
                    if v > brow[j]:
                        return True
        return True

    def _deadlines_ok(self, t: int) -> bool:
        n, m = self.n, self.m
        hi = self.hi
        per_machine: list[list[int]] = [[] for _ in range(m)]
        for i in range(n):
            rem = self.job_rem[i]
            if not rem:
                continue
            ds = []
            for j in range(m):
                if rem >> j & 1:
                    d = hi[i][j]
                    if d < t:
                        return False
                    ds.append(d)
                    per_machine[j].append(d)
            if len(ds) > 1:
                ds.sort()
                for k, d in enumerate(ds):
                    if d < t + k:
                        return False
        for ds in per_machine:
            if len(ds) > 1:
                ds.sort()
                for k, d in enumerate(ds):
                    if d < t + k:
                        return False
        return True

    # ------------------------------------------------------------------
    def _slot(self, t: int) -> None:
        if self.remaining == 0:
            cost = self.done_cost
            if cost < self.best_cost or (
                self.lex and cost == self.best_cost and not self._lex_bound_not_better(t)
            ):
                self.best_cost = cost
                self.best = [list(r) for r in self.start]
            return
        if t >= self.H or not self._deadlines_ok(t):
            return
        lb = self._lower_bound(t)
        if lb > self.best_cost:
            return
        if lb == self.best_cost and (not self.lex or self._lex_bound_not_better(t)):
            return
        self._machine(t, 0)

    def _machine(self, t: int, j: int) -> None:
        if j == self.m:
            self._slot(t + 1)
            return
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise SearchLimitExceeded(
                self.best_cost,
                self.initial,
                Schedule.from_rows(self.best),
                self.nodes,
            )
        bit_t = 1 << t
        pinned = self.pinned[j][t] if t < self.H else -1
        count = self.mach_count[j]
        if pinned >= 0:
            candidates = [pinned] if self._order_ok(j, pinned, count) else []
            allow_idle = False
        else:
            last = self.mach_last[j]
            gap = ((1 << t) - 1) & ~((1 << (last + 1)) - 1)
            candidates = []
            for i in range(self.n):
                if not self.job_rem[i] >> j & 1 or self.job_busy[i] & bit_t:
                    continue
                if t < self.lo[i][j] or t > self.hi[i][j] or self.pinned_ops[i][j]:
                    continue
                if gap & ~self.job_busy[i]:
                    continue
                if self._order_ok(j, i, count):
                    candidates.append(i)
            allow_idle = True

        for i in candidates:
            self._place(i, j, t)
            self._machine(t, j + 1)
            self._unplace(i, j, t)
        if allow_idle:
            self._machine(t, j + 1)

    def _order_ok(self, j: int, i: int, count: int) -> bool:
        cond = self.scheme_cond
        if cond is SchemeCondition.NONE:
            return True
        if cond is SchemeCondition.POSITION:
            r = self.reserved[j][count]
            return r == i if r >= 0 else self.member[i]
        outs = self.out_order[j]
        k = self.mach_outs[j]
        if self.member[i]:
            return k == len(outs) or self.pos0[j][i] < self.pos0[j][outs[k]]
        return k < len(outs) and outs[k] == i and count == self.pos0[j][i]

    def _place(self, i: int, j: int, t: int) -> None:
        self.start[i][j] = t
        self.job_busy[i] |= 1 << t
        self.job_rem[i] &= ~(1 << j)
        self.mach_done[j] |= 1 << i
        self.mach_count[j] += 1
        self.mach_last_stack.append(self.mach_last[j])
        self.mach_last[j] = t
        if not self.member[i]:
            self.mach_outs[j] += 1
        self.remaining -= 1
        if self.member[i] and not self.job_rem[i]:
            self.done_cost += t + 1

    def _unplace(self, i: int, j: int, t: int) -> None:
        if self.member[i] and not self.job_rem[i]:
            self.done_cost -= t + 1
        self.remaining += 1
        if not self.member[i]:
            self.mach_outs[j] -= 1
        self.mach_last[j] = self.mach_last_stack.pop()
        self.mach_count[j] -= 1
        self.mach_done[j] &= ~(1 << i)
        self.job_rem[i] |= 1 << j
        self.job_busy[i] &= ~(1 << t)
        self.start[i][j] = -1


def horizon_stability_check(inst: Instance, coalition, regime: Regime, H: int, cfg: SearchConfig | None = None) -> bool:
    """Whether the optimum at horizon ``H`` survives extending it by ``m`` slots."""
    cfg = cfg or SearchConfig(record_witness=False)
    a = min_coalition_cost(inst, coalition, regime, SearchConfig(H, cfg.node_limit, False))
    b = min_coalition_cost(inst, coalition, regime, SearchConfig(H + inst.m, cfg.node_limit, False))
    return a.min_cost == b.min_cost
