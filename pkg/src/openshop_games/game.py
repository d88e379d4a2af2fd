"""TU games of unit open shop problems, allocation rules and the core."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .admissibility import Regime
from .exact_lp import GE, linprog_exact
from .optimal import j_based_optimal
from .schedule import (
    Instance,
    InvalidInstanceError,
    Schedule,
    coalition_mask,
    coalition_members,
    completion_times,
    format_coalition,
    parse_coalition,
)
from .search import CoalitionResult, SearchConfig, SearchLimitExceeded, min_coalition_cost

MAX_PLAYERS = 12


class IncompleteGameError(RuntimeError):
    """Some coalition searches hit the node limit; ``game`` holds the partial result."""

    def __init__(self, game: "TUGame"):
        self.game = game
        names = ", ".join("{" + format_coalition(game.members(S)) + "}" for S in sorted(game.incomplete))
        super().__init__(f"values are lower bounds only for: {names}")


@dataclass
class TUGame:
    """Characteristic function over ``players``.

    ``values[S]`` is indexed by a bitmask over the positions of ``players``
    (bit ``k`` for ``players[k]``). ``incomplete`` lists masks whose value is
    only a lower bound because the search ran out of nodes.
    """

    players: tuple[int, ...]
    values: list[int]
    regime: str | None = None
    instance: Instance | None = None
    incomplete: frozenset[int] = frozenset()
    witnesses: dict[int, Schedule] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.players = tuple(self.players)
        if len(self.values) != 1 << len(self.players):
            raise InvalidInstanceError("need one value per coalition")
        if self.values[0] != 0:
            raise InvalidInstanceError("the empty coalition must have value 0")

    @classmethod
    def from_function(cls, n: int, fn, **kwargs) -> "TUGame":
        """Game on players ``1..n`` with ``v(S) = fn(frozenset(S))``."""
        players = tuple(range(1, n + 1))
        values = [0] + [fn(frozenset(coalition_members(S, n))) for S in range(1, 1 << n)]
        return cls(players, values, **kwargs)

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def grand(self) -> int:
        return (1 << self.n) - 1

    @property
    def complete(self) -> bool:
        return not self.incomplete

    def members(self, S: int) -> tuple[int, ...]:
        return tuple(p for k, p in enumerate(self.players) if S >> k & 1)

    def mask(self, coalition: Iterable[int]) -> int:
        index = {p: k for k, p in enumerate(self.players)}
        S = 0
        for p in coalition:
            if p not in index:
                raise InvalidInstanceError(f"player {p} not in game")
            S |= 1 << index[p]
        return S

    def value(self, coalition) -> int:
        S = coalition if isinstance(coalition, int) else self.mask(coalition)
        return self.values[S]

    def as_dict(self) -> dict[frozenset[int], int]:
        return {frozenset(self.members(S)): v for S, v in enumerate(self.values)}

    def to_dict(self) -> dict:
        out = {
            "players": list(self.players),
            "regime": self.regime,
            "values": {format_coalition(self.members(S)): v for S, v in enumerate(self.values)},
            "incomplete": [format_coalition(self.members(S)) for S in sorted(self.incomplete)],
        }
        if self.instance is not None:
            out["instance"] = self.instance.to_dict()
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "TUGame":
        raw = {parse_coalition(k): int(v) for k, v in data["values"].items()}
        players = tuple(data.get("players") or sorted(set().union(*raw)))
        game = cls(players, [0] * (1 << len(players)), data.get("regime"))
        for coalition, v in raw.items():
            game.values[game.mask(coalition)] = v
        if len(raw) != len(game.values) - (frozenset() not in raw):
            raise InvalidInstanceError("game JSON must list every nonempty coalition")
        game.incomplete = frozenset(game.mask(parse_coalition(k)) for k in data.get("incomplete", []))
        if data.get("instance") is not None:
            game.instance = Instance.from_dict(data["instance"])
        return game

    @classmethod
    def from_json(cls, text: str) -> "TUGame":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Allocation:
    x: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(Fraction(v) for v in self.x))

    def __len__(self) -> int:
        return len(self.x)

    def __getitem__(self, i: int) -> Fraction:
        """Payoff of player ``i`` (1-based)."""
        return self.x[i - 1]

    def total(self, members: Iterable[int] | None = None) -> Fraction:
        if members is None:
            return sum(self.x, Fraction(0))
        return sum((self.x[i - 1] for i in members), Fraction(0))

    def to_dict(self) -> dict:
        return {"x": [str(v) for v in self.x]}

    @classmethod
    def from_dict(cls, data: dict) -> "Allocation":
        return cls(tuple(Fraction(v) for v in data["x"]))


# ---------------------------------------------------------------------------
# games


def _solve_one(args) -> tuple[int, CoalitionResult | SearchLimitExceeded]:
    inst, S, regime, cfg = args
    try:
        return S, min_coalition_cost(inst, S, regime, cfg)
    except SearchLimitExceeded as exc:
        return S, exc


def build_game(
    inst: Instance,
    regime: Regime,
    cfg: SearchConfig | None = None,
    players: Sequence[int] | None = None,
    workers: int | None = None,
    strict: bool = False,
    max_players: int = MAX_PLAYERS,
) -> TUGame:
    """Coalition values of ``inst`` under ``regime``.

    ``players`` restricts the game to coalitions of those players (values
    still come from the full instance). Coalitions whose search exhausts the
    node budget keep the best value found and are listed in
    ``incomplete``; with ``strict`` an :class:`IncompleteGameError` is
    raised instead of returning.
    """
    cfg = cfg or SearchConfig(record_witness=False)
    players = tuple(players) if players is not None else tuple(range(1, inst.n + 1))
    if len(players) > max_players:
        raise ValueError(f"{len(players)} players means {2 ** len(players)} searches; raise max_players to force")
    game = TUGame(players, [0] * (1 << len(players)), regime.name, inst)
    jobs = [(inst, coalition_mask(game.members(S), inst.n), regime, cfg) for S in range(1, 1 << len(players))]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_solve_one, jobs, chunksize=4))
    else:
        results = [_solve_one(job) for job in jobs]
    incomplete = set()
    for S, (_, res) in enumerate(results, start=1):
        if isinstance(res, SearchLimitExceeded):
            game.values[S] = res.value_lower_bound
            incomplete.add(S)
            continue
        game.values[S] = res.value
        if res.witness is not None:
            game.witnesses[S] = res.witness
    game.incomplete = frozenset(incomplete)
    if strict and incomplete:
        raise IncompleteGameError(game)
    return game


# ---------------------------------------------------------------------------
# allocation rules


def mu_j(inst: Instance, j: int) -> Allocation:
    """Savings of each player when moving to the ``j``-based optimal schedule."""
    before = completion_times(inst.s0)
    after = completion_times(j_based_optimal(inst, j))
    return Allocation(tuple(Fraction(a - b) for a, b in zip(before, after)))


def mu_bar(inst: Instance) -> Allocation:
    """Average of the machine-based allocations over all machines."""
    total = [Fraction(0)] * inst.n
    for j in range(1, inst.m + 1):
        total = [a + b for a, b in zip(total, mu_j(inst, j).x)]
    return Allocation(tuple(v / inst.m for v in total))


def block_rounded_saving(inst: Instance, sch: Schedule, i: int) -> Fraction:
    """Average over machines of ``C_i(s0) - ceil(C_i^j / m) * m``.

    ``C_i^j`` is the completion of player ``i``'s operation on machine ``j``
    in ``sch``. For an optimal coalition schedule this bounds the player's
    actual saving from above, which is what makes the averaged rule stable.
    """
    m = inst.m
    c0 = completion_times(inst.s0)[i - 1]
    total = sum(c0 - -(-(sch.start[i - 1][j] + 1) // m) * m for j in range(m))
    return Fraction(total, m)


# ---------------------------------------------------------------------------
# core


@dataclass(frozen=True)
class CoreCheck:
    member: bool
    violated: frozenset[int] | None = None
    reason: str | None = None  # "efficiency" or "coalition"

    def __bool__(self) -> bool:
        return self.member


@dataclass(frozen=True)
class CoreResult:
    nonempty: bool
    point: Allocation | None
    min_grand_total: Fraction

    def __bool__(self) -> bool:
        return self.nonempty


def _masks_by_size(n: int):
    return sorted(range(1, 1 << n), key=lambda S: (bin(S).count("1"), [k for k in range(n) if S >> k & 1]))


def is_core_member(g: TUGame, x: Allocation) -> CoreCheck:
    """Exact core test; on failure reports the first violated coalition.

    Efficiency is tested first; then proper coalitions are scanned by size
    so the reported coalition is a smallest violated one.
    """
    if len(x) != g.n:
        raise InvalidInstanceError(f"allocation has {len(x)} entries for {g.n} players")
    payoff = dict(zip(g.players, x.x))
    if sum(x.x, Fraction(0)) != g.values[g.grand]:
        return CoreCheck(False, frozenset(g.players), "efficiency")
    for S in _masks_by_size(g.n):
        if S == g.grand:
            continue
        if sum((payoff[p] for p in g.members(S)), Fraction(0)) < g.values[S]:
            return CoreCheck(False, frozenset(g.members(S)), "coalition")
    return CoreCheck(True)


def core_nonempty(g: TUGame) -> CoreResult:
    """Decide core nonemptiness with an exact LP.

    Minimises ``x(N)`` subject to ``x(S) >= v(S)`` for every proper
    coalition; the core is nonempty iff the minimum is at most ``v(N)``.
    Singleton constraints are folded into the variables as
    ``x_i = v({i}) + y_i`` with ``y_i >= 0``.
    """
    n = g.n
    vN = Fraction(g.values[g.grand])
    if n == 1:
        return CoreResult(True, Allocation((vN,)), vN)
    base = [Fraction(g.values[1 << k]) for k in range(n)]
    rows, rhs = [], []
    for S in range(1, g.grand):
        if bin(S).count("1") < 2:
            continue
        rows.append([1 if S >> k & 1 else 0 for k in range(n)])
        rhs.append(g.values[S] - sum(base[k] for k in range(n) if S >> k & 1))
    res = linprog_exact([1] * n, rows, [GE] * len(rows), rhs)
    if res.status != "optimal":
        raise RuntimeError(f"core LP ended with status {res.status}")
    x = [b + y for b, y in zip(base, res.x)]
    lowest = sum(x, Fraction(0))
    if lowest > vN:
        return CoreResult(False, None, lowest)
    x[0] += vN - lowest
    return CoreResult(True, Allocation(tuple(x)), lowest)


# ---------------------------------------------------------------------------
# structure


def superadditivity_violations(g: TUGame) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Disjoint pairs ``(S, T)`` with ``v(S | T) < v(S) + v(T)``."""
    out = []
    for S in range(1, 1 << g.n):
        rest = g.grand & ~S
        T = rest
        while T:
            if S < T and g.values[S | T] < g.values[S] + g.values[T]:
                out.append((frozenset(g.members(S)), frozenset(g.members(T))))
            T = (T - 1) & rest
    return out


def check_superadditive(g: TUGame) -> tuple[bool, tuple[frozenset[int], frozenset[int]] | None]:
    bad = superadditivity_violations(g)
    return (not bad, bad[0] if bad else None)


def check_convex(g: TUGame) -> tuple[bool, tuple[frozenset[int], frozenset[int], int] | None]:
    """Increasing marginal contributions: ``S <= T`` not containing ``i``.

    Witness ``(S, T, i)`` with ``v(S+i) - v(S) > v(T+i) - v(T)``.
    """
    for k in range(g.n):
        bit = 1 << k
        others = g.grand & ~bit
        T = others
        while True:
            gain_T = g.values[T | bit] - g.values[T]
            S = T
            while True:
                if g.values[S | bit] - g.values[S] > gain_T:
                    return False, (frozenset(g.members(S)), frozenset(g.members(T)), g.players[k])
                if S == 0:
                    break
                S = (S - 1) & T
            if T == 0:
                break
            T = (T - 1) & others
    return True, None

