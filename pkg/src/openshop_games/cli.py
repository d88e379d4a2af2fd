"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 assertion failure, 4 resource limit.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .admissibility import Regime
from .game import (
    Allocation,
    TUGame,
    build_game,
    core_nonempty,
    is_core_member,
    mu_bar,
    mu_j,
)
from .gantt import parse_gantt, render_gantt
from .generate import STYLES, gen_instance
from .optimal import adiri_amit, j_based_optimal
from .worked_examples import EXAMPLES, FAIL, LOWER_BOUND_ONLY, run_examples
from .schedule import (
    Instance,
    InvalidInstanceError,
    completion_times,
    format_coalition,
    parse_coalition,
    schedule_from_dict,
)
from .search import SearchConfig, SearchLimitExceeded, min_coalition_cost

EXIT_OK, EXIT_INVALID, EXIT_ASSERT, EXIT_LIMIT = 0, 2, 3, 4


class _Invalid(Exception):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise _Invalid(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise _Invalid(f"{path} is not valid JSON: {exc}") from exc


def _load_instance(path: str) -> Instance:
    return Instance.from_dict(_read_json(path))


def _frac(x: Fraction) -> str:
    return str(x)


def _emit(args, payload: dict, table: str) -> None:
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print(table)


def _cfg(args, witness: bool = False) -> SearchConfig:
    kwargs = {"horizon": getattr(args, "horizon", None), "record_witness": witness}
    if getattr(args, "node_limit", None) is not None:
        kwargs["node_limit"] = args.node_limit
    return SearchConfig(**kwargs)


# ---------------------------------------------------------------------------
# commands


def cmd_solve(args) -> int:
    if args.instance:
        inst = _load_instance(args.instance)
        sch = j_based_optimal(inst, args.j or 1)
    else:
        if args.n is None or args.m is None:
            raise _Invalid("solve needs --n and --m, or --instance")
        if args.n < 1 or args.m < 1:
            raise _Invalid("--n and --m must be positive")
        sch = adiri_amit(args.n, args.m)
        if args.j is not None:
            sch = j_based_optimal(Instance(sch), args.j)
    costs = completion_times(sch)
    gantt = render_gantt(sch)
    payload = {
        "n": sch.n,
        "m": sch.m,
        "schedule": sch.to_json(),
        "completion_times": list(costs),
        "total_cost": sum(costs),
        "gantt": gantt,
    }
    _emit(args, payload, f"{gantt}\n\ntotal completion time: {sum(costs)}")
    return EXIT_OK


def cmd_value(args) -> int:
    inst = _load_instance(args.instance)
    regime = Regime.from_name(args.regime)
    T = parse_coalition(args.coalition)
    if not T <= set(range(1, inst.n + 1)):
        raise _Invalid(f"coalition {args.coalition} mentions players outside 1..{inst.n}")
    try:
        res = min_coalition_cost(inst, T, regime, _cfg(args, args.witness))
    except SearchLimitExceeded as exc:
        payload = {
            "status": LOWER_BOUND_ONLY,
            "value_lower_bound": exc.value_lower_bound,
            "best_cost": exc.best_cost,
            "nodes": exc.nodes,
        }
        _emit(args, payload, f"node limit reached; value >= {exc.value_lower_bound}")
        return EXIT_LIMIT
    payload = {"value": res.value, "min_cost": res.min_cost}
    if args.witness and res.witness is not None:
        payload["witness"] = res.witness.to_json()
    lines = [f"v({{{format_coalition(sorted(T))}}}) under {regime.name} = {res.value}", f"min cost {res.min_cost}"]
    if args.witness and res.witness is not None:
        lines += ["", render_gantt(res.witness)]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _game_table(g: TUGame) -> str:
    rows = []
    for S in range(1, 1 << g.n):
        mark = "  (lower bound)" if S in g.incomplete else ""
        rows.append(f"{{{format_coalition(g.members(S))}}}: {g.values[S]}{mark}")
    return "\n".join(rows)


def cmd_game(args) -> int:
    inst = _load_instance(args.instance)
    regime = Regime.from_name(args.regime)
    players = sorted(parse_coalition(args.players)) if args.players else None
    if players and not set(players) <= set(range(1, inst.n + 1)):
        raise _Invalid(f"players must lie in 1..{inst.n}")
    try:
        g = build_game(inst, regime, _cfg(args), players=players, workers=args.workers)
    except ValueError as exc:
        raise _Invalid(str(exc)) from exc
    _emit(args, g.to_dict(), _game_table(g))
    if g.incomplete:
        print("node limit reached: some values are lower bounds only", file=sys.stderr)
        return EXIT_LIMIT
    return EXIT_OK


def cmd_alloc(args) -> int:
    inst = _load_instance(args.instance)
    if args.rule == "mu_j":
        if args.j is None or not 1 <= args.j <= inst.m:
            raise _Invalid(f"rule mu_j needs --j in 1..{inst.m}")
        x = mu_j(inst, args.j)
    else:
        x = mu_bar(inst)
    table = "\n".join(f"player {i}: {_frac(v)}" for i, v in enumerate(x.x, start=1))
    _emit(args, x.to_dict(), table)
    return EXIT_OK


def cmd_core(args) -> int:
    try:
        g = TUGame.from_dict(_read_json(args.game))
    except (KeyError, TypeError, ValueError) as exc:
        raise _Invalid(f"bad game JSON: {exc}") from exc
    if args.allocation:
        try:
            x = Allocation.from_dict(_read_json(args.allocation))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise _Invalid(f"bad allocation JSON: {exc}") from exc
        verdict = is_core_member(g, x)
        violated = format_coalition(sorted(verdict.violated)) if verdict.violated else None
        payload = {"member": verdict.member, "violated": violated, "reason": verdict.reason}
        table = "in the core" if verdict.member else f"not in the core: {{{violated}}} ({verdict.reason})"
    else:
        res = core_nonempty(g)
        payload = {
            "nonempty": res.nonempty,
            "point": res.point.to_dict()["x"] if res.point else None,
            "min_grand_total": _frac(res.min_grand_total),
            "grand_value": g.values[g.grand],
        }
        if res.nonempty:
            table = "core nonempty; point " + ", ".join(map(_frac, res.point.x))
        else:
            table = f"core empty: stable payoffs need {_frac(res.min_grand_total)} > v(N) = {g.values[g.grand]}"
    _emit(args, payload, table)
    if g.incomplete:
        print("game has lower-bound-only values; verdict is not certified", file=sys.stderr)
        return EXIT_LIMIT
    return EXIT_OK


def cmd_examples(args) -> int:
    if args.filter and args.filter not in EXAMPLES:
        raise _Invalid(f"unknown example {args.filter!r}; expected one of {', '.join(EXAMPLES)}")
    reports = run_examples(args.filter, _cfg(args))
    payload = {
        r.id: [
            {"name": c.name, "status": c.status, "expected": repr(c.expected), "actual": repr(c.actual)}
            for c in r.checks
        ]
        for r in reports
    }
    lines = []
    for r in reports:
        lines.append(f"{r.id}: {r.description}")
        for c in r.checks:
            line = f"  [{c.status}] {c.name}"
            if not c.ok:
                line += f"\n      expected: {c.expected!r}\n      actual:   {c.actual!r}"
            lines.append(line)
    _emit(args, payload, "\n".join(lines))
    statuses = {c.status for r in reports for c in r.checks}
    if FAIL in statuses:
        return EXIT_ASSERT
    if LOWER_BOUND_ONLY in statuses:
        return EXIT_LIMIT
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n < 1 or args.m < 1:
        raise _Invalid("--n and --m must be positive")
    inst = gen_instance(args.n, args.m, args.seed, args.style)
    _emit(args, inst.to_dict(), render_gantt(inst.s0))
    return EXIT_OK


def cmd_gantt(args) -> int:
    if args.parse:
        text = sys.stdin.read() if args.parse == "-" else open(args.parse).read()
        sch = parse_gantt(text)
    else:
        sch = schedule_from_dict(_read_json(args.input))
    gantt = render_gantt(sch, args.horizon)
    _emit(args, {"n": sch.n, "m": sch.m, "schedule": sch.to_json(), "gantt": gantt}, gantt)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--horizon", type=int, help="last usable slot + 1 (default: makespan + n*m)")
    search.add_argument("--node-limit", type=int, help="search budget per coalition (env OPENSHOP_NODE_LIMIT)")

    p = argparse.ArgumentParser(prog="openshop", description="Cooperative unit open shop games.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="optimal schedule for the whole shop")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--instance")
    s.add_argument("--j", type=int, help="keep the initial order of this machine")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("value", parents=[common, search], help="value of one coalition")
    s.add_argument("--instance", required=True)
    s.add_argument("--coalition", required=True, help="comma-separated players, e.g. 1,3,5")
    s.add_argument("--regime", required=True)
    s.add_argument("--witness", action="store_true", help="include an optimal schedule")
    s.set_defaults(func=cmd_value)

    s = sub.add_parser("game", parents=[common, search], help="all coalition values")
    s.add_argument("--instance", required=True)
    s.add_argument("--regime", required=True)
    s.add_argument("--players", help="restrict to coalitions of these players")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_game)

    s = sub.add_parser("alloc", parents=[common], help="allocation rule")
    s.add_argument("--instance", required=True)
    s.add_argument("--rule", choices=("mu_bar", "mu_j"), required=True)
    s.add_argument("--j", type=int)
    s.set_defaults(func=cmd_alloc)

    s = sub.add_parser("core", parents=[common], help="core membership or nonemptiness")
    s.add_argument("--game", required=True)
    s.add_argument("--allocation")
    s.set_defaults(func=cmd_core)

    s = sub.add_parser("examples", parents=[common, search], help="run the worked-example checks")
    s.add_argument("--filter", help="run a single example id")
    s.set_defaults(func=cmd_examples)

    s = sub.add_parser("gen", parents=[common], help="random instance")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--style", choices=STYLES, default=STYLES[0])
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("gantt", parents=[common], help="render or parse a slot table")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="JSON file with a 'schedule' or 's0' key")
    src.add_argument("--parse", help="text file holding a rendered table")
    s.add_argument("--horizon", type=int)
    s.set_defaults(func=cmd_gantt)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (_Invalid, InvalidInstanceError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
