"""Plain-text slot tables, one row per machine, one column per slot."""
from __future__ import annotations

from .schedule import InvalidInstanceError, Schedule


def render_gantt(sch: Schedule, horizon: int | None = None) -> str:
    """Render ``sch`` as a slot table.

    The first line numbers the slots; every machine row lists the job in
    each slot or a blank cell::

             0 1 2 3 4 5 6 7
        m1 | 1 4 3 2 5     6
        m2 | 2 1 4 3 6 5
    """
    H = max(horizon or 0, sch.makespan)
    width = max(len(str(sch.n)), len(str(H - 1)))
    label = len(f"m{sch.m}")
    lines = [" " * (label + 3) + " ".join(str(t).rjust(width) for t in range(H))]
    for j, row in enumerate(sch.machine_rows()):
        row = row + [None] * (H - len(row))
        cells = " ".join((str(job) if job else "").rjust(width) for job in row)
        lines.append(f"{('m' + str(j + 1)).ljust(label)} | {cells}".rstrip())
    return "\n".join(lines)


def parse_gantt(text: str) -> Schedule:
    """Inverse of :func:`render_gantt`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise InvalidInstanceError("a slot table needs a header and at least one machine row")
    header = lines[0]
    # column k ends where the k-th slot number ends
    ends = []
    pos = 0
    for tok in header.split():
        pos = header.index(tok, pos) + len(tok)
        ends.append(pos)
    widths = {len(tok) for tok in header.split()}
    width = max(widths)
    table = []
    for line in lines[1:]:
        if "|" not in line:
            raise InvalidInstanceError(f"bad machine row {line!r}")
        line = line.ljust(ends[-1])
        row = []
        for end in ends:
            cell = line[end - width:end].strip()
            row.append(int(cell) if cell else None)
        table.append(row)
    return Schedule.from_machine_rows(table)
