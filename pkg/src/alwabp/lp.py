"""Export the exact 0-1 model in CPLEX LP text format.

Variables: x_s{s}_w{w}_i{i} (task i done by worker w at station s),
y_s{s}_w{w} (worker w sits at station s), and the continuous cycle time
c.  Variables for (w, i) pairs the worker cannot execute are omitted
outright.  Station/worker/task indices in the file are 1-based.
"""

from __future__ import annotations

from pathlib import Path

from .instance import INFEASIBLE, Instance


def _x(s, w, i) -> str:
    return f"x_s{s + 1}_w{w + 1}_i{i + 1}"


def _y(s, w) -> str:
    return f"y_s{s + 1}_w{w + 1}"


def export_lp(inst: Instance, relaxed: bool = False) -> str:
    n, m = inst.n_tasks, inst.n_workers
    able = [[w for w in range(m) if inst.times[w][i] != INFEASIBLE]
            for i in range(n)]

    lines = [f"\\ {inst.name}: minimize the cycle time, {m} stations",
             "Minimize", " obj: c", "Subject To"]

    for i in range(n):
        terms = " + ".join(_x(s, w, i) for s in range(m) for w in able[i])
        lines.append(f" assign_i{i + 1}: {terms} = 1")

    for w in range(m):
        terms = " + ".join(_y(s, w) for s in range(m))
        lines.append(f" worker_w{w + 1}: {terms} = 1")

    for s in range(m):
        terms = " + ".join(_y(s, w) for w in range(m))
        lines.append(f" station_s{s + 1}: {terms} = 1")

    for i, j in inst.edges:
        parts = []
        for s in range(m):
            for w in able[i]:
                coef = "" if s == 0 else f"{s + 1} "
                parts.append(f"+ {coef}{_x(s, w, i)}")
        for s in range(m):
            for w in able[j]:
                coef = "" if s == 0 else f"{s + 1} "
                parts.append(f"- {coef}{_x(s, w, j)}")
        body = " ".join(parts).lstrip("+ ")
        lines.append(f" prec_i{i + 1}_j{j + 1}: {body} <= 0")

    for s in range(m):
        parts = [f"+ {inst.times[w][i]} {_x(s, w, i)}"
                 for i in range(n) for w in able[i]]
        body = " ".join(parts).lstrip("+ ")
        lines.append(f" load_s{s + 1}: {body} - c <= 0")

    for s in range(m):
        for w in range(m):
            parts = [f"+ {_x(s, w, i)}" for i in range(n) if w in able[i]]
            body = " ".join(parts).lstrip("+ ")
            if body:
                lines.append(f" link_s{s + 1}_w{w + 1}: {body} - {n} {_y(s, w)} <= 0")
            else:
                lines.append(f" link_s{s + 1}_w{w + 1}: - {n} {_y(s, w)} <= 0")

    names = [_x(s, w, i) for s in range(m) for i in range(n) for w in able[i]]
    names += [_y(s, w) for s in range(m) for w in range(m)]

    lines.append("Bounds")
    lines.append(" c >= 0")
    if relaxed:
        for v in names:
            lines.append(f" 0 <= {v} <= 1")
    else:
        lines.append("Binary")
        for v in names:
            lines.append(f" {v}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(inst: Instance, path, relaxed: bool = False) -> None:
    Path(path).write_text(export_lp(inst, relaxed=relaxed))
