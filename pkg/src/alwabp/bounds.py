"""Cycle-time lower bounds and cycle-driven instance reduction.

All bounds work on t-_i, the fastest execution time of task i over the
workers that can execute it.  LC1 combines the largest single time with
the perfectly balanced load; LC2 sums the smallest k+1 entries among the
k*m+1 largest times (some station must take k+1 of them); LC3 searches
for the smallest cycle whose earliest/latest station windows are
consistent for every task.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .instance import INFEASIBLE, Instance, ParseError


class CycleInfeasibleError(Exception):
    """The tentative cycle time admits no assignment at all."""


def min_times(inst: Instance) -> list:
    out = []
    for i in range(inst.n_tasks):
        best = INFEASIBLE
        for w in range(inst.n_workers):
            t = inst.times[w][i]
            if t < best:
                best = t
        out.append(best)
    return out


def _ceil_div(a, b) -> int:
    return -(-a // b)


def lc1(inst: Instance) -> int:
    t = min_times(inst)
    return max(max(t), _ceil_div(sum(t), inst.n_workers))


def lc2(inst: Instance) -> int:
    # t sorted non-increasingly, 1-based position p -> t[p - 1]
    t = sorted(min_times(inst), reverse=True)
    n, m = inst.n_tasks, inst.n_workers
    best = 0
    for k in range(1, (n - 1) // m + 1):
        s = sum(t[k * m - i] for i in range(k + 1))    # positions km+1-i
        if s > best:
            best = s
    return best


def _head_tail(inst: Instance) -> tuple[list, list]:
    """Per task: t- of the task plus all its transitive predecessors
    (head) respectively successors (tail)."""
    t = min_times(inst)
    clo = inst.closure()
    head = [t[i] + sum(t[j] for j in clo.pred_star[i])
            for i in range(inst.n_tasks)]
    tail = [t[i] + sum(t[j] for j in clo.succ_star[i])
            for i in range(inst.n_tasks)]
    return head, tail


def station_windows(inst: Instance, c: int) -> tuple[list[int], list[int]]:
    """Earliest and latest station (1-based) each task can occupy at cycle c."""
    head, tail = _head_tail(inst)
    m = inst.n_workers
    earliest = [_ceil_div(h, c) for h in head]
    latest = [m + 1 - _ceil_div(t, c) for t in tail]
    return earliest, latest


def lc3(inst: Instance, c_start: int | None = None) -> int:
    """Smallest c >= c_start whose station windows are all consistent.

    Defaults to starting at max(LC1, LC2).  Terminates: at c = sum(t-)
    every window collapses to [1, m].
    """
    if c_start is None:
        c_start = max(lc1(inst), lc2(inst))
    head, tail = _head_tail(inst)
    m = inst.n_workers
    c = max(1, c_start)
    while True:
        ok = True
        for h, t in zip(head, tail):
            if _ceil_div(h, c) > m + 1 - _ceil_div(t, c):
                ok = False
                break
        if ok:
            return c
        c += 1


@dataclass(frozen=True)
class BoundsReport:
    lc1: int
    lc2: int
    lc3: int
    external_relax: float | None
    best: int


def compute_bounds(inst: Instance,
                   external_relax: float | None = None) -> BoundsReport:
    import math

    a = lc1(inst)
    b = lc2(inst)
    c = lc3(inst, max(a, b))
    best = max(a, b, c)
    if external_relax is not None:
        # small slack so solver noise just above an integer does not
        # round an exact relaxation value up
        best = max(best, math.ceil(external_relax - 1e-9))
    return BoundsReport(a, b, c, external_relax, best)


def relax_sidecar(path) -> float | None:
    """Read an externally computed relaxation bound for an instance file.

    The side file sits next to the instance with '.relax' appended to the
    full file name and holds a single number.
    """
    p = Path(str(path) + ".relax")
    if not p.exists():
        return None
    text = p.read_text().strip()
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{p}: expected a single number, got {text!r}") from None


def preprocess(inst: Instance, c: int) -> tuple[Instance, int]:
    """Propagate cycle-time c into extra INFEASIBLE cells.

    If task i can only be executed by worker w and k were executed by w
    as well, then i, k and every task between them would share w's
    station; when those times sum beyond c (an INFEASIBLE time counts as
    beyond), k cannot go to w, so t_wk becomes INFEASIBLE.  Applied to a
    fixed point; raises CycleInfeasibleError when some task would lose
    its last capable worker.  Returns (reduced instance, cells removed).
    """
    n, m = inst.n_tasks, inst.n_workers
    clo = inst.closure()
    times = [list(row) for row in inst.times]
    finite_count = [0] * n
    sole_worker = [-1] * n
    for i in range(n):
        for w in range(m):
            if times[w][i] != INFEASIBLE:
                finite_count[i] += 1
                sole_worker[i] = w

    removed = 0
    changed = True
    while changed:
        changed = False
        for i in range(n):
            if finite_count[i] != 1:
                continue
            w = sole_worker[i]
            t_i = times[w][i]
            row = times[w]
            for k in range(n):
                if k == i or row[k] == INFEASIBLE:
                    continue
                if k in clo.succ_star[i]:
                    between = clo.succ_star[i] & clo.pred_star[k]
                elif k in clo.pred_star[i]:
                    between = clo.succ_star[k] & clo.pred_star[i]
                else:
                    between = ()
                total = t_i + row[k]
                over = total > c
                if not over:
                    for j in between:
                        t = row[j]
                        if t == INFEASIBLE or total + t > c:
                            over = True
                            break
                        total += t
                if over:
                    row[k] = INFEASIBLE
                    finite_count[k] -= 1
                    removed += 1
                    changed = True
                    if finite_count[k] == 0:
                        raise CycleInfeasibleError(
                            f"cycle time {c} proven infeasible: task {k + 1} "
                            f"lost its last capable worker")
                    if finite_count[k] == 1:
                        sole_worker[k] = next(
                            v for v in range(m) if times[v][k] != INFEASIBLE)

    if removed == 0:
        return inst, 0
    reduced = Instance(n, m, times, inst.edges, name=inst.name)
    reduced._closure = clo
    reduced._pred_masks = inst._pred_masks
    return reduced, removed
