"""Solutions: an ordered worker/task-set per station, plus the checker."""

from __future__ import annotations

from dataclasses import dataclass

from .instance import INFEASIBLE, Instance


@dataclass(frozen=True)
class Solution:
    """stations[k] = (worker, tasks at station k); stations are in line order."""

    stations: tuple[tuple[int, frozenset[int]], ...]
    loads: tuple[int, ...]
    cycle: int
    direction: str = "forward"

    @classmethod
    def build(cls, inst: Instance, stations, direction="forward") -> "Solution":
        norm = tuple((w, frozenset(ts)) for w, ts in stations)
        loads = tuple(
            sum(inst.times[w][i] for i in ts) if ts else 0 for w, ts in norm)
        return cls(norm, loads, max(loads) if loads else 0, direction)

    def station_of(self) -> dict[int, int]:
        where = {}
        for k, (_, tasks) in enumerate(self.stations):
            for i in tasks:
                where.setdefault(i, k)
        return where


def validate_solution(inst: Instance, sol: Solution) -> tuple[bool, list[str]]:
    """Check a solution against the instance; returns (feasible, violations).

    Verified: one station per worker (a bijection), tasks partitioned over
    the stations, every worker capable of every task assigned to it,
    precedence respected by station order, and the recorded loads/cycle
    matching a recomputation.
    """
    v = []

    if len(sol.stations) != inst.n_workers:
        v.append(f"expected {inst.n_workers} stations, got {len(sol.stations)}")

    workers = [w for w, _ in sol.stations]
    if sorted(workers) != list(range(inst.n_workers)):
        v.append("workers and stations are not in bijection")

    where = {}
    for k, (w, tasks) in enumerate(sol.stations):
        for i in tasks:
            if not (0 <= i < inst.n_tasks):
                v.append(f"unknown task {i + 1}")
                continue
            if i in where:
                v.append(f"task {i + 1} assigned more than once")
            else:
                where[i] = k
            if 0 <= w < inst.n_workers and inst.times[w][i] == INFEASIBLE:
                v.append(f"task {i + 1} is infeasible for worker {w + 1}")
    missing = [i for i in range(inst.n_tasks) if i not in where]
    if missing:
        v.append("unassigned tasks: " + ", ".join(str(i + 1) for i in missing))

    for i, j in inst.edges:
        if i in where and j in where and where[i] > where[j]:
            v.append(f"task {i + 1} must not come after task {j + 1}")

    if not v:
        loads = tuple(
            sum(inst.times[w][i] for i in ts) if ts else 0
            for w, ts in sol.stations)
        if tuple(sol.loads) != loads:
            v.append(f"recorded loads {sol.loads} differ from {loads}")
        elif sol.cycle != max(loads):
            v.append(f"recorded cycle {sol.cycle} is not the maximum load")

    return (not v, v)
