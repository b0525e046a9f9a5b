"""First-improvement local search over feasible solutions.

Four move types: shifting one task to another station, swapping two
tasks between stations, a chained pair of shifts whose first half is
allowed to be non-improving, and swapping the workers of two stations
while their task sets stay put.

A move is accepted only when the result is still feasible and strictly
improves the pair (cycle time, number of stations loaded at the cycle
time), compared lexicographically: draining a critical station helps
even when the cycle itself cannot drop yet.  Neighborhoods are scanned
in a fixed order (stations ascending, tasks ascending), and after every
accepted move the descent restarts from the first neighborhood, so the
outcome is deterministic.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass

from .instance import INFEASIBLE
from .solution import Solution


@dataclass(frozen=True)
class Shift:
    task: int
    from_station: int
    to_station: int

    def __post_init__(self):
        if self.from_station == self.to_station:
            raise ValueError("shift must change the station")


@dataclass(frozen=True)
class Swap:
    task_a: int
    task_b: int

    def __post_init__(self):
        if self.task_a == self.task_b:
            raise ValueError("swap needs two distinct tasks")


@dataclass(frozen=True)
class DoubleShift:
    first: Shift
    second: Shift


@dataclass(frozen=True)
class WorkerSwap:
    station_a: int
    station_b: int

    def __post_init__(self):
        if self.station_a == self.station_b:
            raise ValueError("worker swap needs two distinct stations")


Move = Shift | Swap | DoubleShift | WorkerSwap


def critical_count(sol: Solution) -> int:
    """Stations whose load equals the cycle time."""
    return sum(1 for load in sol.loads if load == sol.cycle)


def _key(loads):
    cycle = max(loads)
    return cycle, loads.count(cycle)


class _State:
    """Mutable working copy of a solution."""

    def __init__(self, inst, sol):
        self.inst = inst
        self.times = inst.times
        clo = inst.closure()
        self.pred = clo.pred
        self.succ = clo.succ
        self.m = inst.n_workers
        self.workers = [w for w, _ in sol.stations]
        self.tasks = [sorted(ts) for _, ts in sol.stations]
        self.where = [0] * inst.n_tasks
        for s, ts in enumerate(self.tasks):
            for i in ts:
                self.where[i] = s
        self.loads = list(sol.loads)

    def key(self):
        return _key(self.loads)

    def to_solution(self, direction):
        return Solution(tuple((self.workers[s], frozenset(self.tasks[s]))
                              for s in range(self.m)),
                        tuple(self.loads), max(self.loads), direction)

    # -- shifts ---------------------------------------------------------

    def iter_shifts(self):
        """Feasible shifts in scan order: (task, from, to, new key)."""
        where = self.where
        loads = self.loads
        for a in range(self.m):
            for i in list(self.tasks[a]):
                lo = 0
                for p in self.pred[i]:
                    sp = where[p]
                    if sp > lo:
                        lo = sp
                hi = self.m - 1
                for s in self.succ[i]:
                    ss = where[s]
                    if ss < hi:
                        hi = ss
                t_a = self.times[self.workers[a]][i]
                for b in range(lo, hi + 1):
                    if b == a:
                        continue
                    t_b = self.times[self.workers[b]][i]
                    if t_b == INFEASIBLE:
                        continue
                    la, lb = loads[a] - t_a, loads[b] + t_b
                    cycle = 0
                    crit = 0
                    for s in range(self.m):
                        load = la if s == a else lb if s == b else loads[s]
                        if load > cycle:
                            cycle, crit = load, 1
                        elif load == cycle:
                            crit += 1
                    yield i, a, b, (cycle, crit)

    def do_shift(self, i, a, b):
        self.tasks[a].remove(i)
        insort(self.tasks[b], i)
        self.where[i] = b
        self.loads[a] -= self.times[self.workers[a]][i]
        self.loads[b] += self.times[self.workers[b]][i]

    # -- swaps ----------------------------------------------------------

    def swap_key(self, i, a, j, b):
        """New key if tasks i@a and j@b trade places, or None."""
        times = self.times
        wa, wb = self.workers[a], self.workers[b]
        if times[wa][j] == INFEASIBLE or times[wb][i] == INFEASIBLE:
            return None
        where = self.where
        for p in self.pred[i]:
            if (a if p == j else where[p]) > b:
                return None
        for s in self.succ[i]:
            if (a if s == j else where[s]) < b:
                return None
        for p in self.pred[j]:
            if (b if p == i else where[p]) > a:
                return None
        for s in self.succ[j]:
            if (b if s == i else where[s]) < a:
                return None
        la = self.loads[a] - times[wa][i] + times[wa][j]
        lb = self.loads[b] - times[wb][j] + times[wb][i]
        cycle = 0
        crit = 0
        for s in range(self.m):
            load = la if s == a else lb if s == b else self.loads[s]
            if load > cycle:
                cycle, crit = load, 1
            elif load == cycle:
                crit += 1
        return cycle, crit

    def do_swap(self, i, a, j, b):
        self.do_shift(i, a, b)
        self.do_shift(j, b, a)

    # -- worker swaps ----------------------------------------------------

    def worker_swap_key(self, a, b):
        """New key if stations a and b trade workers, or None."""
        times = self.times
        wa, wb = self.workers[a], self.workers[b]
        la = 0
        for i in self.tasks[a]:
            t = times[wb][i]
            if t == INFEASIBLE:
                return None
            la += t
        lb = 0
        for j in self.tasks[b]:
            t = times[wa][j]
            if t == INFEASIBLE:
                return None
            lb += t
        cycle = 0
        crit = 0
        for s in range(self.m):
            load = la if s == a else lb if s == b else self.loads[s]
            if load > cycle:
                cycle, crit = load, 1
            elif load == cycle:
                crit += 1
        return cycle, crit

    def do_worker_swap(self, a, b):
        self.workers[a], self.workers[b] = self.workers[b], self.workers[a]
        self.loads[a] = sum(self.times[self.workers[a]][i]
                            for i in self.tasks[a])
        self.loads[b] = sum(self.times[self.workers[b]][j]
                            for j in self.tasks[b])


def _try_shift(st, key, moves):
    for i, a, b, new_key in st.iter_shifts():
        if new_key < key:
            st.do_shift(i, a, b)
            if moves is not None:
                moves.append(Shift(i, a, b))
            return True
    return False


def _try_swap(st, key, moves):
    for a in range(st.m):
        for b in range(a + 1, st.m):
            for i in st.tasks[a]:
                for j in st.tasks[b]:
                    new_key = st.swap_key(i, a, j, b)
                    if new_key is not None and new_key < key:
                        st.do_swap(i, a, j, b)
                        if moves is not None:
                            moves.append(Swap(i, j))
                        return True
    return False


def _try_double_shift(st, key, moves):
    # the first shift may stall or even hurt, as long as the pair wins
    for i, a, b, mid_key in st.iter_shifts():
        if mid_key < key:
            continue        # plain improving shifts belong to the shift pass
        st.do_shift(i, a, b)
        for j, c, d, new_key in st.iter_shifts():
            if new_key < key:
                st.do_shift(j, c, d)
                if moves is not None:
                    moves.append(DoubleShift(Shift(i, a, b), Shift(j, c, d)))
                return True
        st.do_shift(i, b, a)
    return False


def _try_worker_swap(st, key, moves):
    for a in range(st.m):
        for b in range(a + 1, st.m):
            new_key = st.worker_swap_key(a, b)
            if new_key is not None and new_key < key:
                st.do_worker_swap(a, b)
                if moves is not None:
                    moves.append(WorkerSwap(a, b))
                return True
    return False


def improve(inst, sol: Solution, moves: list | None = None) -> Solution:
    """Descend until no move is accepted; never worsens, never breaks
    feasibility.  When `moves` is a list, accepted moves are appended."""
    st = _State(inst, sol)
    while True:
        key = st.key()
        if _try_shift(st, key, moves):
            continue
        if _try_swap(st, key, moves):
            continue
        if _try_double_shift(st, key, moves):
            continue
        if _try_worker_swap(st, key, moves):
            continue
        break
    return st.to_solution(sol.direction)
