"""Station-oriented constructive heuristics.

Stations are filled in line order.  For one tentative cycle time, every
still-available worker is offered the station: the worker greedily takes
the highest-priority available task that still fits until nothing fits
(a maximal load).  A worker rule then commits one worker and its task
set, and the next station starts.  If tasks remain after the last
station, the cycle time is infeasible for the heuristic and the search
tries the next integer.

Priorities come either from a named task rule or from an externally
supplied worker x task matrix of values in [0, 1] (larger = earlier).
Worker-dependent statistics (fastest/slowest/average times, positional
weights, ranks) are recomputed per station over the workers still
available, with INFEASIBLE times replaced by the tentative cycle time
where an aggregate needs a finite stand-in.

Tie-breaking is fixed everywhere so runs are reproducible: tasks by more
immediate followers, then smaller time for the candidate worker, then
smaller index; workers by the rule score, then a rule-specific second
score (load balance estimate, or the task count), then smaller idle
time, then smaller index.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

from .bounds import CycleInfeasibleError, lc1, preprocess
from .instance import INFEASIBLE, Instance
from .solution import Solution


class NoFeasibleAssignmentError(Exception):
    """Even the search ceiling produced no assignment."""


class TaskRule(Enum):
    """Named priority rules; '-'/'+'/'Avg' refer to the fastest, slowest
    and average execution time over the available workers."""

    MAX_F = "MaxF"                 # more transitive followers first
    MAX_IF = "MaxIF"               # more immediate followers first
    MAX_TIME_MIN = "MaxTime-"
    MAX_TIME_MAX = "MaxTime+"
    MAX_TIME_AVG = "MaxTimeAvg"
    MIN_TIME_MIN = "MinTime-"
    MIN_TIME_MAX = "MinTime+"
    MIN_TIME_AVG = "MinTimeAvg"
    MAX_PW_MIN = "MaxPW-"          # positional weight: own + followers' times
    MAX_PW_MAX = "MaxPW+"
    MAX_PW_AVG = "MaxPWAvg"
    MIN_D = "MinD"                 # time handicap vs the fastest worker
    MIN_R = "MinR"                 # time ratio vs the fastest worker
    MAX_F_TIME = "MaxFTime"        # immediate followers per time unit
    MAX_IF_TIME = "MaxIFTime"      # transitive followers per time unit
    MIN_RANK = "MinRank"           # how many workers are faster on the task


class WorkerRule(Enum):
    MAX_TASKS = "MaxTasks"         # largest committed task set
    MIN_BWA = "MinBWA"             # smallest bottleneck assignment of the rest
    MIN_RLB = "MinRLB"             # smallest balanced lower bound for the rest


DIRECTIONS = ("forward", "backward")


@dataclass(frozen=True)
class RuleConfig:
    task_rule: TaskRule
    worker_rule: WorkerRule
    direction: str = "forward"

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")

    @property
    def label(self) -> str:
        return (f"{self.task_rule.value}/{self.worker_rule.value}/"
                f"{self.direction}")


def all_rule_configs() -> list[RuleConfig]:
    """All 16 x 3 x 2 = 96 rule combinations, in a fixed order."""
    return [RuleConfig(t, w, d)
            for t in TaskRule for w in WorkerRule for d in DIRECTIONS]


# -- per-station statistics ---------------------------------------------------

def _min_stats(times, workers, n):
    """Fastest and second fastest worker per task, over `workers`."""
    min1 = [INFEASIBLE] * n
    amin = [-1] * n
    min2 = [INFEASIBLE] * n
    for w in workers:
        row = times[w]
        for i in range(n):
            t = row[i]
            if t < min1[i]:
                min2[i] = min1[i]
                min1[i] = t
                amin[i] = w
            elif t < min2[i]:
                min2[i] = t
    return min1, amin, min2


def _with_pw(clo, vec):
    return [vec[i] + sum(vec[h] for h in clo.succ_star[i])
            for i in range(len(vec))]


def _prio_builder(source, inst, clo, workers, c_bar, min1):
    """Returns prio(w) -> per-task priority list (larger = earlier).

    Shared, worker-independent arrays are computed once per station;
    worker-dependent rules compute an O(n) array per candidate worker.
    Entries for tasks the worker cannot execute are never read.
    """
    n = inst.n_tasks
    times = inst.times

    if not isinstance(source, TaskRule):          # priority matrix
        matrix = source
        return lambda w: matrix[w]

    rule = source
    if rule is TaskRule.MAX_F:
        arr = [len(s) for s in clo.succ_star]
        return lambda w: arr
    if rule is TaskRule.MAX_IF:
        arr = [len(s) for s in clo.succ]
        return lambda w: arr

    if rule in (TaskRule.MAX_TIME_MIN, TaskRule.MIN_TIME_MIN,
                TaskRule.MAX_PW_MIN):
        base = [t if t != INFEASIBLE else c_bar for t in min1]
    elif rule in (TaskRule.MAX_TIME_MAX, TaskRule.MIN_TIME_MAX,
                  TaskRule.MAX_PW_MAX):
        base = [max((times[w][i] if times[w][i] != INFEASIBLE else c_bar)
                    for w in workers) for i in range(n)]
    elif rule in (TaskRule.MAX_TIME_AVG, TaskRule.MIN_TIME_AVG,
                  TaskRule.MAX_PW_AVG):
        k = len(workers)
        base = [sum((times[w][i] if times[w][i] != INFEASIBLE else c_bar)
                    for w in workers) / k for i in range(n)]
    else:
        base = None

    if rule in (TaskRule.MAX_TIME_MIN, TaskRule.MAX_TIME_MAX,
                TaskRule.MAX_TIME_AVG):
        return lambda w: base
    if rule in (TaskRule.MIN_TIME_MIN, TaskRule.MIN_TIME_MAX,
                TaskRule.MIN_TIME_AVG):
        neg = [-t for t in base]
        return lambda w: neg
    if rule in (TaskRule.MAX_PW_MIN, TaskRule.MAX_PW_MAX,
                TaskRule.MAX_PW_AVG):
        pw = _with_pw(clo, base)
        return lambda w: pw

    if rule is TaskRule.MIN_D:
        return lambda w: [min1[i] - times[w][i] for i in range(n)]
    if rule is TaskRule.MIN_R:
        return lambda w: [-(times[w][i] / min1[i]) if min1[i] != INFEASIBLE
                          else 0.0 for i in range(n)]
    if rule is TaskRule.MAX_F_TIME:
        n_imm = [len(s) for s in clo.succ]
        return lambda w: [n_imm[i] / times[w][i] for i in range(n)]
    if rule is TaskRule.MAX_IF_TIME:
        n_star = [len(s) for s in clo.succ_star]
        return lambda w: [n_star[i] / times[w][i] for i in range(n)]
    if rule is TaskRule.MIN_RANK:
        def rank_prio(w):
            row = times[w]
            out = []
            for i in range(n):
                t = row[i]
                out.append(-sum(1 for v in workers if times[v][i] < t))
            return out
        return rank_prio
    raise AssertionError(rule)


# -- one station, one worker --------------------------------------------------

def _fill(inst, u_mask, assigned, w, c_bar, prio, n_imm):
    """Greedy maximal load for worker w: T mask and its load."""
    times_w = inst.times[w]
    pred_masks = inst.pred_masks
    cands = []
    keys = {}
    mask = u_mask
    while mask:
        low = mask & -mask
        i = low.bit_length() - 1
        mask ^= low
        t = times_w[i]
        if t != INFEASIBLE:
            cands.append(i)
            keys[i] = (prio[i], n_imm[i], -t, -i)
    T = 0
    load = 0
    while True:
        done = assigned | T
        best_i = -1
        best_key = None
        for i in cands:
            if T >> i & 1:
                continue
            if pred_masks[i] & ~done:
                continue
            if load + times_w[i] > c_bar:
                continue
            k = keys[i]
            if best_key is None or k > best_key:
                best_key = k
                best_i = i
        if best_i < 0:
            return T, load
        T |= 1 << best_i
        load += times_w[best_i]


def station_load_tasks(inst, unassigned, available_workers, worker, c_bar,
                       source) -> set[int]:
    """Task set worker would take at the next station (public wrapper).

    `unassigned` are the tasks not yet committed to earlier stations;
    everything else counts as already done.
    """
    clo = inst.closure()
    workers = sorted(available_workers)
    u_mask = 0
    for i in unassigned:
        u_mask |= 1 << i
    assigned = ((1 << inst.n_tasks) - 1) ^ u_mask
    min1, _, _ = _min_stats(inst.times, workers, inst.n_tasks)
    prio = _prio_builder(source, inst, clo, workers, c_bar, min1)(worker)
    n_imm = [len(s) for s in clo.succ]
    T, _ = _fill(inst, u_mask, assigned, worker, c_bar, prio, n_imm)
    return {i for i in range(inst.n_tasks) if T >> i & 1}


# -- worker scoring -----------------------------------------------------------

def bwa_cycle(inst, tasks, workers) -> float:
    """Bottleneck cycle of the relaxed assignment ignoring precedence.

    Tasks in ascending index order each go to their fastest worker
    (ties: least loaded so far, then smallest index); returns the
    largest resulting load, INFEASIBLE if some task has no capable
    worker, and 0 for an empty task set.
    """
    tasks = sorted(tasks)
    if not tasks:
        return 0
    workers = sorted(workers)
    if not workers:
        return INFEASIBLE
    times = inst.times
    loads = {v: 0 for v in workers}
    for i in tasks:
        fastest = INFEASIBLE
        for v in workers:
            t = times[v][i]
            if t < fastest:
                fastest = t
        if fastest == INFEASIBLE:
            return INFEASIBLE
        pick = -1
        pick_load = None
        for v in workers:
            if times[v][i] == fastest and (pick < 0 or loads[v] < pick_load):
                pick = v
                pick_load = loads[v]
        loads[pick] += fastest
    return max(loads.values())


def _rest_lower_bound(inst, rest_mask, others_count, w, min1, amin, min2):
    """Average fastest-time load of the remaining tasks over the other
    workers; INFEASIBLE if some remaining task needs w."""
    if others_count == 0:
        return 0 if rest_mask == 0 else INFEASIBLE
    total = 0
    mask = rest_mask
    while mask:
        low = mask & -mask
        i = low.bit_length() - 1
        mask ^= low
        t = min1[i] if amin[i] != w else min2[i]
        if t == INFEASIBLE:
            return INFEASIBLE
        total += t
    return total / others_count


def score_worker(inst, unassigned, available_workers, worker,
                 tasks_for_worker, rule: WorkerRule) -> float:
    """Score of committing `worker` with `tasks_for_worker` (public
    wrapper; smaller is better for MinBWA/MinRLB, larger for MaxTasks)."""
    workers = sorted(available_workers)
    rest = set(unassigned) - set(tasks_for_worker)
    if rule is WorkerRule.MAX_TASKS:
        return len(tasks_for_worker)
    others = [v for v in workers if v != worker]
    if rule is WorkerRule.MIN_BWA:
        return bwa_cycle(inst, rest, others)
    min1, amin, min2 = _min_stats(inst.times, workers, inst.n_tasks)
    rest_mask = 0
    for i in rest:
        rest_mask |= 1 << i
    return _rest_lower_bound(inst, rest_mask, len(others), worker,
                             min1, amin, min2)


# -- full assembly ------------------------------------------------------------

def _assemble_forward(inst, c_bar, source, worker_rule):
    n, m = inst.n_tasks, inst.n_workers
    clo = inst.closure()
    n_imm = [len(s) for s in clo.succ]
    u_mask = (1 << n) - 1
    assigned = 0
    workers = list(range(m))
    stations = []
    loads = []

    for _ in range(m):
        min1, amin, min2 = _min_stats(inst.times, workers, n)
        prio_of = _prio_builder(source, inst, clo, workers, c_bar, min1)
        others = len(workers) - 1
        best = None
        best_score = None
        for w in workers:
            T, load = _fill(inst, u_mask, assigned, w, c_bar, prio_of(w), n_imm)
            rest = u_mask ^ T
            size = T.bit_count()
            if worker_rule is WorkerRule.MAX_TASKS:
                rlb = _rest_lower_bound(inst, rest, others, w, min1, amin, min2)
                score = (-size, rlb, c_bar - load, w)
            elif worker_rule is WorkerRule.MIN_BWA:
                rest_tasks = [i for i in range(n) if rest >> i & 1]
                bwa = bwa_cycle(inst, rest_tasks, [v for v in workers if v != w])
                rlb = _rest_lower_bound(inst, rest, others, w, min1, amin, min2)
                score = (bwa, rlb, c_bar - load, w)
            else:
                rlb = _rest_lower_bound(inst, rest, others, w, min1, amin, min2)
                score = (rlb, -size, c_bar - load, w)
            if best_score is None or score < best_score:
                best_score = score
                best = (w, T, load)
        w, T, load = best
        stations.append((w, frozenset(i for i in range(n) if T >> i & 1)))
        loads.append(load)
        u_mask ^= T
        assigned |= T
        workers.remove(w)

    if u_mask:
        return None
    return Solution(tuple(stations), tuple(loads),
                    max(loads) if loads else 0, "forward")


def assemble(inst, c_bar, source, worker_rule,
             direction="forward") -> Solution | None:
    """One full pass at a fixed tentative cycle time.

    Returns a feasible Solution or None when tasks remain unassigned.
    Backward runs work on the reversed instance and report the stations
    flipped back into original line order.
    """
    if direction == "forward":
        return _assemble_forward(inst, c_bar, source, worker_rule)
    if direction != "backward":
        raise ValueError(f"unknown direction {direction!r}")
    sol = _assemble_forward(inst.reverse(), c_bar, source, worker_rule)
    if sol is None:
        return None
    return Solution(tuple(reversed(sol.stations)),
                    tuple(reversed(sol.loads)), sol.cycle, "backward")


def cycle_ceiling(inst) -> int:
    """Cycle no heuristic needs to exceed: the whole line done serially,
    each task at its slowest capable worker."""
    total = 0
    for i in range(inst.n_tasks):
        total += max(inst.times[w][i] for w in range(inst.n_workers)
                     if inst.times[w][i] != INFEASIBLE)
    return total


def solve_lower_bound_search(inst, source, worker_rule, direction="forward",
                             c_start=None, use_preprocess=False,
                             cache=None) -> Solution:
    """Increase the tentative cycle one by one until an assembly succeeds.

    Starts at LC1 unless c_start is given.  direction 'both' tries
    forward then backward at every tentative cycle.  With use_preprocess
    the instance is reduced at each tentative cycle first; a reduction
    proof of infeasibility skips the cycle.  `cache` (a dict) may be
    shared between calls on the same instance to reuse reductions.
    """
    directions = DIRECTIONS if direction == "both" else (direction,)
    for d in directions:
        if d not in DIRECTIONS:
            raise ValueError(f"unknown direction {d!r}")
    c = c_start if c_start is not None else lc1(inst)
    ceiling = max(cycle_ceiling(inst), c)   # an explicit start is always tried
    if cache is None:
        cache = {}
    while c <= ceiling:
        if use_preprocess:
            entry = cache.get(c)
            if entry is None:
                try:
                    red, _ = preprocess(inst, c)
                except CycleInfeasibleError:
                    red = None
                entry = cache[c] = {"work": red, "rev": None}
            work = entry["work"]
        else:
            entry = cache.get("plain")
            if entry is None:
                entry = cache["plain"] = {"work": inst, "rev": None}
            work = entry["work"]
        if work is not None:
            for d in directions:
                if d == "forward":
                    sol = _assemble_forward(work, c, source, worker_rule)
                else:
                    if entry["rev"] is None:
                        entry["rev"] = work.reverse()
                    sol = _assemble_forward(entry["rev"], c, source,
                                            worker_rule)
                    if sol is not None:
                        sol = Solution(tuple(reversed(sol.stations)),
                                       tuple(reversed(sol.loads)),
                                       sol.cycle, "backward")
                if sol is not None:
                    return sol
        c += 1
    raise NoFeasibleAssignmentError(
        f"{inst.name}: no feasible assignment up to cycle {ceiling}")


@dataclass(frozen=True)
class RuleRun:
    config: RuleConfig
    cycle: int | None          # None when the search ceiling was exhausted
    elapsed: float


def run_all_96(inst, use_preprocess=False, c_start=None) -> list[RuleRun]:
    """Run every rule combination once; order is fixed and deterministic."""
    rows = []
    for cfg in all_rule_configs():
        t0 = time.perf_counter()
        try:
            sol = solve_lower_bound_search(
                inst, cfg.task_rule, cfg.worker_rule, cfg.direction,
                c_start=c_start, use_preprocess=use_preprocess)
            cycle = sol.cycle
        except NoFeasibleAssignmentError:
            cycle = None
        rows.append(RuleRun(cfg, cycle, time.perf_counter() - t0))
    return rows


def best_cycle(rows, worker_rule: WorkerRule | None = None) -> int | None:
    """Best cycle over the rows, optionally only those of one worker rule."""
    cycles = [r.cycle for r in rows
              if r.cycle is not None
              and (worker_rule is None or r.config.worker_rule is worker_rule)]
    return min(cycles) if cycles else None
