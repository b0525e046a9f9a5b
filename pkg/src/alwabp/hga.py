"""Hybrid genetic algorithm over priority-matrix chromosomes.

A chromosome is a workers x tasks matrix of keys in [0, 1]; decoding
runs the station-oriented lower-bound search with the matrix as task
priorities and MinRLB as the worker rule (forward, then backward, at
every tentative cycle, with the instance reduced first), then polishes
the result with the local search.  Fitness is the pair (cycle,
normalized load = executed time / (m * cycle)), compared
lexicographically with smaller better on both parts: at equal cycle a
crew that executes the same work faster is the fitter one.

Each generation keeps the elite unchanged, breeds offspring by biased
uniform crossover of one elite and one non-elite parent, and replaces
the tail with fresh random immigrants.  The initial population encodes
the 16 named task rules as matrices, topped up with random chromosomes.
Everything is driven by one seeded RNG, so a run is reproducible from
(instance, params).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .bounds import compute_bounds
from .constructive import (TaskRule, WorkerRule, _min_stats, _prio_builder,
                           solve_lower_bound_search)
from .localsearch import improve
from .solution import Solution


@dataclass(frozen=True)
class Chromosome:
    p: tuple[tuple[float, ...], ...]    # [worker][task] keys in [0, 1]

    def __post_init__(self):
        for row in self.p:
            for v in row:
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"priority {v!r} outside [0, 1]")

    @property
    def matrix(self):
        return self.p


@dataclass(frozen=True, order=True)
class Fitness:
    cycle: int
    norm_load: float    # executed time / (m * cycle), in (0, 1]


@dataclass(frozen=True)
class HgaParams:
    p: int = 100
    p_e: int | None = None              # default: 20% of p
    p_r: int | None = None              # default: 10% of p
    q: float = 0.5
    max_iters: int = 200
    max_stale_iters: int = 100
    rng_seed: int = 0
    stop_at_lower_bound: bool = True

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("population must hold at least one individual")
        if self.p_e is None:
            object.__setattr__(self, "p_e", max(1, round(0.2 * self.p)))
        if self.p_r is None:
            object.__setattr__(self, "p_r", round(0.1 * self.p))
        if self.p_e < 1:
            raise ValueError("need at least one elite individual")
        if self.p_r < 0:
            raise ValueError("immigrant count cannot be negative")
        if self.p_e + self.p_r >= self.p:
            raise ValueError("elite + immigrants must leave room for "
                             "offspring")
        if not 0.5 <= self.q <= 1.0:
            raise ValueError("crossover probability must be in [0.5, 1]")
        if self.max_iters < 0 or self.max_stale_iters < 1:
            raise ValueError("iteration limits out of range")


@dataclass(frozen=True)
class Individual:
    chromosome: Chromosome
    solution: Solution
    fitness: Fitness


@dataclass(frozen=True)
class LogEntry:
    iteration: int
    cycle: int
    norm_load: float
    seconds: float


@dataclass(frozen=True)
class HgaResult:
    solution: Solution
    fitness: Fitness
    log: tuple[LogEntry, ...]
    iterations: int
    reason: str                 # "bound" | "stale" | "max_iters"


def encode_rule(inst, rule: TaskRule, c_bar=None) -> Chromosome:
    """Express a named task rule as a static priority matrix.

    Per worker, tasks are ranked by the rule over the full crew (ties to
    the smaller index) and the best of n tasks gets key (n-1)/n, the
    worst 0.  Aggregates use max(LC1, LC2, LC3) to stand in for
    INFEASIBLE entries unless a cycle is given.
    """
    n, m = inst.n_tasks, inst.n_workers
    if c_bar is None:
        c_bar = compute_bounds(inst).best
    workers = list(range(m))
    clo = inst.closure()
    min1, _, _ = _min_stats(inst.times, workers, n)
    prio_of = _prio_builder(rule, inst, clo, workers, c_bar, min1)
    rows = []
    for w in workers:
        prio = prio_of(w)
        order = sorted(range(n), key=lambda i: (-prio[i], i))
        keys = [0.0] * n
        for rank, i in enumerate(order):        # rank 0 is the best task
            keys[i] = (n - 1 - rank) / n
        rows.append(tuple(keys))
    return Chromosome(tuple(rows))


def random_chromosome(inst, rng) -> Chromosome:
    return Chromosome(tuple(
        tuple(rng.random() for _ in range(inst.n_tasks))
        for _ in range(inst.n_workers)))


def crossover(a: Chromosome, b: Chromosome, q: float,
              rng: random.Random) -> Chromosome:
    """Biased uniform crossover: each cell comes from a with probability
    q (a is meant to be the elite parent), else from b."""
    if not 0.5 <= q <= 1.0:
        raise ValueError("crossover probability must be in [0.5, 1]")
    return Chromosome(tuple(
        tuple(x if rng.random() < q else y for x, y in zip(ra, rb))
        for ra, rb in zip(a.p, b.p)))


def decode(inst, chromosome: Chromosome, c_start=None,
           cache=None) -> tuple[Solution, Fitness]:
    """Lower-bound search with the chromosome as priorities, forward
    then backward per tentative cycle, reduction on, then local search.

    c_start defaults to the static bound max(LC1, LC2, LC3); pass a
    larger value to fold in an external relaxation bound.
    """
    if c_start is None:
        c_start = compute_bounds(inst).best
    matrix = chromosome.p
    sol = solve_lower_bound_search(inst, matrix, WorkerRule.MIN_RLB, "both",
                                   c_start=c_start, use_preprocess=True,
                                   cache=cache)
    sol = improve(inst, sol)
    executed = sum(sol.loads)
    fit = Fitness(sol.cycle, executed / (inst.n_workers * sol.cycle))
    return sol, fit


def _seed_chromosomes(inst, params, rng):
    chroms = [encode_rule(inst, rule) for rule in TaskRule]
    for _ in range(max(0, params.p - len(chroms))):
        chroms.append(random_chromosome(inst, rng))
    return chroms


def seed_population(inst, params: HgaParams) -> list[Individual]:
    """Initial population: the 16 rule encodings plus random top-up,
    decoded, sorted by fitness, truncated to the p best."""
    rng = random.Random(params.rng_seed)
    cache = {}
    c_start = compute_bounds(inst).best
    pop = []
    for chrom in _seed_chromosomes(inst, params, rng):
        sol, fit = decode(inst, chrom, c_start, cache)
        pop.append(Individual(chrom, sol, fit))
    pop.sort(key=lambda ind: ind.fitness)
    return pop[:params.p]


def evolve(inst, params: HgaParams, external_relax=None) -> HgaResult:
    """Run the full loop; returns the incumbent and a per-iteration log.

    Stops on max_iters, on max_stale_iters without improvement, or (by
    default) as soon as the incumbent cycle hits the lower bound and no
    better cycle is possible.
    """
    t0 = time.perf_counter()
    rng = random.Random(params.rng_seed)
    report = compute_bounds(inst, external_relax)
    c_start = report.best
    cache = {}

    population = []
    for chrom in _seed_chromosomes(inst, params, rng):
        sol, fit = decode(inst, chrom, c_start, cache)
        population.append(Individual(chrom, sol, fit))
    population.sort(key=lambda ind: ind.fitness)
    population = population[:params.p]

    best = population[0]
    log = [LogEntry(0, best.fitness.cycle, best.fitness.norm_load,
                    time.perf_counter() - t0)]
    iteration = 0
    stale = 0
    reason = "max_iters"
    while iteration < params.max_iters:
        if params.stop_at_lower_bound and best.fitness.cycle <= c_start:
            reason = "bound"
            break
        if stale >= params.max_stale_iters:
            reason = "stale"
            break
        iteration += 1
        elite = population[:params.p_e]
        rest = population[params.p_e:]
        nxt = list(elite)
        for _ in range(params.p - params.p_e - params.p_r):
            a = elite[rng.randrange(len(elite))]
            b = rest[rng.randrange(len(rest))]
            child = crossover(a.chromosome, b.chromosome, params.q, rng)
            sol, fit = decode(inst, child, c_start, cache)
            nxt.append(Individual(child, sol, fit))
        for _ in range(params.p_r):
            chrom = random_chromosome(inst, rng)
            sol, fit = decode(inst, chrom, c_start, cache)
            nxt.append(Individual(chrom, sol, fit))
        nxt.sort(key=lambda ind: ind.fitness)
        population = nxt
        if population[0].fitness < best.fitness:
            best = population[0]
            stale = 0
        else:
            stale += 1
        log.append(LogEntry(iteration, best.fitness.cycle,
                            best.fitness.norm_load,
                            time.perf_counter() - t0))
    if params.stop_at_lower_bound and best.fitness.cycle <= c_start:
        reason = "bound"

    return HgaResult(best.solution, best.fitness, tuple(log), iteration,
                     reason)
