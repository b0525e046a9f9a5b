"""Heuristic solver kit for assembly line worker assignment and balancing
(type 2: fixed stations, minimize the cycle time)."""

from .instance import (INFEASIBLE, ClosureView, Instance, ParseError,
                       ValidationError, closure, format_instance,
                       load_instance, parse_instance, reverse, save_instance)
from .solution import Solution, validate_solution
from .generator import (BaseInstance, GeneratorConfig, generate, load_base,
                        parse_base)
from .bounds import (BoundsReport, CycleInfeasibleError, compute_bounds, lc1,
                     lc2, lc3, min_times, preprocess, relax_sidecar,
                     station_windows)
from .lp import export_lp, write_lp
from .constructive import (DIRECTIONS, NoFeasibleAssignmentError, RuleConfig,
                           RuleRun, TaskRule, WorkerRule, all_rule_configs,
                           assemble, best_cycle, bwa_cycle, cycle_ceiling,
                           run_all_96, score_worker, solve_lower_bound_search,
                           station_load_tasks)
from .localsearch import (DoubleShift, Move, Shift, Swap, WorkerSwap,
                          critical_count, improve)
from .hga import (Chromosome, Fitness, HgaParams, HgaResult, Individual,
                  LogEntry, crossover, decode, encode_rule, evolve,
                  random_chromosome, seed_population)

__all__ = [
    "INFEASIBLE", "ClosureView", "Instance", "ParseError", "ValidationError",
    "closure", "format_instance", "load_instance", "parse_instance",
    "reverse", "save_instance",
    "Solution", "validate_solution",
    "BaseInstance", "GeneratorConfig", "generate", "load_base", "parse_base",
    "BoundsReport", "CycleInfeasibleError", "compute_bounds", "lc1", "lc2",
    "lc3", "min_times", "preprocess", "relax_sidecar", "station_windows",
    "export_lp", "write_lp",
    "DIRECTIONS", "NoFeasibleAssignmentError", "RuleConfig", "RuleRun",
    "TaskRule", "WorkerRule", "all_rule_configs", "assemble", "best_cycle",
    "bwa_cycle", "cycle_ceiling", "run_all_96", "score_worker",
    "solve_lower_bound_search", "station_load_tasks",
    "DoubleShift", "Move", "Shift", "Swap", "WorkerSwap", "critical_count",
    "improve",
    "Chromosome", "Fitness", "HgaParams", "HgaResult", "Individual",
    "LogEntry", "crossover", "decode", "encode_rule", "evolve",
    "random_chromosome", "seed_population",
]
