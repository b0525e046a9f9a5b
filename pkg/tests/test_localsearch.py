"""Local search: frozen descent traces + never-worsens properties."""

import random

import pytest

from alwabp import (
    Solution,
    TaskRule,
    WorkerRule,
    solve_lower_bound_search,
    validate_solution,
)
from alwabp.instance import Instance
from alwabp.localsearch import (
    DoubleShift,
    Shift,
    Swap,
    WorkerSwap,
    critical_count,
    improve,
)

from bruteforce import brute_force_optimum
from conftest import random_instance


def test_move_invariants():
    with pytest.raises(ValueError):
        Shift(0, 1, 1)
    with pytest.raises(ValueError):
        Swap(2, 2)
    with pytest.raises(ValueError):
        WorkerSwap(0, 0)
    d = DoubleShift(Shift(0, 0, 1), Shift(1, 1, 0))
    assert d.first.task == 0 and d.second.to_station == 0


def test_critical_count(tiny_a):
    sol = Solution.build(tiny_a, [(0, {0}), (1, {1, 2})])
    assert sol.loads == (2, 2)
    assert critical_count(sol) == 2
    uneven = Solution(((0, frozenset({0})), (1, frozenset({1}))), (2, 1), 2)
    assert critical_count(uneven) == 1
    single = Solution.build(Instance(1, 1, [[7]], []), [(0, {0})])
    assert critical_count(single) == 1


def test_improve_shifts_overloaded_station(tiny_a):
    # everything on worker 0 except the last task: one shift balances it
    start = Solution.build(tiny_a, [(0, {0, 1}), (1, {2})])
    assert start.loads == (5, 1)
    moves = []
    out = improve(tiny_a, start, moves)
    assert out.stations == ((0, frozenset({0})), (1, frozenset({1, 2})))
    assert out.loads == (2, 2)
    assert out.cycle == 2
    assert moves == [Shift(1, 0, 1)]
    ok, violations = validate_solution(tiny_a, out)
    assert ok, violations


def test_improve_reaches_worker_swap(tiny_a):
    # workers start on the wrong stations; the descent first rebalances
    # tasks, then swaps the workers, then rebalances again
    start = Solution.build(tiny_a, [(1, {0}), (0, {1, 2})])
    assert start.loads == (5, 7)
    moves = []
    out = improve(tiny_a, start, moves)
    assert out.cycle == 2
    assert out.stations == ((0, frozenset({0})), (1, frozenset({1, 2})))
    assert moves == [Shift(1, 1, 0), WorkerSwap(0, 1), Shift(1, 0, 1)]


def test_improve_leaves_optimum_alone(tiny_a):
    best = Solution.build(tiny_a, [(0, {0}), (1, {1, 2})])
    out = improve(tiny_a, best)
    assert out == best


def test_improve_keeps_direction(tiny_a):
    start = Solution.build(tiny_a, [(0, {0, 1}), (1, {2})], "backward")
    assert improve(tiny_a, start).direction == "backward"


def test_double_shift_escapes_local_optimum():
    # everything starts on one station; after two plain shifts the
    # descent stalls, because task 2 cannot leave station 0 while its
    # successor 3 sits at station 1.  The chained move parks task 3 at
    # station 2 (no gain by itself) and lets task 2 follow.
    inst = Instance(5, 3,
                    [[3, 1, 6, 1, 1], [2, 1, 1, 1, 1], [8, 1, 1, 1, 1]],
                    [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    start = Solution.build(inst, [(1, {0, 1, 2, 3, 4}), (0, set()),
                                  (2, set())])
    assert start.loads == (6, 0, 0)
    moves = []
    out = improve(inst, start, moves)
    assert moves == [
        Shift(3, 0, 1),
        Shift(4, 0, 1),
        DoubleShift(Shift(3, 1, 2), Shift(2, 0, 2)),
        Shift(1, 0, 1),
    ]
    assert out.stations == ((1, frozenset({0})), (0, frozenset({1, 4})),
                            (2, frozenset({2, 3})))
    assert out.loads == (2, 2, 2)
    assert out.cycle == brute_force_optimum(inst) == 2
    ok, violations = validate_solution(inst, out)
    assert ok, violations


def test_improve_never_worsens_and_is_idempotent():
    rng = random.Random(0xD0)
    checked = 0
    for _ in range(40):
        inst = random_instance(rng)
        try:
            sol = solve_lower_bound_search(inst, TaskRule.MAX_F,
                                           WorkerRule.MIN_RLB, "both")
        except Exception:
            continue
        out = improve(inst, sol)
        assert (out.cycle, critical_count(out)) <= (sol.cycle,
                                                    critical_count(sol))
        ok, violations = validate_solution(inst, out)
        assert ok, (inst.name, violations)
        again = improve(inst, out)
        assert again == out
        checked += 1
    assert checked >= 30


def test_improve_respects_oracle_floor():
    rng = random.Random(0xD1)
    checked = 0
    for _ in range(40):
        inst = random_instance(rng)
        opt = brute_force_optimum(inst)
        if opt is None:
            continue
        sol = solve_lower_bound_search(inst, TaskRule.MIN_TIME_MIN,
                                       WorkerRule.MAX_TASKS, "both")
        out = improve(inst, sol)
        assert out.cycle >= opt
        checked += 1
    assert checked >= 30


def test_improve_often_helps():
    # deliberately bad starts (loose cycle, everything front-loaded)
    # must never worsen, and the oracle bound still holds
    rng = random.Random(0xD2)
    for _ in range(25):
        inst = random_instance(rng)
        opt = brute_force_optimum(inst)
        if opt is None:
            continue
        sol = solve_lower_bound_search(inst, TaskRule.MAX_TIME_MAX,
                                       WorkerRule.MAX_TASKS,
                                       c_start=3 * opt + 5)
        out = improve(inst, sol)
        assert out.cycle <= sol.cycle
        assert out.cycle >= opt
        ok, _ = validate_solution(inst, out)
        assert ok
