from __future__ import annotations

import random

import pytest

from alwabp import (INFEASIBLE, CycleInfeasibleError, Instance,
                    compute_bounds, lc1, lc2, lc3, min_times, preprocess,
                    relax_sidecar, station_windows, validate_solution)
from bruteforce import brute_force_optimum, enumerate_min_times
from conftest import random_instance


def chain(times_by_worker, n=None):
    n = n or len(times_by_worker[0])
    edges = [(i, i + 1) for i in range(n - 1)]
    return Instance(n, len(times_by_worker), times_by_worker, edges)


def test_min_times(tiny_a):
    assert min_times(tiny_a) == [2, 1, 1]
    single = Instance(3, 1, [[4, 5, 6]], [])
    assert min_times(single) == [4, 5, 6]
    withinf = Instance(3, 2, [[2, 3, 4], [INFEASIBLE, 1, 1]],
                       [(0, 1), (0, 2)])
    assert min_times(withinf) == [2, 1, 1]


def test_lc1(tiny_a):
    assert lc1(tiny_a) == 2
    assert lc1(Instance(1, 1, [[7]], [])) == 7
    assert lc1(Instance(4, 2, [[1, 1, 1, 1], [1, 1, 1, 1]], [])) == 2


def test_lc2(tiny_a):
    assert lc2(tiny_a) == 2
    inst = Instance(5, 2, [[5, 4, 3, 2, 1]] * 2, [])
    assert lc2(inst) == 7            # k=1 takes positions 2 and 3: 4+3
    few = Instance(2, 3, [[9, 9]] * 3, [])
    assert lc2(few) == 0             # n <= m leaves no k to sum over


def test_station_windows(tiny_a):
    earliest, latest = station_windows(tiny_a, 2)
    assert earliest == [1, 2, 2]
    assert latest == [1, 2, 2]
    earliest, latest = station_windows(tiny_a, 1)
    assert earliest[0] > latest[0]   # inconsistent at c=1
    earliest, latest = station_windows(tiny_a, 100)
    assert earliest == [1, 1, 1]
    assert latest == [2, 2, 2]


def test_lc3(tiny_a):
    assert lc3(tiny_a, 1) == 2
    assert lc3(tiny_a) == 2
    three = chain([[1, 1, 1]] * 3)
    assert lc3(three, 1) == 1        # 3 unit tasks, 3 stations: windows fit


def test_lc3_never_below_start(tiny_a):
    assert lc3(tiny_a, 10) == 10


def test_compute_bounds(tiny_a):
    rep = compute_bounds(tiny_a)
    assert (rep.lc1, rep.lc2, rep.lc3) == (2, 2, 2)
    assert rep.best == 2 and rep.external_relax is None
    rep = compute_bounds(tiny_a, external_relax=2.5)
    assert rep.best == 3
    rep = compute_bounds(tiny_a, external_relax=2.0)
    assert rep.best == 2


def test_relax_sidecar(tmp_path, tiny_a):
    from alwabp import save_instance

    p = tmp_path / "tiny-A.alwabp"
    save_instance(tiny_a, p)
    assert relax_sidecar(p) is None
    (tmp_path / "tiny-A.alwabp.relax").write_text("2.75\n")
    assert relax_sidecar(p) == 2.75


def test_bounds_never_exceed_optimum():
    """Dual route: every bound is at most the brute-force optimum."""
    rng = random.Random(515)
    checked = 0
    for k in range(60):
        inst = random_instance(rng, n_max=7, m_max=3, name=f"b{k}")
        assert min_times(inst) == enumerate_min_times(inst)
        opt = brute_force_optimum(inst)
        if opt is None:
            continue
        rep = compute_bounds(inst)
        assert max(rep.lc1, rep.lc2, rep.lc3) <= opt
        checked += 1
    assert checked >= 40


# -- preprocessing ------------------------------------------------------------

@pytest.fixture
def tiny_a_sole():
    # tiny-A where task 1 can only be done by worker 1
    return Instance(3, 2, [[2, 3, 4], [INFEASIBLE, 1, 1]],
                    [(0, 1), (0, 2)], name="tiny-A-sole")


def test_preprocess_keeps_wide_cycle(tiny_a_sole):
    reduced, removed = preprocess(tiny_a_sole, 6)
    assert removed == 0
    assert reduced is tiny_a_sole


def test_preprocess_reduces_tight_cycle(tiny_a_sole):
    # c=5: only the pair (task 1, task 3) overflows: 2+4 > 5
    reduced, removed = preprocess(tiny_a_sole, 5)
    assert removed == 1
    assert reduced.times[0] == (2, 3, INFEASIBLE)
    # c=4: task 2 overflows too: 2+3 > 4
    reduced, removed = preprocess(tiny_a_sole, 4)
    assert removed == 2
    assert reduced.times[0] == (2, INFEASIBLE, INFEASIBLE)
    assert reduced.times[1] == (INFEASIBLE, 1, 1)


def test_preprocess_no_sole_worker_is_identity(tiny_a):
    reduced, removed = preprocess(tiny_a, 2)
    assert removed == 0 and reduced is tiny_a


def test_preprocess_cascades_to_fixed_point():
    # chain 1 -> 2 -> 3; task 1 only by worker 1.
    inst = chain([[3, 3, 3], [INFEASIBLE, 5, 2]])
    reduced, removed = preprocess(inst, 6)
    # first 1+2+3 (9 > 6) kicks task 3 off worker 1, making task 3 sole to
    # worker 2; then 5+2 (7 > 6) kicks task 2 off worker 2 as well
    assert removed == 2
    assert reduced.times[0] == (3, 3, INFEASIBLE)
    assert reduced.times[1] == (INFEASIBLE, INFEASIBLE, 2)


def test_preprocess_detects_infeasible_cycle():
    inst = chain([[2, 3, 4], [INFEASIBLE, 1, INFEASIBLE]])
    # tasks 1 and 3 are sole to worker 1 and 2+3+4 > 6
    with pytest.raises(CycleInfeasibleError):
        preprocess(inst, 6)


def test_preprocess_counts_infeasible_between_as_overflow():
    # 1 -> 2 -> 3, task 1 sole to worker 1, and worker 1 cannot do the
    # middle task: 1 and 3 can never share worker 1's station.
    inst = chain([[1, INFEASIBLE, 1], [INFEASIBLE, 1, 1]])
    reduced, removed = preprocess(inst, 100)
    assert removed == 1
    assert reduced.times[0] == (1, INFEASIBLE, INFEASIBLE)


def test_preprocess_preserves_optimum():
    """Reducing at c = optimum never removes every optimal solution."""
    rng = random.Random(616)
    checked = 0
    for k in range(50):
        inst = random_instance(rng, n_max=6, m_max=3, name=f"p{k}")
        opt = brute_force_optimum(inst)
        if opt is None:
            continue
        reduced, _ = preprocess(inst, opt)     # must not raise
        assert brute_force_optimum(reduced) == opt
        checked += 1
    assert checked >= 35
