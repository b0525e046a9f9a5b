from __future__ import annotations

import random

import pytest

from alwabp import BaseInstance, GeneratorConfig, Instance, generate

# 3 tasks, 2 workers, task 1 before tasks 2 and 3 (0-based: 0 -> 1, 0 -> 2).
TINY_A = Instance(3, 2, [[2, 3, 4], [5, 1, 1]], [(0, 1), (0, 2)], name="tiny-A")


@pytest.fixture
def tiny_a() -> Instance:
    return TINY_A


def random_base(rng: random.Random, n: int, t_max: int = 9,
                edge_prob: float = 0.3, name: str = "base") -> BaseInstance:
    times = tuple(rng.randint(1, t_max) for _ in range(n))
    edges = tuple((i, j) for i in range(n) for j in range(i + 1, n)
                  if rng.random() < edge_prob)
    return BaseInstance(name, times, edges)


def random_instance(rng: random.Random, n_max: int = 8, m_max: int = 4,
                    name: str = "rand") -> Instance:
    """Small random instance for oracle-backed tests (deterministic in rng)."""
    n = rng.randint(3, n_max)
    m = rng.randint(2, m_max)
    base = random_base(rng, n, name=name)
    density = rng.choice([0.0, 0.10, 0.20])
    cfg = GeneratorConfig(n_workers=m, variability=rng.choice(["low", "high"]),
                          infeasibility_density=density,
                          rng_seed=rng.randrange(2 ** 32))
    return generate(base, cfg)
