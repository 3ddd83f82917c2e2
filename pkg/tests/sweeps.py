"""The two fixed instance sweeps shared by the acceptance tests."""

from __future__ import annotations

import random
from functools import lru_cache

from nobeling.cube import CoordinateOrder, CubeSet

RANDOM_SWEEP_SEED = 1729
RANDOM_SWEEP_SIZE = 200
RANDOM_SWEEP_MAX_POINTS = 400


@lru_cache(maxsize=None)
def exhaustive_sweep(max_n: int = 3) -> tuple[CubeSet, ...]:
    """Every subset of every cube {0,1}^n with n <= max_n, identity order."""
    out = []
    for n in range(max_n + 1):
        order = CoordinateOrder(n)
        size = 1 << n
        for mask in range(1 << size):
            out.append(CubeSet(order, tuple(x for x in range(size) if mask >> x & 1)))
    return tuple(out)


@lru_cache(maxsize=None)
def random_sweep(
    count: int = RANDOM_SWEEP_SIZE, seed: int = RANDOM_SWEEP_SEED
) -> tuple[CubeSet, ...]:
    """Random subsets, n in 4..12, at most 400 points, random coordinate orders."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(4, 12)
        ranks = list(range(n))
        rng.shuffle(ranks)
        size = rng.randint(1, min(RANDOM_SWEEP_MAX_POINTS, 1 << n))
        points = rng.sample(range(1 << n), size)
        out.append(CubeSet(CoordinateOrder(n, tuple(ranks)), tuple(points)))
    return tuple(out)
