"""Deterministic, splittable random streams.

Every stochastic step (a k-means restart, a search permutation, a Monte
Carlo replication) draws from its own generator derived from the user seed
plus a fixed integer path. Streams never depend on scheduling order or
thread count, so identical seeds reproduce results bit for bit.
"""

from __future__ import annotations

import numpy as np

# Domain tags keep sibling stream families statistically independent.
KMEANS_RESTARTS = 1
SEARCH_PERMUTATIONS = 2
REPLICATIONS = 3
DATA = 4


def _entropy(seed: int, path: tuple[int, ...]) -> tuple[int, ...]:
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return (seed,) + tuple(int(k) for k in path)


def substream(seed: int, *path: int) -> np.random.Generator:
    """Return the generator at ``path`` under ``seed``; same path, same stream."""
    return np.random.default_rng(np.random.SeedSequence(entropy=_entropy(seed, path)))


def subseed(seed: int, *path: int) -> int:
    """Derive a child integer seed for APIs that take seeds, not generators."""
    state = np.random.SeedSequence(entropy=_entropy(seed, path)).generate_state(1, np.uint64)
    return int(state[0])


def as_generator(seed) -> np.random.Generator:
    """Accept either a non-negative integer seed or a ready generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return substream(int(seed))
