"""Empirical stability of the best subset as the sample grows.

The probe repeatedly regenerates a design at increasing sample sizes and
asks how often the best d-variable subset (by exhaustive argmax of the
match objective) is the expected one. If selection is consistent the hit
fraction should not degrade as n grows; the neighbor count for
conditional strategies follows a sublinear schedule so that r/n shrinks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from . import rng
from .exceptions import ClusterSiftError
from .kmeans import KMeansPartition
from .objective import SubsetEvaluator, parse_strategy
from .simulate import generate
from .subsets import IndexSubset


def default_neighbor_schedule(n: int) -> int:
    """r = ceil(n^0.6): grows without bound while r/n -> 0."""
    return max(1, math.ceil(int(n) ** 0.6))


@dataclass
class ProbeResult:
    """Hit counts of the expected subset per sample size."""

    design: str
    strategy: str
    d: int
    n_grid: tuple[int, ...]
    successes: tuple[int, ...]
    errors: tuple[int, ...]
    reps: int
    seed: int
    reference: tuple[tuple[int, ...], ...]

    @property
    def fractions(self) -> tuple[float, ...]:
        return tuple(
            s / max(self.reps - e, 1)
            for s, e in zip(self.successes, self.errors)
        )


def _best_subset(ev: SubsetEvaluator, d: int) -> IndexSubset:
    """Exhaustive argmax over d-subsets; ties to the lexicographically first."""
    best = None
    best_m = -1
    for combo in combinations(range(1, ev.p + 1), d):
        m = ev.matches(IndexSubset(combo))
        if m > best_m:
            best, best_m = combo, m
    return IndexSubset(best)


def consistency_probe(design: str = "case1", n_grid=(50, 100, 400),
                      reps: int = 200, strategy: str = "mean", d: int = 2,
                      reference=None, k: int = 3, sigma: float = 0.2,
                      scale_as_variance: bool = False, seed: int = 0,
                      r_schedule=None, restarts: int = 10,
                      threads: int = 1) -> ProbeResult:
    """Fraction of replications whose best d-subset is an expected one.

    ``reference`` is a collection of acceptable index tuples (1-based);
    for the case1 design at d=2 it defaults to {(1, 2)}, the informative
    pair, since the third coordinate is pure noise by construction.
    ``r_schedule`` maps n to the neighbor count for conditional
    strategies and defaults to :func:`default_neighbor_schedule`.
    """
    n_grid = tuple(int(n) for n in n_grid)
    reps = int(reps)
    conditional, _ = parse_strategy(strategy)
    if r_schedule is None:
        r_schedule = default_neighbor_schedule
    if reference is None:
        if design == "case1" and d == 2:
            reference = ((1, 2),)
        else:
            raise ValueError(
                "pass reference subsets explicitly for this design/d combination"
            )
    reference = tuple(tuple(sorted(int(i) for i in ref)) for ref in reference)

    def one(n_index: int, i: int) -> bool | None:
        n = n_grid[n_index]
        data, _ = generate(design, n=n, sigma=sigma,
                           scale_as_variance=scale_as_variance,
                           seed=rng.substream(seed, rng.DATA, n_index, i))
        try:
            part = KMeansPartition(
                n_clusters=k, n_restarts=restarts,
                random_state=rng.subseed(seed, rng.REPLICATIONS, n_index, i),
            ).fit(data)
            r = r_schedule(n) if conditional else None
            ev = SubsetEvaluator(data, part, part.labels_, strategy, r)
            return _best_subset(ev, d).indices in reference
        except ClusterSiftError:
            return None

    successes = []
    errors = []
    for n_index in range(len(n_grid)):
        if int(threads) > 1:
            with ThreadPoolExecutor(max_workers=int(threads)) as pool:
                hits = list(pool.map(lambda i: one(n_index, i), range(reps)))
        else:
            hits = [one(n_index, i) for i in range(reps)]
        successes.append(sum(1 for h in hits if h))
        errors.append(sum(1 for h in hits if h is None))
    return ProbeResult(design, strategy, int(d), n_grid, tuple(successes),
                       tuple(errors), reps, int(seed), reference)
