"""Synthetic designs and the Monte Carlo driver for selection studies.

Three designs. ``case1``: two informative coordinates drawn from a
three-component Gaussian mixture plus one independent noise coordinate.
``case2``: the same two informative coordinates, with the third an exact
linear combination of them (so it separates clusters as well as they do).
``tsv05``: fifteen observations in four univariate location groups with
very different spreads, optionally padded with standard normal noise
columns; the known grouping is (4, 3, 6, 2).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .exceptions import ClusterSiftError
from .kmeans import KMeansPartition
from .objective import SubsetEvaluator, exact_threshold
from .search import SearchConfig, exhaustive_search

DESIGNS = ("case1", "case2", "tsv05")

# the mixture behind case1 and case2
MIXTURE_WEIGHTS = (0.35, 0.35, 0.30)
X1_MEANS = (0.0, 0.1, 0.9)
X2_MEANS = (0.0, 0.9, 0.1)
COMPONENT_SCALE = 0.2

# tsv05 components: (rows, mean, variance); note variance, not sd
TSV05_COMPONENTS = ((4, 5.0, 1.5), (3, 2.0, 0.1), (6, -3.0, 0.5), (2, -6.0, 2.0))
TSV05_N = 15


@dataclass(frozen=True)
class MixtureSpec:
    """Gaussian mixture with diagonal covariance, one (mean, sd) per coordinate."""

    weights: tuple[float, ...]
    means: tuple[tuple[float, ...], ...]
    sds: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if len(self.means) != len(self.weights) or len(self.sds) != len(self.weights):
            raise ValueError("weights, means, and sds must align component-wise")
        widths = {len(m) for m in self.means} | {len(s) for s in self.sds}
        if len(widths) != 1:
            raise ValueError("all components must share one dimension")
        if any(w <= 0 for w in self.weights):
            raise ValueError("component weights must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {sum(self.weights)}")
        if any(s <= 0 for row in self.sds for s in row):
            raise ValueError("standard deviations must be positive")

    @property
    def p(self) -> int:
        return len(self.means[0])

    def sample(self, n: int, gen: np.random.Generator):
        """Draw n rows; returns (values, components) with 1-based components."""
        comps = gen.choice(len(self.weights), size=int(n), p=np.asarray(self.weights))
        means = np.asarray(self.means)[comps]
        sds = np.asarray(self.sds)[comps]
        values = means + sds * gen.standard_normal((int(n), self.p))
        return values, comps + 1


def _scale_to_sd(scale: float, scale_as_variance: bool) -> float:
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return math.sqrt(scale) if scale_as_variance else float(scale)


def case1_spec(sigma: float = 0.2, scale_as_variance: bool = False) -> MixtureSpec:
    """Mixture for case1; ``sigma`` scales the independent third coordinate."""
    s = _scale_to_sd(COMPONENT_SCALE, scale_as_variance)
    s3 = _scale_to_sd(sigma, scale_as_variance)
    means = tuple((X1_MEANS[c], X2_MEANS[c], 0.0) for c in range(3))
    return MixtureSpec(MIXTURE_WEIGHTS, means, ((s, s, s3),) * 3)


def gen_case1(n: int, sigma: float = 0.2, seed=0, scale_as_variance: bool = False):
    """Sample case1: informative (X1, X2), independent noise X3 ~ N(0, sigma)."""
    gen = rng.as_generator(seed)
    return case1_spec(sigma, scale_as_variance).sample(n, gen)


def gen_case2(n: int, seed=0, scale_as_variance: bool = False):
    """Sample case2: informative (X1, X2), X3 = (X1 + X2) / sqrt(2) exactly."""
    gen = rng.as_generator(seed)
    s = _scale_to_sd(COMPONENT_SCALE, scale_as_variance)
    means = tuple((X1_MEANS[c], X2_MEANS[c]) for c in range(3))
    spec = MixtureSpec(MIXTURE_WEIGHTS, means, ((s, s),) * 3)
    base, comps = spec.sample(n, gen)
    third = (base[:, 0] + base[:, 1]) / np.sqrt(2.0)
    return np.column_stack([base, third]), comps


def gen_tsv05(seed=0, dims: int = 3, extra_noise_dims: int = 0):
    """Sample the fifteen-point four-group design.

    Every one of the ``dims`` signal columns repeats the same component
    structure independently; ``extra_noise_dims`` appends N(0, 1) columns
    carrying no group information. Labels come back 1-based in row order
    (1 x4, 2 x3, 3 x6, 4 x2).
    """
    dims = int(dims)
    extra = int(extra_noise_dims)
    if dims < 1:
        raise ValueError("dims must be at least 1")
    if extra < 0:
        raise ValueError("extra_noise_dims cannot be negative")
    gen = rng.as_generator(seed)
    sizes = np.array([c[0] for c in TSV05_COMPONENTS])
    mu = np.array([c[1] for c in TSV05_COMPONENTS])
    sd = np.sqrt([c[2] for c in TSV05_COMPONENTS])
    comp_of_row = np.repeat(np.arange(len(sizes)), sizes)
    signal = mu[comp_of_row, None] + sd[comp_of_row, None] * gen.standard_normal(
        (TSV05_N, dims)
    )
    if extra:
        noise = gen.standard_normal((TSV05_N, extra))
        values = np.hstack([signal, noise])
    else:
        values = signal
    return values, comp_of_row + 1


def generate(design: str, n: int = 100, seed=0, sigma: float = 0.2,
             scale_as_variance: bool = False, dims: int = 3,
             extra_noise_dims: int = 0):
    """Dispatch to the named design's generator; returns (values, components)."""
    if design == "case1":
        return gen_case1(n, sigma, seed, scale_as_variance)
    if design == "case2":
        return gen_case2(n, seed, scale_as_variance)
    if design == "tsv05":
        return gen_tsv05(seed, dims, extra_noise_dims)
    raise ValueError(f"design must be one of {DESIGNS}, got {design!r}")


DEFAULT_THRESHOLDS = (Fraction(9, 10), Fraction(19, 20), Fraction(1))


@dataclass
class MonteCarloResult:
    """Counts of the minimal cardinality found per threshold.

    ``cardinality_counts[t, d-1]`` says how many replications needed
    exactly d variables at threshold t; rows sum to the replication count,
    because every uncapped exhaustive search finds some cardinality.
    """

    design: str
    thresholds: tuple[Fraction, ...]
    cardinality_counts: np.ndarray
    reps: int
    seed: int
    p: int
    strategy: str
    errors: int = 0

    @property
    def proportions(self) -> np.ndarray:
        return self.cardinality_counts / max(self.reps - self.errors, 1)

    def proportion(self, threshold, d: int) -> float:
        t = self.thresholds.index(exact_threshold(threshold))
        return float(self.proportions[t, d - 1])


def monte_carlo(design: str, reps: int, k: int = 3,
                thresholds=DEFAULT_THRESHOLDS, strategy: str = "mean",
                r: int | None = None, seed: int = 0, n: int = 100,
                sigma: float = 0.2, scale_as_variance: bool = False,
                dims: int = 3, extra_noise_dims: int = 0, restarts: int = 10,
                threads: int = 1) -> MonteCarloResult:
    """Replicate generate -> cluster -> exhaustively select, tallying results.

    Each replication draws a fresh dataset from ``design``, fits k-means
    (``restarts`` restarts), and runs the exhaustive search once per
    threshold, reusing one evaluation cache across thresholds. Replication
    streams are derived from (seed, index), so any thread count gives the
    same tallies. Replications where k-means cannot run (degenerate draws)
    are counted in ``errors`` rather than aborting the study.
    """
    reps = int(reps)
    if reps < 1:
        raise ValueError("reps must be at least 1")
    fracs = tuple(exact_threshold(t) for t in thresholds)

    def one(i: int):
        data, _ = generate(
            design, n=n, seed=rng.substream(seed, rng.DATA, i), sigma=sigma,
            scale_as_variance=scale_as_variance, dims=dims,
            extra_noise_dims=extra_noise_dims,
        )
        try:
            part = KMeansPartition(
                n_clusters=k, n_restarts=restarts,
                random_state=rng.subseed(seed, rng.REPLICATIONS, i),
            ).fit(data)
            ev = SubsetEvaluator(data, part, part.labels_, strategy, r)
            out = []
            for t in fracs:
                report = exhaustive_search(
                    data, part, part.labels_,
                    SearchConfig(threshold=t, strategy=strategy, r=r),
                    evaluator=ev,
                )
                out.append(report.minimal_cardinality)
            return out
        except ClusterSiftError:
            return None

    if int(threads) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            results = list(pool.map(one, range(reps)))
    else:
        results = [one(i) for i in range(reps)]

    p = generate(design, n=n, seed=rng.substream(seed, rng.DATA, 0), sigma=sigma,
                 scale_as_variance=scale_as_variance, dims=dims,
                 extra_noise_dims=extra_noise_dims)[0].shape[1]
    counts = np.zeros((len(fracs), p), dtype=np.int64)
    errors = 0
    for res in results:
        if res is None:
            errors += 1
            continue
        for t_index, d in enumerate(res):
            counts[t_index, d - 1] += 1
    return MonteCarloResult(design, fracs, counts, reps, int(seed), p,
                            strategy, errors)
