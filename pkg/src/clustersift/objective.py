"""The empirical match objective.

For a fitted partition and a candidate subset, blind the data on that
subset and count how many rows the frozen centers send back to their
original cluster. The fraction of survivors is the objective h(I); it is
always an exact multiple of 1/n, so thresholds are compared in integer
arithmetic (at least ceil(t * n) matches) rather than floating point.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction

import numpy as np

from .blinding import blind_conditional, blind_marginal
from .exceptions import DimensionMismatchError, NeighborCountWarning, RTooLargeError
from .subsets import IndexSubset
from .validation import check_labels, check_matrix

# strategy name -> (conditional?, location)
STRATEGIES = {
    "mean": (False, "mean"),
    "median": (False, "median"),
    "cond-mean": (True, "mean"),
    "cond-median": (True, "median"),
}


def parse_strategy(strategy: str) -> tuple[bool, str]:
    """Split a strategy name into (conditional?, location)."""
    try:
        return STRATEGIES[strategy]
    except KeyError:
        raise ValueError(
            f"strategy must be one of {tuple(STRATEGIES)}, got {strategy!r}"
        ) from None


def exact_threshold(threshold) -> Fraction:
    """Exact rational threshold in (0, 1].

    Floats are read as the decimal literal they print as, so 0.95 means
    19/20 rather than its binary approximation (0.95 * 100 in binary falls
    just short of 95, which would off-by-one the required match count).
    """
    if isinstance(threshold, Fraction):
        t = threshold
    elif isinstance(threshold, bool):
        raise TypeError("threshold must be a number, not a bool")
    elif isinstance(threshold, int):
        t = Fraction(threshold)
    elif isinstance(threshold, float):
        t = Fraction(str(threshold))
    elif isinstance(threshold, str):
        t = Fraction(threshold)
    else:
        raise TypeError(f"cannot read a threshold from {type(threshold).__name__}")
    if not 0 < t <= 1:
        raise ValueError(f"threshold must lie in (0, 1], got {t}")
    return t


def required_matches(threshold, n: int) -> int:
    """Smallest match count m with m/n >= threshold."""
    return math.ceil(exact_threshold(threshold) * int(n))


def match_count(model, original_labels, blinded) -> int:
    """Number of rows the model sends back to their original cluster."""
    blinded = check_matrix(blinded)
    labels = check_labels(original_labels, blinded.shape[0])
    return int((model.predict(blinded) == labels).sum())


def efficiency(model, original_labels, blinded) -> float:
    """Fraction of rows keeping their allocation; an exact multiple of 1/n."""
    n = np.asarray(original_labels).shape[0]
    return match_count(model, original_labels, blinded) / n


class SubsetEvaluator:
    """Caches objective evaluations for one (data, model, labels) session.

    The same subsets come up again and again across thresholds and search
    restarts, and each evaluation costs a blind plus a prediction, so every
    distinct subset is computed once. The cache tolerates concurrent use:
    racing writers store identical values.
    """

    def __init__(self, data, model, labels, strategy: str = "mean",
                 r: int | None = None):
        self.data = check_matrix(data)
        self.n, self.p = self.data.shape
        if getattr(model, "n_features_in_", self.p) != self.p:
            raise DimensionMismatchError(
                f"model expects {model.n_features_in_} variables, data has {self.p}"
            )
        self.model = model
        self.labels = check_labels(labels, self.n)
        self.conditional, self.location = parse_strategy(strategy)
        self.strategy = strategy
        if self.conditional:
            if r is None:
                raise ValueError("conditional strategies need a neighbor count r")
            r = int(r)
            if r < 1:
                raise ValueError(f"r must be at least 1, got {r}")
            if r > self.n:
                raise RTooLargeError(f"r={r} exceeds the {self.n} available rows")
            smallest = int(np.bincount(self.labels).min())
            if r >= smallest:
                warnings.warn(
                    f"r={r} is not below the smallest cluster size {smallest}; "
                    "local averages may mix clusters",
                    NeighborCountWarning,
                    stacklevel=2,
                )
        self.r = r if self.conditional else None
        self._cache: dict[tuple[int, ...], int] = {}

    def canonical(self, subset) -> IndexSubset:
        if isinstance(subset, IndexSubset):
            return IndexSubset.of(subset.indices, self.p)
        return IndexSubset.of(subset, self.p)

    def blind(self, subset) -> np.ndarray:
        """The blinded matrix this evaluator scores for ``subset``."""
        subset = self.canonical(subset)
        if self.conditional:
            return blind_conditional(self.data, subset, self.r, self.location)
        return blind_marginal(self.data, subset, self.location)

    def matches(self, subset) -> int:
        subset = self.canonical(subset)
        key = subset.indices
        got = self._cache.get(key)
        if got is None:
            got = int((self.model.predict(self.blind(subset)) == self.labels).sum())
            self._cache[key] = got
        return got

    def efficiency(self, subset) -> float:
        return self.matches(subset) / self.n

    @property
    def distinct_evaluations(self) -> int:
        return len(self._cache)

    def evaluated_subsets(self) -> list[tuple[tuple[int, ...], int]]:
        """Sorted (indices, matches) pairs for everything scored so far."""
        return sorted(self._cache.items())


def evaluate_subset(data, model, labels, subset, strategy: str = "mean",
                    r: int | None = None) -> float:
    """One-off objective value; build a :class:`SubsetEvaluator` to batch many."""
    return SubsetEvaluator(data, model, labels, strategy, r).efficiency(subset)
