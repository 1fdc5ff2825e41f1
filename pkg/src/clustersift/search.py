"""Minimal-subset searches over the match objective.

Two modes. Exhaustive search enumerates cardinalities in ascending order
and is canonical: its answer does not depend on any ordering or seed.
Forward-backward search grows a subset greedily from the most influential
variable, sweeps single-variable replacements after every growth step,
prunes backwards, and restarts the whole pass over random permutations of
the variable order to escape ties and local plateaus; only solutions of
globally minimal cardinality survive.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import rng
from .exceptions import ThresholdUnreachableError, TooManySubsetsError
from .objective import (
    STRATEGIES,
    SubsetEvaluator,
    exact_threshold,
    required_matches,
)
from .subsets import IndexSubset

MODES = ("exhaustive", "forward-backward")

# refuse exhaustive enumeration beyond this many candidate subsets
EXHAUSTIVE_BUDGET = 10_000_000


@dataclass(frozen=True)
class SearchConfig:
    """Parameters shared by both search modes.

    ``threshold`` accepts a float, a decimal string, or a Fraction and is
    honored exactly. ``permutations`` counts forward-backward restarts; the
    first restart always uses the identity order, so a single-permutation
    run is fully deterministic regardless of seed.
    """

    threshold: object = 0.9
    strategy: str = "mean"
    r: int | None = None
    mode: str = "exhaustive"
    permutations: int = 100
    seed: int = 0
    max_subset_size: int | None = None

    def __post_init__(self):
        exact_threshold(self.threshold)
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {tuple(STRATEGIES)}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if int(self.permutations) < 1:
            raise ValueError("permutations must be at least 1")
        if self.max_subset_size is not None and int(self.max_subset_size) < 1:
            raise ValueError("max_subset_size must be at least 1 when given")


@dataclass(frozen=True)
class Solution:
    """One qualifying subset with its exact match count."""

    subset: IndexSubset
    matches: int
    n: int

    @property
    def efficiency(self) -> float:
        return self.matches / self.n


@dataclass
class SelectionReport:
    """Outcome of one search at one threshold."""

    threshold: Fraction
    mode: str
    minimal_cardinality: int
    solutions: list[Solution]
    seed: int | None
    distinct_evaluations: int
    trace: list = field(default_factory=list, repr=False, compare=False)


def _resolve_evaluator(data, model, labels, config, evaluator):
    if evaluator is not None:
        if (evaluator.strategy, evaluator.r) != (config.strategy, config.r if
                evaluator.conditional else None):
            raise ValueError("evaluator strategy/r disagree with the config")
        return evaluator
    return SubsetEvaluator(data, model, labels, config.strategy, config.r)


def exhaustive_search(data, model, labels, config: SearchConfig,
                      evaluator: SubsetEvaluator | None = None) -> SelectionReport:
    """All smallest-cardinality subsets meeting the threshold.

    Levels are scanned in ascending cardinality and the scan stops at the
    first level containing a qualifying subset; every qualifying subset of
    that level is reported, sorted lexicographically.

    Raises TooManySubsetsError before evaluating anything if the total
    enumeration would exceed the budget, and ThresholdUnreachableError if a
    ``max_subset_size`` cap exhausts without a hit (without a cap the full
    set always qualifies, since blinding nothing changes nothing).
    """
    ev = _resolve_evaluator(data, model, labels, config, evaluator)
    n, p = ev.n, ev.p
    threshold = exact_threshold(config.threshold)
    need = required_matches(threshold, n)
    cap = min(config.max_subset_size or p, p)
    total = sum(math.comb(p, d) for d in range(1, cap + 1))
    if total > EXHAUSTIVE_BUDGET:
        raise TooManySubsetsError(
            f"{total} subsets to enumerate exceeds the budget of {EXHAUSTIVE_BUDGET}; "
            "use forward-backward mode or cap max_subset_size"
        )
    for d in range(1, cap + 1):
        hits = []
        for combo in combinations(range(1, p + 1), d):
            subset = IndexSubset(combo)
            m = ev.matches(subset)
            if m >= need:
                hits.append(Solution(subset, m, n))
        if hits:
            hits.sort(key=lambda s: s.subset.indices)
            return SelectionReport(
                threshold, "exhaustive", d, hits, None,
                ev.distinct_evaluations, ev.evaluated_subsets(),
            )
    raise ThresholdUnreachableError(
        f"no subset of at most {cap} variables reaches threshold {threshold}"
    )


def _influential(ev: SubsetEvaluator, order) -> int:
    """The variable whose solo blinding hurts the objective most.

    Judged by leaving one variable out of the full set at a time; ties go
    to whichever variable comes first in ``order``.
    """
    everything = set(range(1, ev.p + 1))
    best_v = None
    best_m = None
    for v in order:
        m = ev.matches(IndexSubset.of(everything - {v}, ev.p))
        if best_m is None or m < best_m:
            best_v, best_m = v, m
    return best_v


def influential_variable(data, model, labels, strategy: str = "mean",
                         r: int | None = None,
                         evaluator: SubsetEvaluator | None = None) -> int:
    """1-based index of the most influential variable; ties to the lowest."""
    if evaluator is None:
        evaluator = SubsetEvaluator(data, model, labels, strategy, r)
    return _influential(evaluator, range(1, evaluator.p + 1))


def _replacement_sweeps(ev, chosen, current, order):
    """Best single swaps, repeated until no swap strictly improves.

    A swap removes one member and appends the newcomer at the end, so the
    backward pass later revisits newcomers first.
    """
    improved = True
    while improved:
        improved = False
        for s in list(chosen):
            if s not in chosen:
                continue
            base = [v for v in chosen if v != s]
            best_v = None
            best_m = current
            for v in order:
                if v in chosen:
                    continue
                m = ev.matches(IndexSubset.of(base + [v], ev.p))
                if m > best_m:
                    best_m, best_v = m, v
            if best_v is not None:
                chosen.remove(s)
                chosen.append(best_v)
                current = best_m
                improved = True
    return current


def _forward_backward_pass(ev, order, need, cap):
    """One full pass in one variable order; None when the cap defeats it."""
    # part 1: start from the single most influential variable
    chosen = [_influential(ev, order)]
    current = ev.matches(IndexSubset.of(chosen, ev.p))
    # part 2: grow by the best addition, then sweep replacements
    while current < need and len(chosen) < cap:
        best_v = None
        best_m = None
        for v in order:
            if v in chosen:
                continue
            m = ev.matches(IndexSubset.of(chosen + [v], ev.p))
            if best_m is None or m > best_m:
                best_m, best_v = m, v
        chosen.append(best_v)
        current = _replacement_sweeps(ev, chosen, best_m, order)
    if current < need:
        return None
    # part 3: drop members newest-first while the threshold still holds
    changed = True
    while changed:
        changed = False
        for s in reversed(list(chosen)):
            if len(chosen) == 1:
                break
            m = ev.matches(IndexSubset.of([v for v in chosen if v != s], ev.p))
            if m >= need:
                chosen.remove(s)
                current = m
                changed = True
    return IndexSubset.of(chosen, ev.p), current


def forward_backward_search(data, model, labels, config: SearchConfig,
                            evaluator: SubsetEvaluator | None = None,
                            threads: int = 1) -> SelectionReport:
    """Greedy search restarted over variable-order permutations.

    The first pass uses the identity order; each further pass reruns the
    whole procedure with all its tie-breaks following a random permutation
    drawn from ``config.seed``. Only subsets of the smallest cardinality
    seen across passes are returned (deduplicated, sorted). The result is
    identical for any thread count.
    """
    ev = _resolve_evaluator(data, model, labels, config, evaluator)
    n, p = ev.n, ev.p
    threshold = exact_threshold(config.threshold)
    need = required_matches(threshold, n)
    cap = min(config.max_subset_size or p, p)
    orders = [tuple(range(1, p + 1))]
    for i in range(1, int(config.permutations)):
        gen = rng.substream(int(config.seed), rng.SEARCH_PERMUTATIONS, i)
        orders.append(tuple(int(v) for v in gen.permutation(np.arange(1, p + 1))))

    def one(order):
        return _forward_backward_pass(ev, order, need, cap)

    if int(threads) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            outcomes = list(pool.map(one, orders))
    else:
        outcomes = [one(order) for order in orders]

    found: dict[tuple[int, ...], int] = {}
    for out in outcomes:
        if out is not None:
            found[out[0].indices] = out[1]
    if not found:
        raise ThresholdUnreachableError(
            f"no pass reached threshold {threshold} within {cap} variables"
        )
    d_min = min(len(ix) for ix in found)
    sols = [Solution(IndexSubset(ix), m, n)
            for ix, m in sorted(found.items()) if len(ix) == d_min]
    return SelectionReport(
        threshold, "forward-backward", d_min, sols, int(config.seed),
        ev.distinct_evaluations, ev.evaluated_subsets(),
    )


def run_search(data, model, labels, config: SearchConfig,
               evaluator: SubsetEvaluator | None = None,
               threads: int = 1) -> SelectionReport:
    """Dispatch on ``config.mode``."""
    if config.mode == "exhaustive":
        return exhaustive_search(data, model, labels, config, evaluator)
    return forward_backward_search(data, model, labels, config, evaluator, threads)
