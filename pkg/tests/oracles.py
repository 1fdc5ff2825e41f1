"""Independent reference implementations used to cross-check the package.

Everything here is written from the definitions with plain loops and exact
summation, deliberately sharing no code with the package. Values asserted
against these oracles hold on generic data; knife-edge assignment ties are
exercised only through hand-derived fixtures.
"""

from __future__ import annotations

import math
from itertools import combinations, product

import numpy as np


def oracle_assign(point, centers) -> int:
    """Nearest center by squared distance, ties to the lowest label."""
    best, best_d = 0, None
    for k, center in enumerate(centers):
        d = math.fsum((float(x) - float(c)) ** 2 for x, c in zip(point, center))
        if best_d is None or d < best_d:
            best, best_d = k, d
    return best


def oracle_labels(data, centers):
    return [oracle_assign(row, centers) for row in data]


def _column(data, rows, col):
    return [float(data[i][col]) for i in rows]


def _location(values, how):
    if how == "mean":
        return math.fsum(values) / len(values)
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2.0


def oracle_blind_marginal(data, subset_1based, how="mean"):
    """Replace non-subset columns by their column location."""
    data = np.asarray(data, dtype=float)
    n, p = data.shape
    keep = set(subset_1based)
    out = data.copy()
    for col in range(p):
        if col + 1 in keep:
            continue
        loc = _location(_column(data, range(n), col), how)
        for i in range(n):
            out[i, col] = loc
    return out


def oracle_neighbors(data, subset_1based, row, r):
    """0-based rows of the r nearest neighbors in the subset coordinates.

    The query row comes first, then (distance, row index) ascending.
    """
    data = np.asarray(data, dtype=float)
    cols = [i - 1 for i in sorted(subset_1based)]
    dists = []
    for m in range(data.shape[0]):
        d = math.fsum((data[row, c] - data[m, c]) ** 2 for c in cols)
        dists.append((m != row, d, m))
    dists.sort()
    return sorted(m for _, _, m in dists[:r])


def oracle_blind_conditional(data, subset_1based, r, how="mean"):
    data = np.asarray(data, dtype=float)
    n, p = data.shape
    keep = set(subset_1based)
    if not keep:
        return oracle_blind_marginal(data, subset_1based, how)
    out = data.copy()
    for i in range(n):
        rows = oracle_neighbors(data, subset_1based, i, r)
        for col in range(p):
            if col + 1 in keep:
                continue
            out[i, col] = _location(_column(data, rows, col), how)
    return out


def oracle_h(data, centers, labels, subset_1based, how="mean",
             conditional=False, r=None):
    """The match fraction, recomputed from scratch."""
    if conditional:
        blinded = oracle_blind_conditional(data, subset_1based, r, how)
    else:
        blinded = oracle_blind_marginal(data, subset_1based, how)
    hits = sum(
        1 for j, row in enumerate(blinded)
        if oracle_assign(row, centers) == labels[j]
    )
    return hits, len(labels)


def oracle_best_partition(data, k):
    """Globally optimal k-means inertia by enumerating all assignments.

    Only feasible for tiny n; every surjective labeling is scored with
    centers at the exact cluster means.
    """
    data = np.asarray(data, dtype=float)
    n, p = data.shape
    best = None
    for labeling in product(range(k), repeat=n):
        if len(set(labeling)) != k:
            continue
        wss = 0.0
        for g in range(k):
            rows = [i for i in range(n) if labeling[i] == g]
            for c in range(p):
                col = [data[i, c] for i in rows]
                center = math.fsum(col) / len(col)
                wss += math.fsum((x - center) ** 2 for x in col)
        if best is None or wss < best[0]:
            best = (wss, labeling)
    return best


def oracle_min_cardinality(data, centers, labels, threshold_num,
                           threshold_den, how="mean", conditional=False,
                           r=None):
    """Smallest d whose best subset attains threshold, plus the attaining sets."""
    n, p = np.asarray(data).shape
    need = -(-threshold_num * n // threshold_den)  # ceil in integers
    for d in range(1, p + 1):
        winners = []
        for combo in combinations(range(1, p + 1), d):
            hits, _ = oracle_h(data, centers, labels, combo, how, conditional, r)
            if hits >= need:
                winners.append(combo)
        if winners:
            return d, winners
    return None, []
