"""Lloyd k-means with a frozen, deterministic assignment rule.

The assignment rule is part of the downstream contract: nearest center in
squared Euclidean distance, ties to the lowest cluster label. Distances are
computed by direct differencing rather than the usual Gram expansion
``|x|^2 - 2 x.c + |c|^2``, because the expansion reorders floating-point
rounding and can flip exact ties that the blinding objective relies on.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from . import rng
from .exceptions import DegenerateDataError, DimensionMismatchError, KTooLargeError
from .validation import check_matrix, check_vector


def squared_distances(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, shape (n_rows, n_centers)."""
    diff = X[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def assign_labels(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Nearest-center label per row; ties break to the lowest label."""
    return squared_distances(X, centers).argmin(axis=1)


def _kmeans_plus_plus_init(X, k, gen):
    """Sample k starting centers with distance-squared weighting."""
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    centers[0] = X[int(gen.integers(n))]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(gen.choice(n, p=d2 / total))
        else:
            # all remaining mass sits on already-chosen points
            idx = int(gen.integers(n))
        centers[j] = X[idx]
        d2 = np.minimum(d2, ((X - centers[j]) ** 2).sum(axis=1))
    return centers


def _update_centers(X, labels, k, dist_sq):
    """Means of the assigned points; empty clusters take the farthest point.

    ``dist_sq`` holds distances to the centers the labels came from, so the
    farthest-point repair is judged against the current assignment.
    """
    n, p = X.shape
    centers = np.empty((k, p), dtype=np.float64)
    counts = np.bincount(labels, minlength=k)
    for j in range(k):
        if counts[j]:
            centers[j] = X[labels == j].mean(axis=0)
    empties = np.flatnonzero(counts == 0)
    if empties.size:
        dist_to_own = dist_sq[np.arange(n), labels].copy()
        for j in empties:
            far = int(dist_to_own.argmax())
            centers[j] = X[far]
            dist_to_own[far] = -1.0
    return centers


def _lloyd(X, centers, max_iter, tol):
    """Iterate assignment and mean updates from the given starting centers.

    Stops at a label fixed point (the usual case), a center shift below
    ``tol``, or ``max_iter`` rounds. On every exit path the labels are the
    exact nearest-center assignment for the returned centers. Returns
    ``(centers, labels, inertia, history)`` where ``history`` records the
    inertia at each assignment step and never increases.
    """
    n = X.shape[0]
    k = centers.shape[0]
    rows = np.arange(n)
    labels = None
    history = []
    at_fixed_point = False
    for _ in range(max_iter):
        dist_sq = squared_distances(X, centers)
        new_labels = dist_sq.argmin(axis=1)
        history.append(float(dist_sq[rows, new_labels].sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            at_fixed_point = True
            break
        labels = new_labels
        new_centers = _update_centers(X, labels, k, dist_sq)
        shift = float(np.sqrt(((new_centers - centers) ** 2).sum()))
        centers = new_centers
        if shift < tol:
            break
    if not at_fixed_point:
        # centers moved after the last assignment; refresh so labels match
        dist_sq = squared_distances(X, centers)
        labels = dist_sq.argmin(axis=1)
        history.append(float(dist_sq[rows, labels].sum()))
    return centers, labels, history[-1], history


class KMeansPartition(ClusterMixin, BaseEstimator):
    """K-means partition of R^p whose centers stay frozen after fit.

    Runs ``n_restarts`` independent k-means++ seeded Lloyd descents and
    keeps the lowest-inertia one. Restart streams derive from
    ``random_state`` alone, so a fit is reproducible bit for bit.

    Attributes set by :meth:`fit`:
        cluster_centers_: (k, p) array, read-only.
        labels_: (n,) 0-based allocation of the training rows.
        cluster_sizes_: (k,) occupancy counts.
        inertia_: sum of squared distances to assigned centers.
        inertia_history_: per-assignment inertia of the winning restart;
            non-increasing by construction.
        n_iter_: number of assignment steps of the winning restart.
    """

    def __init__(self, n_clusters=3, n_restarts=10, max_iter=300, tol=1e-9,
                 random_state=0):
        self.n_clusters = n_clusters
        self.n_restarts = n_restarts
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_matrix(X)
        n, p = X.shape
        k = int(self.n_clusters)
        if k < 1:
            raise ValueError(f"n_clusters must be at least 1, got {k}")
        if int(self.n_restarts) < 1:
            raise ValueError("n_restarts must be at least 1")
        if k > n:
            raise KTooLargeError(f"cannot split {n} observations into {k} clusters")
        if np.unique(X, axis=0).shape[0] < k:
            raise DegenerateDataError(
                f"need at least {k} distinct rows for {k} clusters"
            )
        best = None
        for i in range(int(self.n_restarts)):
            gen = rng.substream(int(self.random_state), rng.KMEANS_RESTARTS, i)
            start = _kmeans_plus_plus_init(X, k, gen)
            centers, labels, inertia, history = _lloyd(
                X, start, int(self.max_iter), float(self.tol)
            )
            if best is None or inertia < best[2]:
                best = (centers, labels, inertia, history)
        centers, labels, inertia, history = best
        centers.flags.writeable = False
        labels.flags.writeable = False
        self.cluster_centers_ = centers
        self.labels_ = labels
        self.cluster_sizes_ = np.bincount(labels, minlength=k)
        self.inertia_ = inertia
        self.inertia_history_ = tuple(history)
        self.n_iter_ = len(history)
        self.n_features_in_ = p
        return self

    @classmethod
    def from_centers(cls, centers) -> "KMeansPartition":
        """Wrap precomputed centers as a fitted partition (no training data)."""
        centers = check_matrix(centers)
        est = cls(n_clusters=centers.shape[0])
        est.cluster_centers_ = centers
        est.n_features_in_ = centers.shape[1]
        est.inertia_ = float("nan")
        return est

    def predict(self, X):
        """0-based nearest-center labels for the rows of ``X``."""
        check_is_fitted(self, "cluster_centers_")
        X = check_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise DimensionMismatchError(
                f"model expects {self.n_features_in_} variables, got {X.shape[1]}"
            )
        return assign_labels(X, self.cluster_centers_)

    def assign(self, point) -> int:
        """Cluster label (0-based) of one observation."""
        check_is_fitted(self, "cluster_centers_")
        v = check_vector(point, self.n_features_in_)
        return int(assign_labels(v[None, :], self.cluster_centers_)[0])
