"""Scikit-learn style front door: fit a partition, pick variables, reduce X."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted

from .kmeans import KMeansPartition
from .search import SearchConfig, run_search
from .validation import check_matrix


class ClusterVariableSelector(SelectorMixin, BaseEstimator):
    """Select the fewest variables that preserve a k-means partition.

    ``fit`` clusters X once, freezes the centers and allocations, then
    searches for the smallest variable subsets whose blinded copies of X
    keep at least ``threshold`` of the rows in their original clusters.
    ``transform`` keeps the columns of the first (lexicographically
    smallest) minimal subset; all tied minimal subsets stay available on
    ``subsets_``.

    Parameters mirror :class:`SearchConfig` plus the k-means knobs; see
    the package README for the strategy names.
    """

    def __init__(self, n_clusters=3, threshold=0.9, strategy="mean", r=None,
                 mode="exhaustive", permutations=100, max_subset_size=None,
                 n_restarts=10, max_iter=300, tol=1e-9, random_state=0,
                 threads=1):
        self.n_clusters = n_clusters
        self.threshold = threshold
        self.strategy = strategy
        self.r = r
        self.mode = mode
        self.permutations = permutations
        self.max_subset_size = max_subset_size
        self.n_restarts = n_restarts
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state
        self.threads = threads

    def fit(self, X, y=None):
        X = check_matrix(X)
        config = SearchConfig(
            threshold=self.threshold,
            strategy=self.strategy,
            r=self.r,
            mode=self.mode,
            permutations=self.permutations,
            seed=int(self.random_state),
            max_subset_size=self.max_subset_size,
        )
        self.partition_ = KMeansPartition(
            n_clusters=self.n_clusters,
            n_restarts=self.n_restarts,
            max_iter=self.max_iter,
            tol=self.tol,
            random_state=self.random_state,
        ).fit(X)
        report = run_search(
            X, self.partition_, self.partition_.labels_, config,
            threads=int(self.threads),
        )
        self.report_ = report
        self.subsets_ = tuple(s.subset for s in report.solutions)
        self.minimal_cardinality_ = report.minimal_cardinality
        mask = np.zeros(X.shape[1], dtype=bool)
        mask[self.subsets_[0].cols()] = True
        mask.flags.writeable = False
        self.support_ = mask
        self.n_features_in_ = X.shape[1]
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "support_")
        return self.support_

    def predict(self, X):
        """Cluster labels from the frozen partition (a convenience passthrough)."""
        check_is_fitted(self, "partition_")
        return self.partition_.predict(X)
