"""Blinded copies of a data matrix.

Blinding replaces every column outside a retained subset by a location
value while leaving retained columns untouched, byte for byte. Marginal
blinding uses one location per column (the column mean or median);
conditional blinding uses a local location computed over each row's r
nearest neighbors in the retained coordinates, so the replacement can vary
row by row.

Two exact identities hold by construction and are load-bearing for the
test suite: conditional blinding with r equal to the number of rows is
bit-identical to marginal blinding, and marginal blinding is idempotent.
Both flavors therefore extract value blocks through the same helper and
constant columns short-circuit to their exact value (a numpy mean of a
constant column is not otherwise exact).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import NeighborCountWarning, RTooLargeError
from .subsets import IndexSubset
from .validation import check_matrix

LOCATIONS = ("mean", "median")


def _check_location(location: str) -> str:
    if location not in LOCATIONS:
        raise ValueError(f"location must be one of {LOCATIONS}, got {location!r}")
    return location


def _canon_subset(subset, p: int) -> IndexSubset:
    if isinstance(subset, IndexSubset):
        return IndexSubset.of(subset.indices, p)
    return IndexSubset.of(subset, p)


def _locate_columns(block: np.ndarray, location: str) -> np.ndarray:
    """Column location values of a (rows x cols) block.

    Constant columns return their value exactly, so blinding a constant
    column is a no-op and repeating a blind changes nothing.
    """
    if location == "mean":
        loc = block.mean(axis=0)
    else:
        loc = np.median(block, axis=0)
    constant = (block == block[0]).all(axis=0)
    if constant.any():
        loc = np.where(constant, block[0], loc)
    return loc


def _block(data: np.ndarray, row_ix: np.ndarray, col_ix: np.ndarray) -> np.ndarray:
    # the one extraction path shared by both flavors: identical row sets must
    # produce bit-identical blocks (and therefore locations)
    return data[np.ix_(row_ix, col_ix)]


def blind_marginal(data, subset, location: str = "mean") -> np.ndarray:
    """Copy of ``data`` with non-subset columns held at their column location.

    ``subset`` lists the retained variables (1-based); those columns come
    back bit-equal to the input. ``location`` is ``"mean"`` or ``"median"``.
    """
    data = check_matrix(data)
    n, p = data.shape
    subset = _canon_subset(subset, p)
    _check_location(location)
    out = np.array(data)
    hidden = subset.complement_cols(p)
    if hidden.size:
        out[:, hidden] = _locate_columns(_block(data, np.arange(n), hidden), location)
    return out


@dataclass(frozen=True)
class NeighborSet:
    """The r nearest rows to ``query_row`` in the retained coordinates.

    Rows are 1-based here, like variable indices: this type crosses the user
    boundary. ``member_rows`` is ascending and always includes the query row.
    """

    query_row: int
    member_rows: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.member_rows)


def _neighbor_order(dist_sq_row: np.ndarray, query_row: int) -> np.ndarray:
    # the query row sorts first (its distance is forced below zero), then
    # distance, then row index; stable sort supplies the index tie-break
    d = dist_sq_row.copy()
    d[query_row] = -1.0
    return np.argsort(d, kind="stable")


def nearest_neighbors(data, subset, query_row: int, r: int) -> NeighborSet:
    """Neighbors of one row under the subset-coordinate distance.

    ``query_row`` is 1-based, as is the result. A row is always its own
    first neighbor; remaining ties break on the lower row index.
    """
    data = check_matrix(data)
    n, p = data.shape
    subset = _canon_subset(subset, p)
    query_row = int(query_row)
    if not 1 <= query_row <= n:
        raise IndexError(f"query_row {query_row} outside [1, {n}]")
    _check_r(r, n)
    sub = data[:, subset.cols()]
    d2 = ((sub - sub[query_row - 1]) ** 2).sum(axis=1)
    order = _neighbor_order(d2, query_row - 1)[:r]
    return NeighborSet(query_row, tuple(int(i) + 1 for i in np.sort(order)))


def neighbor_table(data: np.ndarray, subset: IndexSubset, r: int) -> np.ndarray:
    """(n, r) ascending 0-based neighbor rows for every query row at once.

    Row j holds ``nearest_neighbors(data, subset, j + 1, r)`` shifted down
    to 0-based; the per-row distance arithmetic is kept identical on purpose.
    """
    n = data.shape[0]
    sub = data[:, subset.cols()]
    table = np.empty((n, r), dtype=np.intp)
    for j in range(n):
        d2 = ((sub - sub[j]) ** 2).sum(axis=1)
        table[j] = np.sort(_neighbor_order(d2, j)[:r])
    return table


def _check_r(r, n: int) -> int:
    r = int(r)
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    if r > n:
        raise RTooLargeError(f"r={r} exceeds the {n} available rows")
    return r


def blind_conditional(data, subset, r: int, location: str = "mean",
                      smallest_cluster: int | None = None) -> np.ndarray:
    """Copy of ``data`` with non-subset columns locally averaged.

    Each row's hidden columns take the ``location`` of those columns over
    the row's r nearest neighbors in the retained coordinates (the row
    itself included). With ``r`` equal to the row count every neighborhood
    is the whole sample and the result is bit-identical to
    :func:`blind_marginal`; with an empty subset there is nothing to
    condition on, so the marginal rule applies by definition.

    Passing ``smallest_cluster`` turns on the heuristic check that r stays
    below the smallest cluster's size; violations only warn, they never
    change the result.
    """
    data = check_matrix(data)
    n, p = data.shape
    subset = _canon_subset(subset, p)
    _check_location(location)
    r = _check_r(r, n)
    if smallest_cluster is not None and r >= int(smallest_cluster):
        warnings.warn(
            f"r={r} is not below the smallest cluster size {int(smallest_cluster)}; "
            "local averages may mix clusters",
            NeighborCountWarning,
            stacklevel=2,
        )
    if subset.d == 0:
        return blind_marginal(data, subset, location)
    out = np.array(data)
    hidden = subset.complement_cols(p)
    if hidden.size == 0:
        return out
    table = neighbor_table(data, subset, r)
    for j in range(n):
        out[j, hidden] = _locate_columns(_block(data, table[j], hidden), location)
    return out
