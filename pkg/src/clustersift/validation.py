"""Input validation helpers shared by the estimators, operations, and CLI."""

from __future__ import annotations

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    EmptyInputError,
    NonFiniteEntryError,
    NonRectangularError,
)


def _first_bad_cell(raw):
    """Locate the first cell that does not convert to float, 1-based."""
    try:
        rows = list(raw)
    except TypeError:
        return None
    for i, row in enumerate(rows):
        if np.ndim(row) == 0 and not hasattr(row, "__len__"):
            return None
        for j, cell in enumerate(row):
            try:
                float(cell)
            except (TypeError, ValueError):
                return i + 1, j + 1, cell
    return None


def check_matrix(raw) -> np.ndarray:
    """Validate a rectangular table of finite numbers.

    Returns a fresh read-only float64 array of shape (n, p) with n >= 1 and
    p >= 1. The input is never mutated. Errors report the first offending
    entry with 1-based row and column indices.
    """
    if isinstance(raw, (list, tuple)):
        lengths = set()
        for row in raw:
            if hasattr(row, "__len__"):
                lengths.add(len(row))
        if len(lengths) > 1:
            raise NonRectangularError(
                f"rows have differing lengths: {sorted(lengths)}"
            )
    try:
        arr = np.array(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        locus = _first_bad_cell(raw)
        if locus is not None:
            raise NonFiniteEntryError(*locus) from exc
        raise NonRectangularError(str(exc)) from exc
    if arr.ndim != 2:
        raise NonRectangularError(
            f"expected a two-dimensional table, got {arr.ndim} dimension(s)"
        )
    n, p = arr.shape
    if n == 0 or p == 0:
        raise EmptyInputError(
            f"matrix must have at least one row and one column, got {n}x{p}"
        )
    if not np.isfinite(arr).all():
        i, j = np.argwhere(~np.isfinite(arr))[0]
        raise NonFiniteEntryError(int(i) + 1, int(j) + 1, float(arr[i, j]))
    arr.flags.writeable = False
    return arr


def check_vector(point, p: int) -> np.ndarray:
    """Validate a single observation of dimension ``p``."""
    v = np.asarray(point, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != int(p):
        raise DimensionMismatchError(
            f"expected a vector of length {p}, got shape {v.shape}"
        )
    if not np.isfinite(v).all():
        j = int(np.flatnonzero(~np.isfinite(v))[0])
        raise NonFiniteEntryError(1, j + 1, float(v[j]))
    return v


def check_labels(labels, n: int) -> np.ndarray:
    """Validate an integer label vector of length ``n`` (labels are 0-based)."""
    lab = np.asarray(labels)
    if lab.ndim != 1 or lab.shape[0] != int(n):
        raise DimensionMismatchError(
            f"expected {n} labels, got shape {lab.shape}"
        )
    if not np.issubdtype(lab.dtype, np.integer):
        as_int = lab.astype(np.intp)
        if not np.array_equal(as_int, lab):
            raise ValueError("cluster labels must be integers")
        lab = as_int
    if lab.size and lab.min() < 0:
        raise ValueError("cluster labels must be non-negative")
    lab = np.array(lab, dtype=np.intp)
    lab.flags.writeable = False
    return lab
