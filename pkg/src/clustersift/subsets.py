"""Canonical variable subsets.

Variable indices are 1-based everywhere a user sees them (V1 .. Vp, the
usual naming for survey and sensor columns); row indices and cluster labels
stay 0-based like any other numpy index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


@dataclass(frozen=True, order=True)
class IndexSubset:
    """A sorted set of retained (non-blinded) variable indices, 1-based.

    The empty subset is legal and means every variable gets blinded.
    """

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.indices, self.indices[1:]):
            if a >= b:
                raise ValueError(f"indices must be strictly increasing, got {self.indices}")
        if self.indices and self.indices[0] < 1:
            raise ValueError(f"variable indices are 1-based, got {self.indices[0]}")

    @classmethod
    def of(cls, indices: Iterable[int], p: int) -> "IndexSubset":
        """Canonicalize arbitrary indices: deduplicate, sort, range-check."""
        canon = tuple(sorted({int(i) for i in indices}))
        for i in canon:
            if not 1 <= i <= p:
                raise ValueError(f"variable index {i} outside [1, {p}]")
        return cls(canon)

    @classmethod
    def full(cls, p: int) -> "IndexSubset":
        return cls(tuple(range(1, int(p) + 1)))

    @property
    def d(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return i in self.indices

    def cols(self) -> np.ndarray:
        """0-based column positions, for array indexing."""
        return np.asarray(self.indices, dtype=np.intp) - 1

    def complement_cols(self, p: int) -> np.ndarray:
        """0-based positions of the blinded columns."""
        mask = np.ones(int(p), dtype=bool)
        mask[self.cols()] = False
        return np.flatnonzero(mask)

    def __str__(self) -> str:
        return "{" + ", ".join(str(i) for i in self.indices) + "}"
