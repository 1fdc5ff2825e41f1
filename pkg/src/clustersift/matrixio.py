"""CSV ingestion and emission for numeric matrices.

Dialect: comma separated, '.' decimal point, optional single header row,
no quoting. Floats are written with 17 significant digits so write -> read
reproduces the matrix bit for bit.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .exceptions import CsvParseError, EmptyInputError
from .validation import check_matrix


def read_matrix_csv(path, has_header: bool = False):
    """Read a matrix; returns (values, header) with header None if absent.

    Parse failures point at the physical line and field, 1-based. Values
    that parse but are not finite (a literal nan or inf) are rejected by
    the same finiteness check applied to in-memory matrices.
    """
    rows: list[list[float]] = []
    header = None
    width = None
    with open(path, newline="") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if not record:
                continue
            if lineno == 1 and has_header:
                header = [cell.strip() for cell in record]
                width = len(header)
                continue
            if width is not None and len(record) != width:
                raise CsvParseError(
                    lineno, len(record),
                    f"row has {len(record)} fields, expected {width}",
                )
            width = len(record)
            parsed = []
            for j, cell in enumerate(record, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise CsvParseError(
                        lineno, j, f"cannot parse {cell.strip()!r} as a number"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    return check_matrix(rows), header


def write_matrix_csv(path, matrix, header=None) -> None:
    """Write a matrix with enough digits to survive a round trip."""
    matrix = np.asarray(matrix, dtype=np.float64)
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header is not None:
            writer.writerow(header)
        for row in matrix:
            writer.writerow([f"{x:.17g}" for x in row])
