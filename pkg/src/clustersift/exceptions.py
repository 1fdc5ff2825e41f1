"""Exception and warning types raised across the package."""


class ClusterSiftError(Exception):
    """Base class for every error this package raises on purpose."""


class EmptyInputError(ClusterSiftError, ValueError):
    """The input matrix has no rows or no columns."""


class NonRectangularError(ClusterSiftError, ValueError):
    """The input rows do not all have the same length."""


class NonFiniteEntryError(ClusterSiftError, ValueError):
    """The input holds a NaN, an infinity, or a non-numeric cell.

    ``row`` and ``col`` locate the first offending entry, both 1-based.
    """

    def __init__(self, row, col, value=None):
        self.row = int(row)
        self.col = int(col)
        self.value = value
        super().__init__(
            f"non-finite entry at row {self.row}, column {self.col}: {value!r}"
        )


class DimensionMismatchError(ClusterSiftError, ValueError):
    """A point or matrix does not match the fitted number of variables."""


class KTooLargeError(ClusterSiftError, ValueError):
    """More clusters requested than observations available."""


class DegenerateDataError(ClusterSiftError, ValueError):
    """Fewer distinct rows than clusters requested."""


class RTooLargeError(ClusterSiftError, ValueError):
    """More neighbors requested than rows available."""


class TooManySubsetsError(ClusterSiftError, ValueError):
    """Exhaustive enumeration would exceed the subset budget."""


class ThresholdUnreachableError(ClusterSiftError, ValueError):
    """No subset within the size cap attains the requested threshold."""


class CsvParseError(ClusterSiftError, ValueError):
    """A CSV cell failed to parse as a number.

    ``line`` is the 1-based physical line, ``col`` the 1-based field.
    """

    def __init__(self, line, col, message):
        self.line = int(line)
        self.col = int(col)
        super().__init__(f"line {self.line}, field {self.col}: {message}")


class NeighborCountWarning(UserWarning):
    """The neighbor count is not below the smallest cluster size, so local
    averages may mix observations from different clusters."""
