"""clustersift: find the variables a k-means partition actually depends on.

Fit a partition once, freeze it, then "blind" candidate variables by
replacing them with marginal or locally conditioned averages and count how
many observations keep their original cluster. The smallest subsets whose
retention clears a threshold are the variables that matter.
"""

from ._version import __version__

from .blinding import (
    NeighborSet,
    blind_conditional,
    blind_marginal,
    nearest_neighbors,
)
from .convergence import ProbeResult, consistency_probe, default_neighbor_schedule
from .exceptions import (
    ClusterSiftError,
    CsvParseError,
    DegenerateDataError,
    DimensionMismatchError,
    EmptyInputError,
    KTooLargeError,
    NeighborCountWarning,
    NonFiniteEntryError,
    NonRectangularError,
    RTooLargeError,
    ThresholdUnreachableError,
    TooManySubsetsError,
)
from .kmeans import KMeansPartition, assign_labels, squared_distances
from .matrixio import read_matrix_csv, write_matrix_csv
from .objective import (
    SubsetEvaluator,
    efficiency,
    evaluate_subset,
    exact_threshold,
    match_count,
    required_matches,
)
from .report import RunManifest, validate_report
from .search import (
    SearchConfig,
    SelectionReport,
    Solution,
    exhaustive_search,
    forward_backward_search,
    influential_variable,
    run_search,
)
from .selector import ClusterVariableSelector
from .simulate import (
    MixtureSpec,
    MonteCarloResult,
    gen_case1,
    gen_case2,
    gen_tsv05,
    generate,
    monte_carlo,
)
from .subsets import IndexSubset
from .validation import check_matrix

__all__ = [
    "ClusterSiftError",
    "ClusterVariableSelector",
    "CsvParseError",
    "DegenerateDataError",
    "DimensionMismatchError",
    "EmptyInputError",
    "IndexSubset",
    "KMeansPartition",
    "KTooLargeError",
    "MixtureSpec",
    "MonteCarloResult",
    "NeighborCountWarning",
    "NeighborSet",
    "NonFiniteEntryError",
    "NonRectangularError",
    "ProbeResult",
    "RTooLargeError",
    "RunManifest",
    "SearchConfig",
    "SelectionReport",
    "Solution",
    "SubsetEvaluator",
    "ThresholdUnreachableError",
    "TooManySubsetsError",
    "assign_labels",
    "blind_conditional",
    "blind_marginal",
    "check_matrix",
    "consistency_probe",
    "default_neighbor_schedule",
    "efficiency",
    "evaluate_subset",
    "exact_threshold",
    "exhaustive_search",
    "forward_backward_search",
    "gen_case1",
    "gen_case2",
    "gen_tsv05",
    "generate",
    "influential_variable",
    "match_count",
    "monte_carlo",
    "nearest_neighbors",
    "read_matrix_csv",
    "required_matches",
    "run_search",
    "squared_distances",
    "validate_report",
    "write_matrix_csv",
]
