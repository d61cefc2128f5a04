"""Sorting by calculation: guessing-function scatter sorts and a benchmark harness."""

from .errors import (
    DegenerateMapper,
    EmptyBox,
    EmptyInput,
    GuessSortError,
    InvalidSpec,
    NonFiniteKey,
    OutOfRange,
    RangeOverflow,
    VerificationError,
)
from .mapping import (
    DistributionArray,
    RefinedMapper,
    StatisticalMapper,
    TwoTerminalMapper,
    build_distribution_array,
    build_statistical_mapper,
    build_two_terminal_mapper,
    local_tangent,
    map_g1,
    map_g2,
    map_stat,
    refine,
)
from .sorter import (
    BoxTable,
    SortStats,
    insertion_sort,
    quicksort_baseline,
    scatter,
    sort_one_pass,
    sort_two_pass,
    verify_sorted_permutation,
)

__version__ = "0.1.0"
