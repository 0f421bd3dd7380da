"""Filter banks, the filter <-> loop transform, and completions."""

from loopbank.filters.bank import (
    FilterBank,
    FilterConfig,
    LowPassCandidate,
    LowPassReport,
    QMFReport,
    check_lowpass,
    check_qmf,
    filters_to_loop,
    loop_to_filters,
    modulation_matrix,
)
from loopbank.filters.completion import RowData, complete_lowpass, complete_row
from loopbank.filters.selection import (
    PointwiseCompletion,
    cayley_like_u4,
    daubechies_complete_pointwise,
    real_orthogonal_completion,
)

__all__ = [
    "FilterBank",
    "FilterConfig",
    "LowPassCandidate",
    "LowPassReport",
    "QMFReport",
    "RowData",
    "PointwiseCompletion",
    "filters_to_loop",
    "loop_to_filters",
    "modulation_matrix",
    "check_qmf",
    "check_lowpass",
    "complete_row",
    "complete_lowpass",
    "daubechies_complete_pointwise",
    "real_orthogonal_completion",
    "cayley_like_u4",
]
