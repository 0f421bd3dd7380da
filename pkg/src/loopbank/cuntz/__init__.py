"""Cuntz-algebra representations of loops: corner model, sigma, analysis, reduction."""

from loopbank.cuntz.analysis import (
    CuntzState,
    IntertwinerReport,
    MinimalProjection,
    RepReport,
    analyze,
    cuntz_states,
    genus_two_eigenvectors,
    genus_two_lambdas,
    genus_two_reducible,
    genus_two_spectrum,
    intertwiner_space,
    projection_entry,
)
from loopbank.cuntz.corner import (
    CuntzConfig,
    RepModel,
    corner_isometries,
    corner_size,
    corner_size_oracle,
    word_completeness_defect,
    word_isometries,
)
from loopbank.cuntz.reduction import Reduction, lambda0, reduce_scale
from loopbank.cuntz.sigma import (
    SigmaMatrix,
    Spectrum,
    fixed_point_space,
    multiset_distance,
    sigma_matrix,
    spectrum,
)

__all__ = [
    "CuntzConfig",
    "RepModel",
    "SigmaMatrix",
    "Spectrum",
    "RepReport",
    "CuntzState",
    "MinimalProjection",
    "IntertwinerReport",
    "Reduction",
    "corner_size",
    "corner_size_oracle",
    "corner_isometries",
    "word_isometries",
    "word_completeness_defect",
    "sigma_matrix",
    "spectrum",
    "fixed_point_space",
    "multiset_distance",
    "analyze",
    "cuntz_states",
    "intertwiner_space",
    "lambda0",
    "reduce_scale",
    "genus_two_lambdas",
    "genus_two_spectrum",
    "genus_two_eigenvectors",
    "genus_two_reducible",
    "projection_entry",
]
