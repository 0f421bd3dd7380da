"""Cascade sampling of scaling functions and wavelets."""

from loopbank.cascade.diagnostics import (
    OrthonormalityReport,
    SupportReport,
    orthonormality_diagnostic,
    support_report,
)
from loopbank.cascade.iteration import (
    CascadeConfig,
    SampledFunction,
    cascade_scaling,
    cascade_wavelets,
)

__all__ = [
    "CascadeConfig",
    "SampledFunction",
    "SupportReport",
    "OrthonormalityReport",
    "cascade_scaling",
    "cascade_wavelets",
    "support_report",
    "orthonormality_diagnostic",
]
