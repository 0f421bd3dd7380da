"""Support and orthonormality diagnostics for sampled cascade functions."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from loopbank.cascade.iteration import CascadeConfig, SampledFunction

logger = logging.getLogger(__name__)


@dataclass
class SupportReport:
    lo: float
    hi: float
    empty: bool
    window_bound: float  # Ng - 1
    sharp_bound: float  # (Ng - 1) / (N - 1), the fixed point of S -> (S + Ng - 1) / N
    within_window: bool
    within_sharp_bound: bool
    tail_mass: float  # integral of |f| beyond the sharp bound plus one grid step
    tol: float


def support_report(
    f: SampledFunction,
    tol: Optional[float] = None,
    config: Optional[CascadeConfig] = None,
) -> SupportReport:
    """Smallest grid interval outside which |f| < tol.

    ``tol`` defaults to ``support_rel_tol`` times the largest sample magnitude.
    """
    cfg = config or CascadeConfig()
    magnitude = np.abs(f.values)
    peak = float(magnitude.max()) if magnitude.size else 0.0
    tol = cfg.support_rel_tol * peak if tol is None else tol

    n, g = f.n, f.genus
    window_bound = float(n * g - 1)
    sharp_bound = window_bound / (n - 1)
    beyond = f.grid >= sharp_bound + f.step
    tail_mass = float(np.sum(magnitude[beyond]) * f.step)

    significant = np.nonzero(magnitude > tol)[0]
    if significant.size == 0:
        return SupportReport(
            lo=0.0,
            hi=0.0,
            empty=True,
            window_bound=window_bound,
            sharp_bound=sharp_bound,
            within_window=True,
            within_sharp_bound=True,
            tail_mass=tail_mass,
            tol=tol,
        )
    lo = float(significant[0] * f.step)
    hi = float((significant[-1] + 1) * f.step)
    return SupportReport(
        lo=lo,
        hi=hi,
        empty=False,
        window_bound=window_bound,
        sharp_bound=sharp_bound,
        within_window=lo >= 0 and hi <= window_bound + 1e-12,
        within_sharp_bound=hi <= sharp_bound + f.step + 1e-12,
        tail_mass=tail_mass,
        tol=tol,
    )


@dataclass
class OrthonormalityReport:
    shifts: np.ndarray
    values: np.ndarray  # <f, f(. - k)> for each shift k
    max_offdiag: float
    diag_defect: float  # |<f, f> - 1|
    passed: Optional[bool]  # None unless a tolerance was given


def _averaged(f: SampledFunction, resolution: Optional[int]) -> tuple[np.ndarray, int]:
    """Samples averaged over the cells of the N^-resolution grid."""
    v = np.asarray(f.values)
    if resolution is None or resolution >= f.level:
        return v, f.level
    block = f.n ** (f.level - max(resolution, 0))
    pad = (-len(v)) % block
    if pad:
        v = np.concatenate([v, np.zeros(pad, dtype=v.dtype)])
    return v.reshape(-1, block).mean(axis=1), max(resolution, 0)


def orthonormality_diagnostic(
    f: SampledFunction,
    tol: Optional[float] = None,
    resolution: Optional[int] = None,
) -> OrthonormalityReport:
    """Inner products <f, f(. - k)> for |k| <= Ng, by the exact step-function sum.

    Cascade iterates of a quadrature mirror mask keep orthonormal shifts at
    every level, so a limit that is only a tight frame shows up after
    averaging onto a coarser grid: ``resolution`` picks that grid level.
    """
    reach = f.n * f.genus
    shifts = np.arange(-reach, reach + 1)
    v, level = _averaged(f, resolution)
    cell = f.n**level
    step = float(f.n) ** -level
    size = len(v)
    values = np.zeros(len(shifts), dtype=np.complex128)
    for idx, k in enumerate(shifts):
        offset = abs(int(k)) * cell
        if offset >= size:
            continue
        if k >= 0:
            values[idx] = np.vdot(v[: size - offset], v[offset:]) * step
        else:
            values[idx] = np.vdot(v[offset:], v[: size - offset]) * step

    center = reach
    off = np.delete(values, center)
    max_offdiag = float(np.max(np.abs(off))) if off.size else 0.0
    diag_defect = float(abs(values[center] - 1.0))
    passed = None if tol is None else max(max_offdiag, diag_defect) <= tol
    if passed is False:
        logger.info("Shifts are not orthonormal: diag defect %.3e, off-diagonal %.3e", diag_defect, max_offdiag)
    return OrthonormalityReport(
        shifts=shifts,
        values=values,
        max_offdiag=max_offdiag,
        diag_defect=diag_defect,
        passed=passed,
    )
