"""Cascade iteration of the scaling relation.

Starting from the indicator of [0, 1), each step applies
phi_(n+1)(x) = sum_k sqrt(N) c_k phi_n(Nx - k), where c_k is the
coefficient of z^k in m_0. Iterates are step functions on the grid
N^-n, stored as samples at the left end of each cell over the window
[0, Ng - 1]. With m_0(1) = sqrt(N) the mask sums to N and the integral
is preserved.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from loopbank.errors import LowPassViolated, QMFConditionViolated, ShapeMismatch
from loopbank.filters.bank import FilterBank, check_lowpass, check_qmf, filter_degree, genus_for
from loopbank.observability.logging import NullObserver, StageObserver, observed

logger = logging.getLogger(__name__)


@dataclass
class CascadeConfig:
    iterations: int = 10
    support_rel_tol: float = 1e-9
    lowpass_tol: float = 1e-8
    qmf_tol: float = 1e-9


@dataclass
class SampledFunction:
    """Samples of a step function on the grid k / N^level."""

    n: int
    level: int
    genus: int
    values: np.ndarray

    @property
    def support_window(self) -> tuple[int, int]:
        return (0, self.n * self.genus - 1)

    @property
    def step(self) -> float:
        return float(self.n) ** -self.level

    @property
    def grid(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.step

    @property
    def mass(self) -> complex:
        """Integral of the step function."""
        return complex(np.sum(self.values) * self.step)


def _mask(coeffs: np.ndarray, n: int) -> np.ndarray:
    mask = np.sqrt(n) * np.asarray(coeffs, dtype=np.complex128)
    return mask.real if np.all(mask.imag == 0) else mask


def _refine(values: np.ndarray, mask: np.ndarray, n: int, level: int) -> np.ndarray:
    """Apply one mask step to samples on the N^-level grid; returns samples on N^-(level+1)."""
    out = np.zeros(len(values) * n, dtype=np.result_type(values, mask))
    cell = n**level
    for k, a in enumerate(mask):
        if a == 0:
            continue
        shift = k * cell
        stop = min(len(out), shift + len(values))
        out[shift:stop] += a * values[: stop - shift]
    return out


def cascade_scaling(
    m0,
    n: int,
    iterations: Optional[int] = None,
    genus: Optional[int] = None,
    config: Optional[CascadeConfig] = None,
    observer: Optional[StageObserver] = None,
) -> SampledFunction:
    """Run the cascade for m_0 at scale N.

    Args:
        m0: Coefficients of m_0 (index = power of z).
        n: Scale N >= 2.
        iterations: Number of refinements J; defaults to ``config.iterations``.
        genus: Window genus; at least the genus of m_0.
        config: Cascade settings.
        observer: Stage observer.

    Raises:
        LowPassViolated: If |m_0(1) - sqrt(N)| exceeds the low-pass tolerance.
    """
    cfg = config or CascadeConfig()
    obs = observer or NullObserver()
    J = cfg.iterations if iterations is None else iterations
    coeffs = np.asarray(m0, dtype=np.complex128).reshape(-1)
    if n < 2 or J < 0 or coeffs.size == 0:
        raise ShapeMismatch("Cascade needs N >= 2, J >= 0 and a nonempty m0", context={"n": n, "iterations": J})
    defect = float(abs(coeffs.sum() - np.sqrt(n)))
    if defect > cfg.lowpass_tol:
        raise LowPassViolated(f"m0(1) differs from sqrt(N) by {defect:.3e}", defect=defect)

    g = max(genus or 1, genus_for(n, filter_degree(coeffs)))
    mask = _mask(coeffs[: n * g], n)
    values = np.zeros(n * g - 1, dtype=mask.dtype)
    values[0] = 1.0
    with observed(obs, "cascade") as stage:
        for level in range(J):
            values = _refine(values, mask, n, level)
        stage["detail"] = f"N={n} genus={g} J={J} samples={len(values)}"
    logger.debug("Cascade: N=%d genus=%d J=%d", n, g, J)
    return SampledFunction(n=n, level=J, genus=g, values=values)


def cascade_wavelets(
    bank: FilterBank,
    iterations: Optional[int] = None,
    config: Optional[CascadeConfig] = None,
    observer: Optional[StageObserver] = None,
    verify: bool = True,
) -> list[SampledFunction]:
    """psi_i for i = 1..N-1, one m_i mask step applied to the J-th scaling iterate.

    The wavelets live on the N^-(J+1) grid. With ``verify=False`` the
    quadrature mirror check is skipped; the low-pass condition is always
    enforced.

    Raises:
        QMFConditionViolated: If ``verify`` is set and the bank fails check_qmf.
        LowPassViolated: If m_0(1) differs from sqrt(N).
    """
    cfg = config or CascadeConfig()
    J = cfg.iterations if iterations is None else iterations
    qmf = check_qmf(bank, tol=cfg.qmf_tol) if verify else None
    if qmf is not None and not qmf.passed:
        raise QMFConditionViolated(
            f"Bank is not a quadrature mirror system (defect {qmf.max_defect:.3e})",
            defect=qmf.max_defect,
        )
    lowpass = check_lowpass(bank, tol=cfg.lowpass_tol)
    if lowpass.m0_defect > cfg.lowpass_tol:
        raise LowPassViolated(
            f"m0(1) differs from sqrt(N) by {lowpass.m0_defect:.3e}",
            defect=lowpass.m0_defect,
        )

    phi = cascade_scaling(bank.filters[0], bank.n, J, genus=bank.genus, config=cfg, observer=observer)
    g = phi.genus
    wavelets = []
    for m in bank.filters[1:]:
        values = _refine(phi.values, _mask(m[: bank.n * g], bank.n), bank.n, J)
        wavelets.append(SampledFunction(n=bank.n, level=J + 1, genus=g, values=values))
    logger.info("Cascade: N=%d genus=%d J=%d wavelets=%d", bank.n, g, J, len(wavelets))
    return wavelets
