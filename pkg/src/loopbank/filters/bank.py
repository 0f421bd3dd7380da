"""Filter banks and the filter <-> loop transform.

The N filters m_0..m_(N-1) of a bank and the loop A(z) determine each other
by index shuffling: A_(i,j)^(k) is the coefficient of z^(j + Nk) in m_i,
and m_i(z) = sum_j z^j A_(i,j)(z^N). The bank is a quadrature mirror system
exactly when the modulation matrix M(z) = (1/sqrt(N)) [m_i(rho^k z)] is
unitary, rho = e^(2 pi i / N); the loop is then unitary as well.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from loopbank.algebra.cpoly import DEFAULT_TRIM_TOL, MatPoly, circle_points
from loopbank.algebra.loop import LoopConfig, PolyLoop, certify_loop
from loopbank.errors import ShapeMismatch

logger = logging.getLogger(__name__)


@dataclass
class FilterConfig:
    """Tolerances for bank checks and completion."""

    qmf_tol: float = 1e-10
    lowpass_tol: float = 1e-10
    row_tol: float = 1e-10
    candidate_tol: float = 1e-9
    match_tol: float = 1e-9
    samples: int = 32


def _as_filter(coeffs) -> np.ndarray:
    arr = np.array(coeffs, dtype=np.complex128).reshape(-1)
    if arr.size == 0:
        raise ShapeMismatch("A filter needs at least one coefficient")
    arr.setflags(write=False)
    return arr


def filter_degree(coeffs: np.ndarray, trim_tol: float = DEFAULT_TRIM_TOL) -> int:
    significant = np.nonzero(np.abs(coeffs) > trim_tol)[0]
    return int(significant[-1]) if significant.size else 0


def genus_for(n: int, degree: int) -> int:
    """Smallest g >= 1 with degree <= Ng - 1."""
    return max(1, math.ceil((degree + 1) / n))


@dataclass(frozen=True, eq=False)
class FilterBank:
    """N scalar filters; filters[i][p] is the coefficient of z^p in m_i."""

    n: int
    filters: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        filters = tuple(_as_filter(f) for f in self.filters)
        if self.n < 1 or len(filters) != self.n:
            raise ShapeMismatch(
                f"A bank at scale {self.n} needs {self.n} filters, got {len(filters)}",
                context={"n": self.n, "filters": len(filters)},
            )
        object.__setattr__(self, "filters", filters)

    def degrees(self) -> list[int]:
        return [filter_degree(f) for f in self.filters]

    @property
    def genus(self) -> int:
        return genus_for(self.n, max(self.degrees()))


@dataclass(frozen=True, eq=False)
class LowPassCandidate:
    """A scalar polynomial offered as m_0 at scale N."""

    n: int
    m0: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ShapeMismatch("Scale must be positive", context={"n": self.n})
        object.__setattr__(self, "m0", _as_filter(self.m0))

    @property
    def genus(self) -> int:
        return genus_for(self.n, filter_degree(self.m0))

    def defect(self, samples: int = 32) -> float:
        """max over the circle of |sum_k |m0(z rho^k)|^2 - N|."""
        rho = np.exp(2j * np.pi * np.arange(self.n) / self.n)
        points = circle_points(samples)[:, np.newaxis] * rho
        power = np.abs(npoly.polyval(points, self.m0)) ** 2
        return float(np.max(np.abs(power.sum(axis=1) - self.n)))


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------


def filters_to_loop(
    bank: FilterBank,
    tol: Optional[float] = None,
    config: Optional[LoopConfig] = None,
) -> PolyLoop:
    """Polyphase loop of a bank: A_(i,j)^(k) = coefficient of z^(j+Nk) in m_i.

    Raises:
        NonUnitary: If the resulting loop is not unitary (the bank is not QMF).
    """
    n, g = bank.n, bank.genus
    coeffs = np.zeros((g, n, n), dtype=np.complex128)
    for i, m in enumerate(bank.filters):
        padded = np.zeros(n * g, dtype=np.complex128)
        used = min(len(m), n * g)
        padded[:used] = m[:used]
        coeffs[:, i, :] = padded.reshape(g, n)
    return certify_loop(MatPoly(coeffs), tol=tol, config=config)


def loop_to_filters(loop: PolyLoop) -> FilterBank:
    """Inverse transform m_i(z) = sum_j z^j A_(i,j)(z^N); each filter has N*g terms."""
    coeffs = loop.body.coeffs
    return FilterBank(
        n=loop.n,
        filters=tuple(coeffs[:, i, :].reshape(-1) for i in range(loop.n)),
    )


def modulation_matrix(bank: FilterBank, points) -> np.ndarray:
    """M(z) = (1/sqrt(N)) [m_i(rho^k z)]_(i,k); shape (len(points), N, N)."""
    n = bank.n
    rho = np.exp(2j * np.pi * np.arange(n) / n)
    shifted = np.asarray(points, dtype=np.complex128).reshape(-1)[:, np.newaxis] * rho
    rows = [npoly.polyval(shifted, m) for m in bank.filters]
    return np.stack(rows, axis=1) / np.sqrt(n)


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


@dataclass
class QMFReport:
    max_defect: float
    tol: float
    passed: bool


@dataclass
class LowPassReport:
    m0_defect: float  # |m0(1) - sqrt(N)|
    row_defect: float  # max_j |A_0j(1) - 1/sqrt(N)|
    tol: float
    passed: bool
    agree: bool


def check_qmf(
    bank: FilterBank,
    tol: Optional[float] = None,
    config: Optional[FilterConfig] = None,
) -> QMFReport:
    """Max of ||M(z)M(z)* - I|| over a fundamental domain 0 <= x < 2 pi / N."""
    cfg = config or FilterConfig()
    tol = cfg.qmf_tol if tol is None else tol
    m = modulation_matrix(bank, circle_points(cfg.samples, upper=2 * np.pi / bank.n))
    gram = m @ np.conj(np.transpose(m, (0, 2, 1)))
    defect = float(np.max(np.linalg.norm(gram - np.eye(bank.n), ord=2, axis=(1, 2))))
    return QMFReport(max_defect=defect, tol=tol, passed=defect <= tol)


def check_lowpass(
    source: Union[FilterBank, LowPassCandidate],
    tol: Optional[float] = None,
    config: Optional[FilterConfig] = None,
) -> LowPassReport:
    """Compare m0(1) = sqrt(N) with the row condition A_0j(1) = 1/sqrt(N)."""
    cfg = config or FilterConfig()
    tol = cfg.lowpass_tol if tol is None else tol
    if isinstance(source, FilterBank):
        n, m0 = source.n, source.filters[0]
    else:
        n, m0 = source.n, source.m0

    m0_defect = float(abs(m0.sum() - np.sqrt(n)))
    padded = np.zeros(n * genus_for(n, len(m0) - 1), dtype=np.complex128)
    padded[: len(m0)] = m0
    row_at_one = padded.reshape(-1, n).sum(axis=0)
    row_defect = float(np.max(np.abs(row_at_one - 1 / np.sqrt(n))))

    agree = (m0_defect <= tol) == (row_defect <= tol)
    if not agree:
        logger.warning(
            "Low-pass tests disagree: m0 defect=%.3e row defect=%.3e (is the bank QMF?)",
            m0_defect,
            row_defect,
        )
    return LowPassReport(
        m0_defect=m0_defect,
        row_defect=row_defect,
        tol=tol,
        passed=m0_defect <= tol and row_defect <= tol,
        agree=agree,
    )


def basic_bank(n: int) -> FilterBank:
    """m_i(z) = z^i, the bank of the identity loop."""
    return FilterBank(n=n, filters=tuple(np.eye(n)[i] for i in range(n)))
