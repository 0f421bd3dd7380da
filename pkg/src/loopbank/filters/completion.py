"""Completion of a unitary first row, and of a low-pass filter to a full bank.

A row a(z) = sum_i z^i alpha_i extends to a unitary loop of the same degree
whenever a(z) a(z)* = 1 on the circle. With P the rank-one projection onto
the top vector alpha_(g-1), the row b(z) = a(z)(1 - P + z^-1 P) has degree
one less and still satisfies the same relations; completing b to B and
multiplying back, A = B (1 - P + zP) has first row a. The constant case is a
Householder completion.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from loopbank.algebra.cpoly import DEFAULT_TRIM_TOL, MatPoly, mul
from loopbank.algebra.loop import ElementaryFactor, LoopConfig, PolyLoop, certify_loop
from loopbank.errors import (
    NotUnitVector,
    QMFConditionViolated,
    ReconstructionFailed,
    RowConditionViolated,
)
from loopbank.filters.bank import FilterBank, FilterConfig, LowPassCandidate, loop_to_filters

logger = logging.getLogger(__name__)


@dataclass
class RowData:
    """Row vectors alpha_0..alpha_(g-1) of a candidate first row."""

    rows: np.ndarray  # shape (g, N)

    def __post_init__(self) -> None:
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=np.complex128))

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    @property
    def genus(self) -> int:
        return self.rows.shape[0]

    def relation_residuals(self) -> np.ndarray:
        """|sum_i <alpha_i, alpha_(i+j)> - delta_(j,0)| for j = 0..g-1."""
        g = self.genus
        out = np.zeros(g)
        for j in range(g):
            total = sum(np.vdot(self.rows[i], self.rows[i + j]) for i in range(g - j))
            out[j] = abs(total - (1.0 if j == 0 else 0.0))
        return out

    def check(self, tol: float) -> None:
        """Raise RowConditionViolated at the worst relation beyond ``tol``."""
        residuals = self.relation_residuals()
        worst = int(np.argmax(residuals))
        if residuals[worst] > tol:
            raise RowConditionViolated(
                f"Row relation j={worst} fails (residual {residuals[worst]:.3e})",
                j=worst,
                residual=float(residuals[worst]),
            )

    def trimmed(self, trim_tol: float = DEFAULT_TRIM_TOL) -> "RowData":
        """Drop vanishing top rows, keeping at least one."""
        top = self.genus
        while top > 1 and np.linalg.norm(self.rows[top - 1]) <= trim_tol:
            top -= 1
        return RowData(self.rows[:top].copy())


def householder_completion(row: np.ndarray) -> np.ndarray:
    """Unitary matrix whose first row is the unit vector ``row``.

    A reflector sends -theta e_p to conj(row), where p is the largest-modulus
    entry and theta its phase; rescaling column p and moving it to the front
    gives a unitary W with first column conj(row), and W* is the completion.
    """
    a = np.asarray(row, dtype=np.complex128)
    norm = float(np.linalg.norm(a))
    if abs(norm - 1.0) > 1e-9:
        raise NotUnitVector(f"Row has norm {norm!r}, expected 1", norm=norm)
    w = a.conj() / norm
    n = len(w)
    p = int(np.argmax(np.abs(w)))
    theta = w[p] / abs(w[p])

    u = -w.copy()
    u[p] -= theta
    reflector = np.eye(n) - 2 * np.outer(u, u.conj()) / np.vdot(u, u).real
    reflector[:, p] *= -theta
    order = [p] + [k for k in range(n) if k != p]
    return reflector[:, order].conj().T


def row_reduction_step(rows: RowData) -> tuple[RowData, np.ndarray]:
    """One step b(z) = a(z)(1 - P + z^-1 P); returns (b, P).

    The two cancellations alpha_0 P = 0 and alpha_(g-1)(1 - P) = 0 make b a
    polynomial of degree g - 2.
    """
    alpha = rows.rows
    top = alpha[-1]
    p = np.outer(top.conj(), top) / np.vdot(top, top).real
    keep = np.eye(rows.n) - p
    beta = alpha[:-1] @ keep + alpha[1:] @ p
    return RowData(beta), p


def complete_row(
    rows: RowData,
    tol: Optional[float] = None,
    config: Optional[FilterConfig] = None,
    loop_config: Optional[LoopConfig] = None,
) -> PolyLoop:
    """Extend a first row to a unitary loop of degree at most g - 1.

    Raises:
        RowConditionViolated: If the row relations fail.
        ReconstructionFailed: If the completed loop's first row drifts from the input.
    """
    cfg = config or FilterConfig()
    tol = cfg.row_tol if tol is None else tol
    rows.check(tol)

    current = rows.trimmed()
    projections = []
    while current.genus > 1:
        current, p = row_reduction_step(current)
        current = current.trimmed()
        projections.append(p)

    base = householder_completion(current.rows[0] / np.linalg.norm(current.rows[0]))
    body = MatPoly.constant(base)
    for p in reversed(projections):
        body = mul(body, ElementaryFactor(p).as_poly())

    length = max(rows.genus, body.degree + 1)
    first = body.padded(length)[:, 0, :]
    target = np.zeros((length, rows.n), dtype=np.complex128)
    target[: rows.genus] = rows.rows
    drift = float(np.max(np.abs(first - target)))
    if drift > cfg.match_tol:
        raise ReconstructionFailed(
            f"Completed loop does not reproduce the row ({drift:.3e})",
            residual=drift,
        )
    logger.debug("Completed row: N=%d genus=%d steps=%d", rows.n, rows.genus, len(projections))
    return certify_loop(body, config=loop_config)


def complete_lowpass(
    candidate: LowPassCandidate,
    config: Optional[FilterConfig] = None,
    loop_config: Optional[LoopConfig] = None,
) -> FilterBank:
    """Complete m_0 to a quadrature mirror bank with degrees at most Ng - 1.

    Raises:
        QMFConditionViolated: If sum_k |m0(z rho^k)|^2 = N fails.
    """
    cfg = config or FilterConfig()
    defect = candidate.defect(cfg.samples)
    if defect > cfg.candidate_tol:
        raise QMFConditionViolated(
            f"m0 fails the quadrature mirror condition (defect {defect:.3e})",
            defect=defect,
        )

    n, g = candidate.n, candidate.genus
    padded = np.zeros(n * g, dtype=np.complex128)
    used = min(len(candidate.m0), n * g)
    padded[:used] = candidate.m0[:used]
    loop = complete_row(
        RowData(padded.reshape(g, n)),
        tol=max(cfg.row_tol, cfg.candidate_tol),
        config=cfg,
        loop_config=loop_config,
    )
    bank = loop_to_filters(loop)
    logger.info("Completed low-pass filter: N=%d genus=%d", n, g)
    return FilterBank(n=n, filters=(candidate.m0,) + bank.filters[1:])
