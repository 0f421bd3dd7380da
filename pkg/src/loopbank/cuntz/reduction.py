"""Scale reduction N -> N-1 for loops with lambda_0 = 1.

lambda_0(A) is the (0,0) entry of A^(0)* A^(0). When it equals one, the
first column of A(z) is constant, so A(1)^-1 A(z) = (1) + B(z) is block
diagonal with B a unitary loop of size N-1, and the rows of B define a
filter bank at scale N-1. The same condition is equivalent to m_0 = 1 for
the normalized bank, to e_0 being a Cuntz state, and to E_00 being fixed by
sigma*.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from loopbank.algebra.cpoly import MatPoly
from loopbank.algebra.loop import LoopConfig, PolyLoop, certify_loop
from loopbank.cuntz.corner import CuntzConfig, RepModel, corner_isometries
from loopbank.cuntz.sigma import sigma_matrix
from loopbank.errors import BlockFormViolated
from loopbank.filters.bank import FilterBank, loop_to_filters

logger = logging.getLogger(__name__)


@dataclass
class Reduction:
    unitary: np.ndarray  # A(1)
    normalized: PolyLoop  # A(1)^-1 A(z) = (1) + B(z)
    block: PolyLoop  # B, size N-1
    modified_bank: FilterBank  # bank of the normalized loop, m_0 = 1
    reduced_bank: Optional[FilterBank]  # bank of B; None when N = 2
    block_residual: float
    conditions: dict[str, bool] = field(default_factory=dict)


def lambda0(loop: PolyLoop) -> float:
    """(A^(0)* A^(0))_00 = ||A^(0) e_0||^2, in [0, 1] for a unitary loop."""
    column = loop.coefficient(0)[:, 0]
    return float(np.vdot(column, column).real)


def _block_residual(coeffs: np.ndarray) -> float:
    """Largest entry off the (1) + B pattern, with C_00 compared to delta_(k,0)."""
    corner = coeffs[:, 0, 0].copy()
    corner[0] -= 1.0
    return float(
        max(
            np.max(np.abs(corner)),
            np.max(np.abs(coeffs[:, 0, 1:]), initial=0.0),
            np.max(np.abs(coeffs[:, 1:, 0]), initial=0.0),
        )
    )


def _cuntz_state_at_zero(model: RepModel, tol: float) -> bool:
    column = model.adjoints[:, :, 0]
    return bool(np.max(np.abs(column[:, 1:]), initial=0.0) <= tol)


def reduce_scale(
    loop: PolyLoop,
    config: Optional[CuntzConfig] = None,
    model: Optional[RepModel] = None,
    loop_config: Optional[LoopConfig] = None,
) -> Optional[Reduction]:
    """Split A(1)^-1 A(z) into (1) + B(z) when lambda_0(A) = 1.

    Args:
        loop: Certified loop.
        config: Tolerances; ``reduce_tol`` decides lambda_0 = 1 and
            ``block_tol`` bounds the block-form residual.
        model: Corner model of ``loop``, built when not given.
        loop_config: Certification tolerances for the normalized and reduced loops.

    Returns:
        The reduction, or None when lambda_0 < 1 - reduce_tol.

    Raises:
        BlockFormViolated: If lambda_0 = 1 but the normalized loop is not block diagonal.
    """
    cfg = config or CuntzConfig()
    lam = lambda0(loop)
    if abs(lam - 1.0) >= cfg.reduce_tol:
        logger.debug("No scale reduction: lambda0=%.12f", lam)
        return None

    n = loop.n
    at_one = loop.body.coeffs.sum(axis=0)
    coeffs = np.einsum("ba,kbc->kac", at_one.conj(), loop.body.coeffs)
    residual = _block_residual(coeffs)
    if residual > cfg.block_tol:
        raise BlockFormViolated(
            f"lambda0 = 1 but A(1)^-1 A(z) is not block diagonal ({residual:.3e})",
            residual=residual,
            context={"lambda0": lam},
        )

    normalized = certify_loop(MatPoly(coeffs), config=loop_config)
    block = certify_loop(MatPoly(coeffs[:, 1:, 1:]), config=loop_config)
    modified_bank = loop_to_filters(normalized)
    reduced_bank = loop_to_filters(block) if n >= 3 else None

    model = model or corner_isometries(loop, config=cfg)
    sigma = sigma_matrix(model, model)
    e00 = np.zeros((model.dim, model.dim), dtype=np.complex128)
    e00[0, 0] = 1.0
    m0 = np.array(modified_bank.filters[0])
    m0[0] -= 1.0

    conditions = {
        "lambda0_one": True,
        "block_form": residual <= cfg.block_tol,
        "modified_lowpass_one": bool(np.max(np.abs(m0)) <= cfg.block_tol),
        "cuntz_state_e0": _cuntz_state_at_zero(model, cfg.state_tol),
        "sigma_adjoint_e00": bool(np.max(np.abs(sigma.adjoint_apply(e00) - e00)) <= cfg.block_tol),
    }
    if not all(conditions.values()):
        logger.warning("Scale reduction conditions disagree: %s", conditions)
    logger.info("Scale reduction: N=%d -> %d, block residual %.3e", n, n - 1, residual)
    return Reduction(
        unitary=at_one,
        normalized=normalized,
        block=block,
        modified_bank=modified_bank,
        reduced_bank=reduced_bank,
        block_residual=residual,
        conditions=conditions,
    )
