"""Unitary polynomial loops – certification, McMillan degree, factorization.

A loop A(z) = sum_k z^k A_k is unitary on the circle exactly when the
coefficient relations sum_k A_k* A_(k+n) = delta_(n,0) I hold. Peeling the
range projection Q of the top coefficient lowers the degree by one:
A = ((1 - Q) + zQ) W. Repeating until the remainder is constant gives the
degree-level factorization; splitting each level projection spectrally gives
the rank-one factorization whose length is the McMillan degree.
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from loopbank.algebra.cpoly import (
    LaurentMatPoly,
    MatPoly,
    circle_points,
    det_poly,
    evaluate_on,
    mul,
)
from loopbank.errors import (
    DegreeZero,
    InvalidProjection,
    NonUnitary,
    NotMonomial,
    RankAmbiguous,
    ReconstructionFailed,
    ShapeMismatch,
)

logger = logging.getLogger(__name__)


@dataclass
class LoopConfig:
    """Tolerances for loop certification and factorization."""

    certify_tol: float = 1e-10
    samples: int = 32
    rank_rel_tol: float = 1e-8
    monomial_tol: float = 1e-9
    projection_tol: float = 1e-10
    reconstruction_tol: float = 1e-9


def matrix_unitarity_defect(matrix: np.ndarray) -> float:
    """Operator norm of M M* - I."""
    m = np.asarray(matrix, dtype=np.complex128)
    return float(np.linalg.norm(m @ m.conj().T - np.eye(m.shape[0]), 2))


def _coefficient_relation_defect(coeffs: np.ndarray) -> float:
    n = coeffs.shape[1]
    worst = 0.0
    for shift in range(len(coeffs)):
        gram = np.einsum("kba,kbc->ac", coeffs[: len(coeffs) - shift].conj(), coeffs[shift:])
        if shift == 0:
            gram = gram - np.eye(n)
        worst = max(worst, float(np.linalg.norm(gram, 2)))
    return worst


@dataclass(frozen=True, eq=False)
class PolyLoop:
    """A square matrix polynomial certified unitary on the circle."""

    n: int
    body: MatPoly
    unitarity_defect: float

    @property
    def degree(self) -> int:
        return self.body.degree

    @property
    def genus(self) -> int:
        return self.body.degree + 1

    def coefficient(self, k: int) -> np.ndarray:
        return self.body.coefficient(k)

    def values(self, points) -> np.ndarray:
        return evaluate_on(self.body, points)


def certify_loop(
    body: MatPoly,
    tol: Optional[float] = None,
    config: Optional[LoopConfig] = None,
) -> PolyLoop:
    """Certify a square matrix polynomial as a unitary loop.

    Args:
        body: Candidate loop.
        tol: Certification tolerance; defaults to ``config.certify_tol``.
        config: Loop tolerances.

    Returns:
        PolyLoop with the measured pointwise defect.

    Raises:
        ShapeMismatch: If the body is not square.
        NonUnitary: If the pointwise or coefficient-relation test fails.
    """
    cfg = config or LoopConfig()
    tol = cfg.certify_tol if tol is None else tol
    if not body.is_square:
        raise ShapeMismatch(
            "A loop must be square",
            context={"shape": [body.rows, body.cols]},
        )

    n = body.rows
    values = evaluate_on(body, circle_points(cfg.samples))
    products = values @ np.conj(np.transpose(values, (0, 2, 1)))
    pointwise = float(np.max(np.linalg.norm(products - np.eye(n), ord=2, axis=(1, 2))))
    relations = _coefficient_relation_defect(body.coeffs)

    if pointwise > tol or relations > tol:
        raise NonUnitary(
            f"Loop is not unitary (pointwise={pointwise:.3e}, relations={relations:.3e})",
            defect=max(pointwise, relations),
            context={"pointwise": pointwise, "relations": relations, "tol": tol},
        )
    return PolyLoop(n=n, body=body, unitarity_defect=pointwise)


def mcmillan_degree(loop: PolyLoop, config: Optional[LoopConfig] = None) -> int:
    """Winding number of det A(z), read off the monomial determinant.

    Raises:
        NotMonomial: If more than one determinant coefficient survives.
    """
    cfg = config or LoopConfig()
    det = np.abs(det_poly(loop.body).coeffs[:, 0, 0])
    degree = int(np.argmax(det))
    others = np.delete(det, degree)
    residual = float(others.max()) if others.size else 0.0
    if residual > cfg.monomial_tol:
        raise NotMonomial(
            f"Determinant is not a monomial (residual {residual:.3e})",
            residual=residual,
            context={"leading_degree": degree},
        )
    return degree


# ---------------------------------------------------------------------------
# Elementary factors
# ---------------------------------------------------------------------------


def projection_defect(matrix: np.ndarray) -> float:
    """Largest of ||Q - Q*|| and ||Q^2 - Q||."""
    q = np.asarray(matrix, dtype=np.complex128)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        return float("inf")
    return max(
        float(np.linalg.norm(q - q.conj().T, 2)),
        float(np.linalg.norm(q @ q - q, 2)),
    )


@dataclass(frozen=True, eq=False)
class ElementaryFactor:
    """The loop (1 - Q) + zQ for an orthogonal projection Q."""

    projection: np.ndarray
    tol: float = field(default=1e-10, repr=False)

    def __post_init__(self) -> None:
        q = np.array(self.projection, dtype=np.complex128)
        defect = projection_defect(q)
        if defect > self.tol:
            raise InvalidProjection(
                f"Not an orthogonal projection (defect {defect:.3e})",
                defect=defect,
            )
        q.setflags(write=False)
        object.__setattr__(self, "projection", q)

    @property
    def n(self) -> int:
        return self.projection.shape[0]

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self.projection).real)))

    def as_poly(self) -> MatPoly:
        q = self.projection
        return MatPoly(np.stack([np.eye(self.n) - q, q]))


def split_projection(q: np.ndarray) -> list[np.ndarray]:
    """Split a projection into orthogonal rank-one projections.

    Eigenvectors for eigenvalue one are phase-normalized (first significant
    component real positive) and ordered by eigenvalue, then by the position
    and size of that component.
    """
    herm = (q + q.conj().T) / 2
    eigenvalues, vectors = scipy.linalg.eigh(herm)
    picked = []
    for value, vec in zip(eigenvalues, vectors.T):
        if value < 0.5:
            continue
        lead = int(np.argmax(np.abs(vec) > 1e-8))
        vec = vec * (abs(vec[lead]) / vec[lead])
        picked.append((-round(float(value), 8), lead, -abs(vec[lead]), vec))
    picked.sort(key=lambda item: item[:3])
    return [np.outer(vec, vec.conj()) for *_, vec in picked]


# ---------------------------------------------------------------------------
# Peeling and factorization
# ---------------------------------------------------------------------------


def peel_factor(
    loop: PolyLoop,
    config: Optional[LoopConfig] = None,
) -> tuple[np.ndarray, PolyLoop]:
    """Split off the elementary factor carried by the top coefficient.

    Returns:
        (Q, W) with A = ((1 - Q) + zQ) W and deg W = deg A - 1.

    Raises:
        DegreeZero: If the loop is constant.
        RankAmbiguous: If a singular value of the top coefficient is within a
            decade of the rank threshold.
    """
    cfg = config or LoopConfig()
    if loop.degree == 0:
        raise DegreeZero("Cannot peel a factor from a constant loop")

    n = loop.n
    top = loop.body.coeffs[-1]
    u, s, _ = scipy.linalg.svd(top)
    threshold = cfg.rank_rel_tol * s[0]
    close = s[(s > 0.1 * threshold) & (s < 10 * threshold)]
    if close.size:
        raise RankAmbiguous(
            f"Singular value {close[0]:.3e} too close to rank threshold {threshold:.3e}",
            singular_value=float(close[0]),
            threshold=float(threshold),
        )
    rank = int(np.sum(s > threshold))
    basis = u[:, :rank]
    q = basis @ basis.conj().T
    q = (q + q.conj().T) / 2

    lowered = mul(LaurentMatPoly(-1, np.stack([q, np.eye(n) - q])), loop.body)
    spill = max(
        float(np.linalg.norm(lowered.coefficient(-1), 2)),
        float(np.linalg.norm(lowered.coefficient(loop.degree), 2)),
    )
    if spill > cfg.certify_tol:
        raise NonUnitary(
            f"Peeling left terms outside the lowered degree range ({spill:.3e})",
            defect=spill,
        )
    body = MatPoly(np.stack([lowered.coefficient(k) for k in range(loop.degree)]))
    logger.debug("Peeled rank-%d factor: degree %d -> %d", rank, loop.degree, body.degree)
    return q, certify_loop(body, config=cfg)


@dataclass
class Factorization:
    """A = (prod of rank-one elementary factors) V."""

    n: int
    rank_one_factors: list[ElementaryFactor]
    degree_projections: list[np.ndarray]
    constant: np.ndarray

    @property
    def mcmillan_degree(self) -> int:
        return len(self.rank_one_factors)

    def reconstruct(self) -> MatPoly:
        body = MatPoly.identity(self.n)
        for factor in self.rank_one_factors:
            body = mul(body, factor.as_poly())
        return mul(body, MatPoly.constant(self.constant))


def _peel_all(loop: PolyLoop, cfg: LoopConfig) -> tuple[list[np.ndarray], np.ndarray]:
    levels = []
    current = loop
    while current.degree > 0:
        q, current = peel_factor(current, cfg)
        levels.append(q)
    return levels, np.array(current.body.coeffs[0])


def _circle_distance(p: MatPoly, q: MatPoly, samples: int) -> float:
    points = circle_points(samples)
    diff = evaluate_on(p, points) - evaluate_on(q, points)
    return float(np.max(np.linalg.norm(diff, ord=2, axis=(1, 2))))


def factorize(loop: PolyLoop, config: Optional[LoopConfig] = None) -> Factorization:
    """Factor a loop into rank-one elementary factors times a constant unitary.

    Raises:
        ReconstructionFailed: If the factors do not multiply back to the loop.
    """
    cfg = config or LoopConfig()
    levels, constant = _peel_all(loop, cfg)
    factors = [
        ElementaryFactor(p, tol=cfg.projection_tol)
        for q in levels
        for p in split_projection(q)
    ]
    result = Factorization(
        n=loop.n,
        rank_one_factors=factors,
        degree_projections=levels,
        constant=constant,
    )
    residual = _circle_distance(result.reconstruct(), loop.body, cfg.samples)
    if residual > cfg.reconstruction_tol:
        raise ReconstructionFailed(
            f"Factorization does not reconstruct the loop ({residual:.3e})",
            residual=residual,
        )
    logger.info(
        "Factorized loop: N=%d genus=%d levels=%d rank-one factors=%d",
        loop.n,
        loop.genus,
        len(levels),
        len(factors),
    )
    return result


def compose(
    factors: Sequence[Union[ElementaryFactor, np.ndarray]],
    unitary: np.ndarray,
    config: Optional[LoopConfig] = None,
) -> PolyLoop:
    """Multiply elementary factors and a constant unitary into a certified loop.

    Raises:
        InvalidProjection: If a factor matrix is not a projection.
        NonUnitary: If ``unitary`` is not unitary within the projection tolerance.
    """
    cfg = config or LoopConfig()
    v = np.asarray(unitary, dtype=np.complex128)
    defect = matrix_unitarity_defect(v)
    if defect > cfg.projection_tol:
        raise NonUnitary(f"Constant factor is not unitary ({defect:.3e})", defect=defect)

    body = MatPoly.identity(v.shape[0])
    for item in factors:
        factor = item if isinstance(item, ElementaryFactor) else ElementaryFactor(item, tol=cfg.projection_tol)
        if factor.n != v.shape[0]:
            raise ShapeMismatch(
                "Factor size does not match the constant unitary",
                context={"factor": factor.n, "unitary": v.shape[0]},
            )
        body = mul(body, factor.as_poly())
    return certify_loop(mul(body, MatPoly.constant(v)), config=cfg)


# ---------------------------------------------------------------------------
# Coefficient form A(z) = V (1 - Q_1 + zQ_1) ... (1 - Q_(g-1) + zQ_(g-1))
# ---------------------------------------------------------------------------


@dataclass
class CoefficientForm:
    unitary: np.ndarray
    projections: list[np.ndarray]

    @property
    def genus(self) -> int:
        return len(self.projections) + 1

    def as_poly(self) -> MatPoly:
        body = MatPoly.constant(self.unitary)
        for q in self.projections:
            body = mul(body, ElementaryFactor(q).as_poly())
        return body

    def bottom(self) -> np.ndarray:
        """V prod (1 - Q_j), the constant coefficient."""
        n = self.unitary.shape[0]
        return self.unitary @ reduce(np.matmul, [np.eye(n) - q for q in self.projections], np.eye(n))

    def top(self) -> np.ndarray:
        """V prod Q_j, the leading coefficient."""
        n = self.unitary.shape[0]
        return self.unitary @ reduce(np.matmul, self.projections, np.eye(n))


def coefficient_form(loop: PolyLoop, config: Optional[LoopConfig] = None) -> CoefficientForm:
    """Write the loop as V times a product of elementary factors.

    Peeling gives A = prod (1 - P_j + zP_j) V; conjugating each P_j by V
    moves the constant to the left: Q_j = V* P_j V.

    Raises:
        ReconstructionFailed: If the bottom/top coefficient identities or the
            full product disagree with the loop.
    """
    cfg = config or LoopConfig()
    levels, v = _peel_all(loop, cfg)
    form = CoefficientForm(
        unitary=v,
        projections=[v.conj().T @ p @ v for p in levels],
    )

    length = loop.genus
    residual = max(
        float(np.linalg.norm(loop.coefficient(0) - form.bottom(), 2)),
        float(np.linalg.norm(loop.coefficient(loop.degree) - form.top(), 2)),
        float(np.max(np.abs(form.as_poly().padded(length) - loop.body.padded(length)))),
    )
    if residual > cfg.reconstruction_tol:
        raise ReconstructionFailed(
            f"Coefficient form does not match the loop ({residual:.3e})",
            residual=residual,
        )
    return form


def from_coefficient_form(
    unitary: np.ndarray,
    projections: Sequence[np.ndarray],
    config: Optional[LoopConfig] = None,
) -> PolyLoop:
    """Build and certify V (1 - Q_1 + zQ_1) ... (1 - Q_m + zQ_m)."""
    cfg = config or LoopConfig()
    v = np.asarray(unitary, dtype=np.complex128)
    defect = matrix_unitarity_defect(v)
    if defect > cfg.projection_tol:
        raise NonUnitary(f"Constant factor is not unitary ({defect:.3e})", defect=defect)
    for q in projections:
        ElementaryFactor(q, tol=cfg.projection_tol)
    form = CoefficientForm(unitary=v, projections=[np.asarray(q, dtype=np.complex128) for q in projections])
    return certify_loop(form.as_poly(), config=cfg)
