"""The completely positive map sigma(X) = sum_i V_i^B X V_i^A* as a matrix.

Operators X: K_A -> K_B are vectorized row-major, so X[k, l] (the
coefficient of E_(-k,-l)) sits at index k * dim_A + l and
vec(V X W*) = (V kron conj(W)) vec(X). With this convention the
Hilbert-Schmidt adjoint sigma*(X) = sum_i V_i^B* X V_i^A is the conjugate
transpose of the matrix.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from loopbank.cuntz.corner import CuntzConfig, RepModel
from loopbank.errors import ScaleMismatch, ShapeMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SigmaMatrix:
    matrix: np.ndarray
    model_b: RepModel
    model_a: RepModel

    @property
    def shape_out(self) -> tuple[int, int]:
        """Shape of the operators X the map acts on (dim K_B, dim K_A)."""
        return (self.model_b.dim, self.model_a.dim)

    @property
    def is_square(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1]

    def index(self, k: int, l: int) -> int:
        """Vector index of E_(-k,-l)."""
        return k * self.model_a.dim + l

    def entry(self, out: tuple[int, int], inp: tuple[int, int]) -> complex:
        """Coefficient of E_out in sigma(E_inp)."""
        return complex(self.matrix[self.index(*out), self.index(*inp)])

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (self.matrix @ np.asarray(x).reshape(-1)).reshape(self.shape_out)

    def adjoint_apply(self, x: np.ndarray) -> np.ndarray:
        """sigma*(X) = sum_i V_i^B* X V_i^A, computed from the isometries."""
        vb, va = self.model_b.v_mats, self.model_a.v_mats
        return np.einsum("iba,bc,icd->ad", vb.conj(), np.asarray(x), va)

    def adjoint_defect(self) -> float:
        """max |matrix(sigma*) - matrix(sigma)^H|, sigma* built from rank-one images."""
        dim = self.matrix.shape[1]
        built = np.zeros((dim, self.matrix.shape[0]), dtype=np.complex128)
        rows, cols = self.shape_out
        for idx in range(self.matrix.shape[0]):
            unit = np.zeros(rows * cols, dtype=np.complex128)
            unit[idx] = 1.0
            built[:, idx] = self.adjoint_apply(unit.reshape(rows, cols)).reshape(-1)
        return float(np.max(np.abs(built - self.matrix.conj().T)))


def sigma_matrix(model_b: RepModel, model_a: RepModel) -> SigmaMatrix:
    """Matrix of X -> sum_i V_i^B X V_i^A* on operators K_A -> K_B.

    Raises:
        ScaleMismatch: If the two models have different N.
    """
    if model_b.n != model_a.n:
        raise ScaleMismatch(
            "Both loops must have the same scale",
            context={"n_b": model_b.n, "n_a": model_a.n},
        )
    vb, va = model_b.v_mats, model_a.v_mats
    matrix = sum(np.kron(vb[i], va[i].conj()) for i in range(model_a.n))
    return SigmaMatrix(matrix=matrix, model_b=model_b, model_a=model_a)


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------


def cluster_eigenvalues(values: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Group eigenvalues closer than ``tol``; returns (mean, multiplicity) pairs.

    Ordered by decreasing modulus, then by argument.
    """
    groups: list[list[complex]] = []
    for value in sorted(values, key=lambda v: (v.real, v.imag)):
        for group in groups:
            if abs(np.mean(group) - value) <= tol:
                group.append(value)
                break
        else:
            groups.append([value])
    clusters = [(complex(np.mean(g)), len(g)) for g in groups]
    clusters.sort(key=lambda c: (-round(abs(c[0]), 9), round(float(np.angle(c[0])), 9)))
    return clusters


def multiset_distance(a, b) -> float:
    """Largest gap in the best one-to-one matching of two equal-size multisets."""
    a = np.asarray(a, dtype=np.complex128).reshape(-1)
    b = np.asarray(b, dtype=np.complex128).reshape(-1)
    if a.shape != b.shape:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, np.newaxis] - b[np.newaxis, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


@dataclass
class Spectrum:
    values: np.ndarray
    vectors: np.ndarray  # columns are right eigenvectors (vectorized operators)
    clusters: list[tuple[complex, int]] = field(default_factory=list)
    cluster_tol: float = 1e-7
    adjoint_consistent: bool = True
    diagnostic: Optional[str] = None

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def multiplicity(self, value: complex, tol: Optional[float] = None) -> int:
        """Algebraic multiplicity of ``value`` (count within the cluster tolerance)."""
        tol = self.cluster_tol if tol is None else tol
        return int(np.sum(np.abs(self.values - value) <= tol))

    def eigenvector_near(self, value: complex) -> np.ndarray:
        return self.vectors[:, int(np.argmin(np.abs(self.values - value)))]


def spectrum(S: SigmaMatrix, config: Optional[CuntzConfig] = None) -> Spectrum:
    """Eigen-decomposition of sigma, clustered, cross-checked against sigma*.

    A solver failure is reported in ``diagnostic`` rather than raised.
    """
    cfg = config or CuntzConfig()
    if not S.is_square:
        raise ShapeMismatch("Spectrum needs a square sigma matrix", context={"shape": list(S.matrix.shape)})
    try:
        values, vectors = scipy.linalg.eig(S.matrix)
        adjoint_values = scipy.linalg.eigvals(S.matrix.conj().T)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        logger.error("Eigen-solver failed on %s sigma matrix: %s", S.matrix.shape, exc)
        empty = np.zeros(0, dtype=np.complex128)
        return Spectrum(
            values=empty,
            vectors=np.zeros((S.matrix.shape[0], 0), dtype=np.complex128),
            cluster_tol=cfg.cluster_tol,
            adjoint_consistent=False,
            diagnostic=str(exc),
        )

    gap = multiset_distance(values, np.conj(adjoint_values))
    consistent = gap <= cfg.adjoint_tol
    if not consistent:
        logger.warning("Spectrum of sigma* is not the conjugate of sigma's (gap %.3e)", gap)
    clusters = cluster_eigenvalues(values, cfg.cluster_tol)
    logger.debug("Spectrum: %d eigenvalues in %d clusters", len(values), len(clusters))
    return Spectrum(
        values=values,
        vectors=vectors,
        clusters=clusters,
        cluster_tol=cfg.cluster_tol,
        adjoint_consistent=consistent,
    )


# ---------------------------------------------------------------------------
# Fixed points
# ---------------------------------------------------------------------------


def fixed_point_space(
    S: SigmaMatrix,
    tol: Optional[float] = None,
    config: Optional[CuntzConfig] = None,
) -> list[np.ndarray]:
    """Hilbert-Schmidt orthonormal basis of {X : sigma(X) = X}."""
    cfg = config or CuntzConfig()
    tol = cfg.fixed_tol if tol is None else tol
    if not S.is_square:
        raise ShapeMismatch("Fixed points need a square sigma matrix", context={"shape": list(S.matrix.shape)})
    _, s, vh = scipy.linalg.svd(S.matrix - np.eye(S.matrix.shape[0]))
    return [vh[i].conj().reshape(S.shape_out) for i in np.nonzero(s <= tol)[0]]


def span_residual(basis: list[np.ndarray], x: np.ndarray) -> float:
    """Distance from X to the span of an orthonormal basis, in HS norm."""
    target = np.asarray(x, dtype=np.complex128).reshape(-1)
    if not basis:
        return float(np.linalg.norm(target))
    frame = np.stack([b.reshape(-1) for b in basis], axis=1)
    return float(np.linalg.norm(target - frame @ (frame.conj().T @ target)))


def hermitian_basis(basis: list[np.ndarray], tol: float = 1e-8) -> list[np.ndarray]:
    """Orthonormal basis of Hermitian matrices for a *-closed span.

    Real and imaginary Hermitian parts of every element are stacked as real
    vectors; an orthonormal basis of their real span consists of Hermitian
    matrices that are HS-orthonormal as well.
    """
    if not basis:
        return []
    shape = basis[0].shape
    parts = []
    for x in basis:
        parts.append((x + x.conj().T) / 2)
        parts.append((x - x.conj().T) / 2j)
    real = np.stack([np.concatenate([p.real.reshape(-1), p.imag.reshape(-1)]) for p in parts], axis=1)
    u, s, _ = scipy.linalg.svd(real, full_matrices=False)
    keep = u[:, s > tol * max(1.0, s[0])]
    half = keep.shape[0] // 2
    return [(col[:half] + 1j * col[half:]).reshape(shape) for col in keep.T]
