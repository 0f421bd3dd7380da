"""Representation analysis – irreducibility, decomposition, Cuntz states, intertwiners.

The fixed points of sigma on B(K) correspond to the commutant of the
representation, so the loop defines an irreducible representation exactly
when the fixed space is spanned by I_K. When the fixed space is an abelian
*-algebra its minimal projections pick out the irreducible summands.

For genus two and N >= 3 the spectrum of sigma has a closed form in
lambda = A^(0)* A^(0) = 1 - Q; the helpers at the end of this module
evaluate it for cross-checks.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from loopbank.algebra.loop import PolyLoop
from loopbank.cuntz.corner import CuntzConfig, RepModel, corner_isometries
from loopbank.cuntz.reduction import Reduction, lambda0, reduce_scale
from loopbank.cuntz.sigma import (
    SigmaMatrix,
    Spectrum,
    cluster_eigenvalues,
    fixed_point_space,
    hermitian_basis,
    sigma_matrix,
    span_residual,
    spectrum,
)
from loopbank.filters.bank import loop_to_filters
from loopbank.observability.logging import NullObserver, StageObserver, observed

logger = logging.getLogger(__name__)


@dataclass
class MinimalProjection:
    matrix: np.ndarray
    rank: int
    diagonal: bool  # diagonal in the basis e_-k
    cyclic_indices: list[int]  # k with e_-k in the range


@dataclass
class CuntzState:
    """e_-k with T_i* e_-k = conj(v_i) e_-k for all i."""

    k: int
    v: np.ndarray
    filter_residual: float  # max coefficient gap in sum conj(v_i) m_i = z^((N-1)k)


@dataclass
class RepReport:
    n: int
    genus: int
    r: int
    spectrum: Spectrum
    mult_one: int
    fixed_basis: list[np.ndarray]
    irreducible: bool
    fixed_set_algebra: bool
    fixed_set_abelian: bool
    minimal_projections: list[MinimalProjection] = field(default_factory=list)
    decomposition_resolved: bool = False
    summand_fixed_dims: Optional[np.ndarray] = None
    cuntz_states: list[CuntzState] = field(default_factory=list)
    lambda0: float = 0.0
    reduction: Optional[Reduction] = None
    genus_two_reducible: Optional[bool] = None
    findings: list[str] = field(default_factory=list)

    @property
    def spectral_radius(self) -> float:
        return self.spectrum.spectral_radius

    @property
    def fixed_dim(self) -> int:
        return len(self.fixed_basis)


@dataclass
class IntertwinerReport:
    dimension: int
    basis: list[np.ndarray]
    disjoint: bool
    e00_scalar: complex  # sum_i conj(A_i0^(0)) B_i0^(0)
    e00_fixed: bool
    consistent: bool  # e00_fixed holds exactly when e00_scalar = 1
    genus: int  # common corner genus


# ---------------------------------------------------------------------------
# Fixed-set structure
# ---------------------------------------------------------------------------


def _identity_in_span(basis: list[np.ndarray], dim: int, tol: float) -> bool:
    return span_residual(basis, np.eye(dim)) <= tol * np.sqrt(dim)


def fixed_set_flags(basis: list[np.ndarray], tol: float) -> tuple[bool, bool]:
    """(closed under products and adjoints, commutative) for a fixed-point basis."""
    algebra = True
    abelian = True
    for i, x in enumerate(basis):
        if span_residual(basis, x.conj().T) > tol:
            algebra = False
        for y in basis[i:]:
            if span_residual(basis, x @ y) > tol or span_residual(basis, y @ x) > tol:
                algebra = False
            if np.linalg.norm(x @ y - y @ x) > tol:
                abelian = False
    return algebra, abelian


def minimal_projections(
    basis: list[np.ndarray],
    config: Optional[CuntzConfig] = None,
) -> Optional[list[MinimalProjection]]:
    """Minimal projections of an abelian *-algebra given by an orthonormal basis.

    A random real combination of a Hermitian basis separates the joint
    eigenspaces; each eigenvalue cluster gives one minimal projection.
    Returns None when the count or the membership check does not come out.
    """
    cfg = config or CuntzConfig()
    hermitian = hermitian_basis(basis, tol=cfg.algebra_tol)
    if not hermitian:
        return None
    rng = np.random.default_rng(cfg.seed)
    weights = rng.standard_normal(len(hermitian))
    combined = sum(w * h for w, h in zip(weights, hermitian))
    values, vectors = scipy.linalg.eigh((combined + combined.conj().T) / 2)

    projections = []
    for value, _ in cluster_eigenvalues(values.astype(np.complex128), 1e-6):
        picked = vectors[:, np.abs(values - value.real) <= 1e-6]
        p = picked @ picked.conj().T
        if span_residual(basis, p) > cfg.algebra_tol * max(1.0, np.linalg.norm(p)):
            return None
        diag = np.real(np.diag(p))
        projections.append(
            MinimalProjection(
                matrix=p,
                rank=picked.shape[1],
                diagonal=bool(np.linalg.norm(p - np.diag(np.diag(p))) <= cfg.algebra_tol),
                cyclic_indices=[int(k) for k in np.nonzero(diag >= 1 - cfg.algebra_tol)[0]],
            )
        )
    if len(projections) != len(basis):
        return None
    projections.sort(key=lambda p: min(p.cyclic_indices) if p.cyclic_indices else p.matrix.shape[0])
    return projections


def summand_fixed_dims(S: SigmaMatrix, projections: list[MinimalProjection], tol: float) -> np.ndarray:
    """dim {X : sigma(X) = X, p_a X p_b = X} for every pair of minimal projections."""
    size = S.matrix.shape[0]
    eye = np.eye(size)
    dims = np.zeros((len(projections), len(projections)), dtype=int)
    for a, pa in enumerate(projections):
        for b, pb in enumerate(projections):
            corner = np.kron(pa.matrix, pb.matrix.T)
            stacked = np.vstack([S.matrix - eye, eye - corner])
            s = scipy.linalg.svdvals(stacked)
            dims[a, b] = int(np.sum(s <= tol))
    return dims


# ---------------------------------------------------------------------------
# Cuntz states
# ---------------------------------------------------------------------------


def cuntz_states(
    loop: PolyLoop,
    model: Optional[RepModel] = None,
    config: Optional[CuntzConfig] = None,
) -> list[CuntzState]:
    """Every k in 0..r with e_-k a joint eigenvector of the T_i*.

    Each hit is checked against the filter identity
    sum_i conj(v_i) m_i(z) = z^((N-1)k), coefficient by coefficient.
    """
    cfg = config or CuntzConfig()
    model = model or corner_isometries(loop, config=cfg)
    filters = np.stack(loop_to_filters(loop).filters)
    states = []
    for k in range(model.dim):
        column = model.adjoints[:, :, k]
        off = np.delete(column, k, axis=1)
        if np.max(np.abs(off), initial=0.0) > cfg.state_tol:
            continue
        vbar = column[:, k]
        combined = np.zeros(max(filters.shape[1], (loop.n - 1) * k + 1), dtype=np.complex128)
        combined[: filters.shape[1]] = vbar @ filters
        combined[(loop.n - 1) * k] -= 1.0
        residual = float(np.max(np.abs(combined)))
        if residual > cfg.state_tol:
            logger.warning("Cuntz state k=%d fails the filter identity (residual %.3e)", k, residual)
        states.append(CuntzState(k=k, v=np.conj(vbar), filter_residual=residual))
    return states


# ---------------------------------------------------------------------------
# Analysis entry points
# ---------------------------------------------------------------------------


def analyze(
    loop: PolyLoop,
    config: Optional[CuntzConfig] = None,
    observer: Optional[StageObserver] = None,
) -> RepReport:
    """Irreducibility and decomposition report for the representation of a loop."""
    cfg = config or CuntzConfig()
    obs = observer or NullObserver()
    findings: list[str] = []

    with observed(obs, "corner") as stage:
        model = corner_isometries(loop, config=cfg)
        stage["detail"] = f"r={model.r}"
    with observed(obs, "spectrum") as stage:
        S = sigma_matrix(model, model)
        eigs = spectrum(S, config=cfg)
        stage["detail"] = f"radius={eigs.spectral_radius:.6f}"
    if eigs.diagnostic:
        findings.append(f"eigen-solver failure: {eigs.diagnostic}")
    if not eigs.adjoint_consistent:
        findings.append("spectrum of sigma* is not the conjugate of the spectrum of sigma")
    if eigs.spectral_radius > 1 + cfg.radius_tol:
        findings.append(f"spectral radius {eigs.spectral_radius:.10f} exceeds 1 (genus {loop.genus})")
        logger.warning("Spectral radius %.10f > 1 for genus %d", eigs.spectral_radius, loop.genus)

    with observed(obs, "fixed_points") as stage:
        fixed = fixed_point_space(S, config=cfg)
        algebra, abelian = fixed_set_flags(fixed, cfg.algebra_tol)
        stage["detail"] = f"dim={len(fixed)}"
    irreducible = len(fixed) == 1 and _identity_in_span(fixed, model.dim, cfg.algebra_tol)
    mult_one = eigs.multiplicity(1.0)
    if mult_one < len(fixed):
        findings.append(f"geometric multiplicity {len(fixed)} exceeds algebraic {mult_one}")

    report = RepReport(
        n=loop.n,
        genus=loop.genus,
        r=model.r,
        spectrum=eigs,
        mult_one=mult_one,
        fixed_basis=fixed,
        irreducible=irreducible,
        fixed_set_algebra=algebra,
        fixed_set_abelian=abelian,
        findings=findings,
    )

    with observed(obs, "decomposition") as stage:
        if algebra and abelian:
            projections = minimal_projections(fixed, cfg)
            if projections is not None:
                report.minimal_projections = projections
                report.decomposition_resolved = True
                report.summand_fixed_dims = summand_fixed_dims(S, projections, cfg.fixed_tol)
                for p in projections:
                    if p.rank == 1 and not p.diagonal:
                        findings.append("rank-one fixed projection is not diagonal in the e_-k basis")
        else:
            findings.append("fixed set is not an abelian algebra; decomposition not resolved")
        stage["detail"] = f"summands={len(report.minimal_projections)}"

    with observed(obs, "cuntz_states") as stage:
        report.cuntz_states = cuntz_states(loop, model, cfg)
        stage["detail"] = f"states={len(report.cuntz_states)}"

    with observed(obs, "reduction") as stage:
        report.lambda0 = lambda0(loop)
        report.reduction = reduce_scale(loop, cfg, model=model)
        stage["detail"] = f"lambda0={report.lambda0:.12f}"

    if loop.genus == 2 and loop.n >= 3:
        report.genus_two_reducible = genus_two_reducible(loop, cfg.algebra_tol)
        if report.genus_two_reducible == irreducible:
            findings.append("closed-form reducibility test disagrees with the fixed-point space")
            logger.warning("Genus-two reducibility predicate disagrees with fixed-space dimension %d", len(fixed))

    logger.info(
        "Analysis: N=%d genus=%d r=%d fixed_dim=%d irreducible=%s states=%d lambda0=%.6f",
        loop.n,
        loop.genus,
        model.r,
        len(fixed),
        irreducible,
        len(report.cuntz_states),
        report.lambda0,
    )
    return report


def intertwiner_space(
    a: PolyLoop,
    b: PolyLoop,
    config: Optional[CuntzConfig] = None,
    padding: int = 0,
) -> IntertwinerReport:
    """Fixed points of sigma^(B,A) on corners of the common genus max(g_A, g_B) + padding.

    Raises:
        ScaleMismatch: If the loops have different N.
    """
    cfg = config or CuntzConfig()
    genus = max(a.genus, b.genus) + padding
    model_a = corner_isometries(a, genus=genus, config=cfg)
    model_b = corner_isometries(b, genus=genus, config=cfg)
    S = sigma_matrix(model_b, model_a)
    basis = fixed_point_space(S, config=cfg)

    scalar = complex(np.vdot(a.coefficient(0)[:, 0], b.coefficient(0)[:, 0]))
    e00 = np.zeros(S.shape_out, dtype=np.complex128)
    e00[0, 0] = 1.0
    e00_fixed = bool(np.max(np.abs(S.apply(e00) - e00)) <= cfg.fixed_tol)
    consistent = e00_fixed == (abs(scalar - 1.0) <= cfg.fixed_tol)
    if not consistent:
        logger.warning("E_00 fixed=%s but its sigma coefficient is %s", e00_fixed, scalar)
    logger.info("Intertwiners: genus=%d dimension=%d", genus, len(basis))
    return IntertwinerReport(
        dimension=len(basis),
        basis=basis,
        disjoint=not basis,
        e00_scalar=scalar,
        e00_fixed=e00_fixed,
        consistent=consistent,
        genus=genus,
    )


# ---------------------------------------------------------------------------
# Genus two closed forms (N >= 3)
# ---------------------------------------------------------------------------


def genus_two_lambdas(loop: PolyLoop) -> np.ndarray:
    """lambda = A^(0)* A^(0) = 1 - Q."""
    a0 = loop.coefficient(0)
    return a0.conj().T @ a0


def genus_two_spectrum(loop: PolyLoop) -> np.ndarray:
    """{0, 0, 0, 0, 1, lambda_0, lambda_(N-1) - lambda_(N-2), lambda_(0,N-1), conj(lambda_(0,N-1))}."""
    lam = genus_two_lambdas(loop)
    n = loop.n
    return np.array(
        [
            0,
            0,
            0,
            0,
            1,
            lam[0, 0],
            lam[n - 1, n - 1] - lam[n - 2, n - 2],
            lam[0, n - 1],
            np.conj(lam[0, n - 1]),
        ],
        dtype=np.complex128,
    )


def genus_two_eigenvectors(loop: PolyLoop) -> dict[str, tuple[complex, np.ndarray]]:
    """Closed-form eigenvectors of sigma on the 3x3 corner, keyed by eigenvalue label.

    The entry for lambda_(N-1) - lambda_(N-2) gives the diagonal part only;
    the computed eigenvector also carries E_(-1,-2) and E_(-2,-1) terms
    unless lambda_(N-2,N-1) vanishes.
    """
    lam = genus_two_lambdas(loop)
    n = loop.n
    l0 = lam[0, 0].real
    a1 = lam[n - 1, n - 1].real
    a2 = lam[n - 2, n - 2].real
    mu = a1 - a2

    e00 = np.zeros((3, 3), dtype=np.complex128)
    e00[0, 0] = 1.0
    diag_mu = np.diag([(1 - l0) * (1 - a1), (mu - l0) * (1 - a1), -a2 * (mu - l0)]).astype(np.complex128)
    upper = np.zeros((3, 3), dtype=np.complex128)
    upper[0, 1] = lam[n - 1, 0]
    upper[0, 2] = lam[n - 2, 0]
    lower = np.zeros((3, 3), dtype=np.complex128)
    lower[1, 0] = lam[0, n - 1]
    lower[2, 0] = lam[0, n - 2]
    return {
        "lambda0": (complex(l0), e00),
        "one": (1.0 + 0j, np.eye(3, dtype=np.complex128)),
        "lambda_diff": (complex(mu), diag_mu),
        "lambda_n1_0": (complex(lam[n - 1, 0]), upper),
        "lambda_0_n1": (complex(lam[0, n - 1]), lower),
    }


def genus_two_reducible(loop: PolyLoop, tol: float = 1e-8) -> bool:
    """Q_00 = 0, or Q_(N-1,N-1) = 0 together with Q_(N-2,N-2) = 1."""
    q = np.eye(loop.n) - genus_two_lambdas(loop)
    n = loop.n
    if abs(q[0, 0]) <= tol:
        return True
    return bool(abs(q[n - 1, n - 1]) <= tol and abs(q[n - 2, n - 2] - 1) <= tol)


def projection_entry(projection: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    """|<u, P v>|; at most 1/2 for orthogonal unit vectors u, v."""
    return float(abs(np.vdot(u, np.asarray(projection) @ v)))
