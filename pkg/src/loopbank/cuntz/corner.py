"""Corner subspace K = span{e_0, e_-1, ..., e_-r} and the compressed isometries.

The loop A defines Cuntz isometries T_i on l^2(Z) whose adjoints act by
T_i* e_(j+Nl) = sum_k conj(A_(i,j)^(k)) e_(l-k). The finite set
{0, -1, ..., -r} with r = g + floor((g-1)/(N-1)) is invariant under these
maps and cyclic, so the representation is captured by the (r+1)x(r+1)
compressions V_i* = T_i*|K.

Basis index m in 0..r stands for e_-m throughout.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from loopbank.algebra.loop import PolyLoop
from loopbank.errors import CornerLeak, NonUnitary, ShapeMismatch

logger = logging.getLogger(__name__)


@dataclass
class CuntzConfig:
    """Tolerances for the representation analysis."""

    isometry_tol: float = 1e-10
    leak_tol: float = 1e-12
    cluster_tol: float = 1e-7
    fixed_tol: float = 1e-8
    algebra_tol: float = 1e-8
    adjoint_tol: float = 1e-6
    state_tol: float = 1e-10
    reduce_tol: float = 1e-9
    block_tol: float = 1e-9
    radius_tol: float = 1e-8
    seed: int = 0


def _check_scale(n: int, g: int) -> None:
    if n < 2 or g < 1:
        raise ShapeMismatch(
            "Corner size needs N >= 2 and g >= 1",
            context={"n": n, "genus": g},
        )


def corner_size(n: int, g: int) -> int:
    """r = g + floor((g - 1) / (N - 1)), which equals floor((gN - 1) / (N - 1))."""
    _check_scale(n, g)
    r = g + (g - 1) // (n - 1)
    assert r == (g * n - 1) // (n - 1)
    return r


def _images(m: int, n: int, g: int) -> list[int]:
    return [(m - k) // n for k in range(g * n) if (m - k) % n == 0]


def corner_size_oracle(n: int, g: int) -> int:
    """Corner size from the integer dynamics n -> (n - k)/N, k = 0..gN-1.

    Collects the recurrent integers (those with a path back to themselves)
    in a window that every orbit enters, closes them forward, and returns
    the depth of the resulting set, which must be an interval {0, ..., -r}.
    """
    _check_scale(n, g)
    window = range(-g * n, g * n + 1)

    def reachable(starts: list[int]) -> set[int]:
        seen: set[int] = set()
        queue = deque(starts)
        while queue:
            m = queue.popleft()
            if m in seen:
                continue
            seen.add(m)
            queue.extend(_images(m, n, g))
        return seen

    recurrent = [m for m in window if m in reachable(_images(m, n, g))]
    closure = reachable(recurrent)
    r = -min(closure)
    assert closure == set(range(-r, 1)), f"invariant set is not an interval: {sorted(closure)}"
    return r


@dataclass(frozen=True, eq=False)
class RepModel:
    """Compressions of the Cuntz isometries of a loop to the corner K."""

    loop: PolyLoop
    genus: int
    r: int
    adjoints: np.ndarray  # (N, r+1, r+1), adjoints[i] = matrix of V_i*

    @property
    def n(self) -> int:
        return self.loop.n

    @property
    def dim(self) -> int:
        return self.r + 1

    @property
    def v_mats(self) -> np.ndarray:
        return np.conj(np.transpose(self.adjoints, (0, 2, 1)))

    def isometry_defect(self) -> float:
        """||sum_i V_i V_i* - I_K||."""
        v = self.v_mats
        total = np.einsum("iab,icb->ac", v, v.conj())
        return float(np.linalg.norm(total - np.eye(self.dim), 2))


def corner_isometries(
    loop: PolyLoop,
    genus: Optional[int] = None,
    config: Optional[CuntzConfig] = None,
) -> RepModel:
    """Build V_i* column by column on e_-m, writing -m = j + Nl.

    Args:
        loop: Certified loop.
        genus: Corner genus; at least the loop's genus. Larger values pad the
            corner (used to compare loops of different genus).
        config: Tolerances.

    Raises:
        CornerLeak: If a basis vector is mapped outside K.
        NonUnitary: If sum_i V_i V_i* = I fails on K.
    """
    cfg = config or CuntzConfig()
    g = loop.genus if genus is None else genus
    if g < loop.genus:
        raise ShapeMismatch(
            "Corner genus cannot be smaller than the loop genus",
            context={"genus": g, "loop_genus": loop.genus},
        )
    n = loop.n
    r = corner_size(n, g)
    adjoints = np.zeros((n, r + 1, r + 1), dtype=np.complex128)

    for m in range(r + 1):
        j = (-m) % n
        l = (-m - j) // n
        for k in range(loop.genus):
            column = np.conj(loop.coefficient(k)[:, j])
            t = k - l
            if t <= r:
                adjoints[:, t, m] += column
            elif np.any(np.abs(column) > cfg.leak_tol):
                raise CornerLeak(
                    f"T*e_-{m} has a component on e_-{t}, outside the corner (r={r})",
                    index=m,
                    context={"target": t, "r": r},
                )

    model = RepModel(loop=loop, genus=g, r=r, adjoints=adjoints)
    defect = model.isometry_defect()
    if defect > cfg.isometry_tol:
        raise NonUnitary(
            f"Corner isometries violate sum V_i V_i* = I ({defect:.3e})",
            defect=defect,
        )
    logger.debug("Corner model: N=%d genus=%d r=%d", n, g, r)
    return model


def word_isometries(model: RepModel, length: int) -> dict[tuple[int, ...], np.ndarray]:
    """V_I = V_(i_1) ... V_(i_L) on K for every word I of the given length."""
    words: dict[tuple[int, ...], np.ndarray] = {(): np.eye(model.dim, dtype=np.complex128)}
    v = model.v_mats
    for _ in range(length):
        words = {word + (i,): m @ v[i] for word, m in words.items() for i in range(model.n)}
    return words


def word_completeness_defect(model: RepModel, length: int) -> float:
    """||sum_|I|=L V_I V_I* - I_K||; the ranges of the words tile K at every length."""
    total = sum(m @ m.conj().T for m in word_isometries(model, length).values())
    return float(np.linalg.norm(total - np.eye(model.dim), 2))
