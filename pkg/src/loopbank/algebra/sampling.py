"""Random unitaries, projections and loops for experiments and tests.

Every generator takes a numpy Generator so corpora are reproducible from a seed.
"""

from typing import Optional

import numpy as np
import scipy.linalg

from loopbank.algebra.cpoly import MatPoly, mul
from loopbank.algebra.loop import (
    ElementaryFactor,
    LoopConfig,
    PolyLoop,
    certify_loop,
    compose,
    from_coefficient_form,
)
from loopbank.errors import ShapeMismatch


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary (QR of a Ginibre matrix with phase correction)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = scipy.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = scipy.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_unit_vector(rng: np.random.Generator, n: int, real: bool = False) -> np.ndarray:
    v = rng.standard_normal(n)
    if not real:
        v = v + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_projection(rng: np.random.Generator, n: int, rank: int) -> np.ndarray:
    basis = random_unitary(rng, n)[:, :rank]
    return basis @ basis.conj().T


def random_elementary_factors(
    rng: np.random.Generator, n: int, count: int
) -> list[ElementaryFactor]:
    """``count`` independent rank-one elementary factors."""
    return [ElementaryFactor(random_projection(rng, n, 1)) for _ in range(count)]


def random_loop(
    rng: np.random.Generator,
    n: int,
    genus: int,
    config: Optional[LoopConfig] = None,
) -> PolyLoop:
    """V (1 - Q_1 + zQ_1) ... with genus - 1 levels of random rank in [1, n-1].

    For n = 1 every level is the full identity, giving V z^(genus-1).
    """
    projections = []
    for _ in range(genus - 1):
        rank = int(rng.integers(1, n)) if n > 1 else 1
        projections.append(random_projection(rng, n, rank))
    return from_coefficient_form(random_unitary(rng, n), projections, config)


def random_genus_two(
    rng: np.random.Generator,
    n: int,
    rank: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray, PolyLoop]:
    """Random (V, Q) and the genus-two loop V (1 - Q + zQ)."""
    if rank is None:
        rank = int(rng.integers(1, n))
    v = random_unitary(rng, n)
    q = random_projection(rng, n, rank)
    return v, q, from_coefficient_form(v, [q])


def random_factor_loop(
    rng: np.random.Generator,
    n: int,
    count: int,
) -> PolyLoop:
    """Product of ``count`` random rank-one factors times a random unitary."""
    return compose(random_elementary_factors(rng, n, count), random_unitary(rng, n))


def lowpass_normalizer(n: int) -> np.ndarray:
    """Unitary DFT matrix; its first row is (1, ..., 1) / sqrt(n)."""
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def random_lowpass_loop(
    rng: np.random.Generator,
    n: int,
    genus: int,
    config: Optional[LoopConfig] = None,
) -> PolyLoop:
    """Random loop with A(1) equal to the DFT matrix, so A_0j(1) = 1/sqrt(n)."""
    base = random_loop(rng, n, genus, config)
    at_one = base.body.coeffs.sum(axis=0)
    shift = lowpass_normalizer(n) @ at_one.conj().T
    return certify_loop(mul(MatPoly.constant(shift), base.body), config=config)


def block_loop(unitary: np.ndarray, inner: PolyLoop) -> PolyLoop:
    """V ((1) (+) B(z)): a loop whose normalized form splits off a 1x1 block."""
    n = inner.n + 1
    coeffs = np.zeros((inner.genus, n, n), dtype=np.complex128)
    coeffs[0, 0, 0] = 1.0
    coeffs[:, 1:, 1:] = inner.body.coeffs
    return certify_loop(mul(MatPoly.constant(unitary), MatPoly(coeffs)))


def _unit_in_span(rng: np.random.Generator, n: int, support: list[int]) -> np.ndarray:
    w = np.zeros(n, dtype=np.complex128)
    w[support] = random_unit_vector(rng, len(support))
    return w


def reducible_genus_two(rng: np.random.Generator, n: int, case: str) -> PolyLoop:
    """Genus-two loop V (1 - Q + zQ) on one of the reducible strata.

    ``case`` is one of:
        "lambda0": Q_00 = 0 (lambda_0 = 1), needs n >= 3.
        "tail": Q_(N-1,N-1) = 0 and Q_(N-2,N-2) = 1, needs n >= 3.
        "both": both conditions; n = 3 uses Q = diag(0, 1, 0).
    """
    if n < 3:
        raise ShapeMismatch("Reducible strata are defined for n >= 3", context={"n": n})
    below = n - 2
    if case == "lambda0":
        u = _unit_in_span(rng, n, list(range(1, n)))
        q = np.outer(u, u.conj())
    elif case == "tail":
        w = _unit_in_span(rng, n, list(range(0, below)))
        q = np.outer(w, w.conj())
        q[below, below] += 1.0
    elif case == "both":
        q = np.zeros((n, n), dtype=np.complex128)
        q[below, below] = 1.0
        if n >= 4:
            w = _unit_in_span(rng, n, list(range(1, below)))
            q += np.outer(w, w.conj())
    else:
        raise ShapeMismatch(f"Unknown stratum {case!r}", context={"case": case})
    return from_coefficient_form(random_unitary(rng, n), [q])
