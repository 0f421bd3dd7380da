"""Pointwise completions of a unit first row.

For N = 2 the map (x1, x2) -> (-conj(x2), conj(x1)) completes any unit row
pointwise; applied to a polynomial row it produces Laurent polynomials. For
real rows of length 4 and 8 the quaternion and octonion multiplication
tables give orthogonal completions. The complex 4x4 analogue below is the
standard counterexample: it is not unitary for generic complex input.
"""

from dataclasses import dataclass

import numpy as np

from loopbank.algebra.cpoly import LaurentMatPoly, MatPoly, adjoint, circle_points, evaluate_on
from loopbank.errors import NotUnitVector, ShapeMismatch

UNIT_TOL = 1e-12

# Signed 1-based indices: entry (r, c) is sign * x[|s| - 1].
_QUATERNION_ROWS = (
    (1, 2, 3, 4),
    (-2, 1, -4, 3),
    (-3, 4, 1, -2),
    (-4, -3, 2, 1),
)

_OCTONION_ROWS = (
    (1, 2, 3, 4, 5, 6, 7, 8),
    (-2, 1, -4, 3, -6, 5, 8, -7),
    (-3, 4, 1, -2, -7, -8, 5, 6),
    (-4, -3, 2, 1, -8, 7, -6, 5),
    (-5, 6, 7, 8, 1, -2, -3, -4),
    (-6, -5, 8, -7, 2, 1, 4, -3),
    (-7, -8, -5, 6, 3, -4, 1, 2),
    (-8, 7, -6, -5, 4, 3, -2, 1),
)

# Same pattern as the quaternion table, with (sign, index, conjugate) entries.
_COMPLEX_ROWS = (
    ((1, 0, False), (1, 1, False), (1, 2, False), (1, 3, False)),
    ((-1, 1, True), (1, 0, True), (-1, 3, False), (1, 2, False)),
    ((-1, 2, True), (1, 3, False), (1, 0, True), (-1, 1, False)),
    ((-1, 3, False), (-1, 2, True), (1, 1, True), (1, 0, False)),
)


def _signed_table(x: np.ndarray, rows) -> np.ndarray:
    return np.array([[np.sign(s) * x[abs(s) - 1] for s in row] for row in rows])


def _require_unit(x: np.ndarray) -> None:
    norm = float(np.linalg.norm(x))
    if abs(norm - 1.0) > UNIT_TOL:
        raise NotUnitVector(f"Expected a unit vector, norm is {norm!r}", norm=norm)


@dataclass
class PointwiseCompletion:
    second_row: LaurentMatPoly  # 1 x 2
    loop: LaurentMatPoly  # 2 x 2
    polynomial: bool  # no negative powers survive


def daubechies_complete_pointwise(first_row: MatPoly, n: int = 2) -> PointwiseCompletion:
    """Complete a 1x2 row a(z) with (-conj(a_1(z)), conj(a_0(z))).

    On the circle conj(sum c_k z^k) = sum conj(c_k) z^-k, so the second row
    is a Laurent polynomial; it is a polynomial only in degenerate cases.

    Raises:
        ShapeMismatch: If N is not 2 or the row is not 1x2.
        NotUnitVector: If |a(z)| differs from 1 on the circle.
    """
    if n != 2 or (first_row.rows, first_row.cols) != (1, 2):
        raise ShapeMismatch(
            "Pointwise completion is defined for N = 2 rows only",
            context={"n": n, "shape": [first_row.rows, first_row.cols]},
        )
    norms = np.linalg.norm(evaluate_on(first_row, circle_points(32))[:, 0, :], axis=1)
    worst = float(np.max(np.abs(norms - 1.0)))
    if worst > 1e-10:
        raise NotUnitVector("First row is not a unit vector on the circle", norm=1.0 + worst)

    conj = adjoint(first_row)  # 2 x 1, entries conj(a_0), conj(a_1)
    second = np.stack([-conj.coeffs[:, 1, 0], conj.coeffs[:, 0, 0]], axis=-1)[:, np.newaxis, :]
    second_row = LaurentMatPoly(conj.min_deg, second)

    lo = min(0, second_row.min_deg)
    hi = max(first_row.degree, second_row.max_deg)
    coeffs = np.zeros((hi - lo + 1, 2, 2), dtype=np.complex128)
    for k in range(lo, hi + 1):
        coeffs[k - lo, 0] = first_row.coefficient(k)[0] if k >= 0 else 0.0
        coeffs[k - lo, 1] = second_row.coefficient(k)[0]
    loop = LaurentMatPoly(lo, coeffs)
    return PointwiseCompletion(second_row=second_row, loop=loop, polynomial=loop.min_deg >= 0)


def real_orthogonal_completion(x, n: int) -> np.ndarray:
    """Orthogonal matrix with first row x, from the quaternion (n=4) or octonion (n=8) table.

    Raises:
        ShapeMismatch: If n is not 4 or 8, or x has the wrong length or is complex.
        NotUnitVector: If ||x|| differs from 1 by more than 1e-12.
    """
    table = {4: _QUATERNION_ROWS, 8: _OCTONION_ROWS}.get(n)
    vec = np.asarray(x)
    if table is None or vec.shape != (n,):
        raise ShapeMismatch(
            "Real orthogonal completion exists here for n = 4 or 8 only",
            context={"n": n, "shape": list(vec.shape)},
        )
    if np.iscomplexobj(vec):
        if np.any(np.abs(vec.imag) > UNIT_TOL):
            raise ShapeMismatch("Real orthogonal completion needs a real vector")
        vec = vec.real
    vec = vec.astype(np.float64)
    _require_unit(vec)
    return _signed_table(vec, table)


def cayley_like_u4(z) -> np.ndarray:
    """The quaternion pattern with some entries conjugated, for complex unit z in C^4.

    Unitary for real input (where it equals the quaternion table) but not in
    general; no unitarity is claimed.

    Raises:
        ShapeMismatch: If z does not have four entries.
        NotUnitVector: If ||z|| differs from 1 by more than 1e-12.
    """
    vec = np.asarray(z, dtype=np.complex128)
    if vec.shape != (4,):
        raise ShapeMismatch("Expected a 4-vector", context={"shape": list(vec.shape)})
    _require_unit(vec)
    return np.array(
        [
            [sign * (np.conj(vec[idx]) if bar else vec[idx]) for sign, idx, bar in row]
            for row in _COMPLEX_ROWS
        ]
    )
