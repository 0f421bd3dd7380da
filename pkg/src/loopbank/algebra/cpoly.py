"""Complex matrix polynomials and Laurent polynomials.

A MatPoly stores coefficients densely as an array of shape
(degree + 1, rows, cols), coefficient k multiplying z**k. A LaurentMatPoly
adds an offset ``min_deg`` so negative powers can be represented; products
with adjoints land there. Both are immutable and trimmed on construction.
"""

import logging
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from loopbank.errors import OffCircle, ShapeMismatch

logger = logging.getLogger(__name__)

DEFAULT_TRIM_TOL = 1e-11
CIRCLE_TOL = 1e-12


def _as_coefficient_array(coeffs) -> np.ndarray:
    arr = np.array(coeffs, dtype=np.complex128)
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    if arr.ndim != 3 or 0 in arr.shape:
        raise ShapeMismatch(
            "Coefficients must be a non-empty list of matrices",
            context={"shape": list(arr.shape)},
        )
    return arr


def _op_norms(coeffs: np.ndarray) -> np.ndarray:
    return np.linalg.norm(coeffs, ord=2, axis=(1, 2))


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def circle_points(count: int, upper: float = 2 * np.pi) -> np.ndarray:
    """Return ``count`` equispaced points e^{ix}, x in [0, upper)."""
    return np.exp(1j * np.linspace(0.0, upper, count, endpoint=False))


@dataclass(frozen=True, eq=False)
class MatPoly:
    """Matrix polynomial sum_k z^k coeffs[k]."""

    coeffs: np.ndarray
    trim_tol: float = field(default=DEFAULT_TRIM_TOL, repr=False)

    def __post_init__(self) -> None:
        arr = _as_coefficient_array(self.coeffs)
        norms = _op_norms(arr)
        top = len(arr)
        while top > 1 and norms[top - 1] <= self.trim_tol:
            top -= 1
        object.__setattr__(self, "coeffs", _freeze(arr[:top].copy()))

    @classmethod
    def constant(cls, matrix) -> "MatPoly":
        return cls(np.asarray(matrix, dtype=np.complex128)[np.newaxis])

    @classmethod
    def identity(cls, n: int) -> "MatPoly":
        return cls.constant(np.eye(n))

    @classmethod
    def scalar(cls, coeffs) -> "MatPoly":
        """1x1 polynomial from a flat coefficient list."""
        flat = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
        return cls(flat[:, np.newaxis, np.newaxis])

    @property
    def rows(self) -> int:
        return self.coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[2]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def coefficient(self, k: int) -> np.ndarray:
        """Coefficient of z^k, zero outside the stored range."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return np.zeros((self.rows, self.cols), dtype=np.complex128)

    def padded(self, length: int) -> np.ndarray:
        """Coefficient array zero-padded (never truncated) to ``length`` terms."""
        out = np.zeros((max(length, len(self.coeffs)), self.rows, self.cols), dtype=np.complex128)
        out[: len(self.coeffs)] = self.coeffs
        return out


@dataclass(frozen=True, eq=False)
class LaurentMatPoly:
    """Matrix Laurent polynomial sum_j z^(min_deg + j) coeffs[j]."""

    min_deg: int
    coeffs: np.ndarray
    trim_tol: float = field(default=DEFAULT_TRIM_TOL, repr=False)

    def __post_init__(self) -> None:
        arr = _as_coefficient_array(self.coeffs)
        norms = _op_norms(arr)
        keep = np.nonzero(norms > self.trim_tol)[0]
        if len(keep) == 0:
            object.__setattr__(self, "min_deg", 0)
            object.__setattr__(self, "coeffs", _freeze(np.zeros_like(arr[:1])))
            return
        lo, hi = int(keep[0]), int(keep[-1])
        object.__setattr__(self, "min_deg", int(self.min_deg) + lo)
        object.__setattr__(self, "coeffs", _freeze(arr[lo : hi + 1].copy()))

    @classmethod
    def from_matpoly(cls, p: MatPoly) -> "LaurentMatPoly":
        return cls(0, p.coeffs, trim_tol=p.trim_tol)

    @property
    def rows(self) -> int:
        return self.coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[2]

    @property
    def max_deg(self) -> int:
        return self.min_deg + len(self.coeffs) - 1

    def coefficient(self, k: int) -> np.ndarray:
        j = k - self.min_deg
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return np.zeros((self.rows, self.cols), dtype=np.complex128)

    def to_matpoly(self) -> MatPoly:
        """Convert to an ordinary polynomial; fails if negative powers remain."""
        if self.min_deg < 0:
            raise ShapeMismatch(
                "Laurent polynomial has negative powers",
                context={"min_deg": self.min_deg},
            )
        out = np.zeros((self.max_deg + 1, self.rows, self.cols), dtype=np.complex128)
        out[self.min_deg :] = self.coeffs
        return MatPoly(out, trim_tol=self.trim_tol)


AnyPoly = Union[MatPoly, LaurentMatPoly]


def _laurent(p: AnyPoly) -> LaurentMatPoly:
    return p if isinstance(p, LaurentMatPoly) else LaurentMatPoly.from_matpoly(p)


def add(p: AnyPoly, q: AnyPoly) -> AnyPoly:
    """Coefficient-wise sum, trimmed."""
    if (p.rows, p.cols) != (q.rows, q.cols):
        raise ShapeMismatch(
            "Cannot add polynomials of different shapes",
            context={"left": [p.rows, p.cols], "right": [q.rows, q.cols]},
        )
    if isinstance(p, MatPoly) and isinstance(q, MatPoly):
        length = max(len(p.coeffs), len(q.coeffs))
        return MatPoly(p.padded(length) + q.padded(length), trim_tol=p.trim_tol)

    lp, lq = _laurent(p), _laurent(q)
    lo = min(lp.min_deg, lq.min_deg)
    hi = max(lp.max_deg, lq.max_deg)
    out = np.zeros((hi - lo + 1, p.rows, p.cols), dtype=np.complex128)
    for part in (lp, lq):
        start = part.min_deg - lo
        out[start : start + len(part.coeffs)] += part.coeffs
    return LaurentMatPoly(lo, out, trim_tol=lp.trim_tol)


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((len(a) + len(b) - 1, a.shape[1], b.shape[2]), dtype=np.complex128)
    for i, ai in enumerate(a):
        out[i : i + len(b)] += np.einsum("rm,kmc->krc", ai, b)
    return out


def mul(p: AnyPoly, q: AnyPoly) -> AnyPoly:
    """Polynomial product p·q (matrix product of coefficients, convolved)."""
    if p.cols != q.rows:
        raise ShapeMismatch(
            "Inner dimensions do not match",
            context={"left": [p.rows, p.cols], "right": [q.rows, q.cols]},
        )
    if isinstance(p, MatPoly) and isinstance(q, MatPoly):
        return MatPoly(_convolve(p.coeffs, q.coeffs), trim_tol=p.trim_tol)
    lp, lq = _laurent(p), _laurent(q)
    return LaurentMatPoly(
        lp.min_deg + lq.min_deg,
        _convolve(lp.coeffs, lq.coeffs),
        trim_tol=lp.trim_tol,
    )


def adjoint(p: AnyPoly) -> LaurentMatPoly:
    """Pointwise conjugate transpose on the circle: z^k C -> z^-k C*."""
    lp = _laurent(p)
    flipped = np.conj(np.transpose(lp.coeffs[::-1], (0, 2, 1)))
    return LaurentMatPoly(-lp.max_deg, flipped, trim_tol=lp.trim_tol)


def evaluate(p: AnyPoly, z: complex) -> np.ndarray:
    """Evaluate at a point of the unit circle.

    Raises:
        OffCircle: If |z| differs from 1 by more than 1e-12.
    """
    modulus = abs(z)
    if abs(modulus - 1.0) > CIRCLE_TOL:
        raise OffCircle(f"|z| = {modulus!r} is not on the unit circle", modulus=modulus)

    acc = p.coeffs[-1].copy()
    for c in p.coeffs[-2::-1]:
        acc = acc * z + c
    if isinstance(p, LaurentMatPoly) and p.min_deg != 0:
        acc = acc * z**p.min_deg
    return acc


def evaluate_on(p: AnyPoly, points) -> np.ndarray:
    """Evaluate at many circle points at once; result has shape (count, rows, cols)."""
    points = np.asarray(points, dtype=np.complex128).reshape(-1)
    deviation = float(np.max(np.abs(np.abs(points) - 1.0))) if points.size else 0.0
    if deviation > CIRCLE_TOL:
        raise OffCircle("Sample points are not on the unit circle", modulus=1.0 + deviation)
    powers = points[:, np.newaxis] ** np.arange(len(p.coeffs))
    values = np.einsum("kj,jab->kab", powers, p.coeffs)
    if isinstance(p, LaurentMatPoly) and p.min_deg != 0:
        values = values * (points ** p.min_deg)[:, np.newaxis, np.newaxis]
    return values


def det_poly(p: MatPoly) -> MatPoly:
    """Scalar polynomial det p(z), by evaluation and interpolation.

    det p has degree at most rows * degree, so rows * degree + 1 samples at
    roots of unity determine it; the inverse transform is a DFT.
    """
    if not p.is_square:
        raise ShapeMismatch(
            "Determinant requires a square polynomial",
            context={"shape": [p.rows, p.cols]},
        )
    count = p.rows * p.degree + 1
    points = circle_points(count)
    powers = points[:, np.newaxis] ** np.arange(len(p.coeffs))
    values = np.einsum("kj,jab->kab", powers, p.coeffs)
    dets = np.linalg.det(values)
    coeffs = np.fft.fft(dets) / count
    logger.debug("det_poly: %d samples for %dx%d degree %d", count, p.rows, p.cols, p.degree)
    return MatPoly.scalar(coeffs)
