"""Error taxonomy for loopbank.

Three families sit under LoopbankError, each tied to a CLI exit code:
InputError (2) for documents and arguments that cannot be used as given,
PreconditionError (3) for mathematical preconditions the input violates,
InternalError (4) for assertions the underlying theorems forbid from failing.
"""


class LoopbankError(Exception):
    """Base exception for all loopbank errors."""

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        reason: str = "unknown",
        context: dict | None = None,
    ):
        super().__init__(message)
        self.reason = reason
        self.context = context or {}


# ---------------------------------------------------------------------------
# Input errors (exit 2)
# ---------------------------------------------------------------------------


class InputError(LoopbankError):
    """The input document or argument is malformed or invalid."""

    exit_code = 2


class SchemaError(InputError):
    """A document failed to parse or did not match its schema."""

    def __init__(
        self,
        message: str,
        raw: str | None = None,
        context: dict | None = None,
    ):
        super().__init__(message, reason="schema", context=context)
        self.raw = raw


class ShapeMismatch(InputError):
    """Matrix or polynomial shapes are incompatible with the operation."""

    def __init__(self, message: str, context: dict | None = None):
        super().__init__(message, reason="shape_mismatch", context=context)


class OffCircle(InputError):
    """A polynomial was evaluated at a point not on the unit circle."""

    def __init__(self, message: str, modulus: float, context: dict | None = None):
        super().__init__(message, reason="off_circle", context=context)
        self.modulus = modulus


class NonUnitary(InputError):
    """A loop, bank or constant matrix failed its unitarity test."""

    def __init__(self, message: str, defect: float, context: dict | None = None):
        super().__init__(message, reason="non_unitary", context=context)
        self.defect = defect


class InvalidProjection(InputError):
    """A matrix offered as an orthogonal projection is not Hermitian idempotent."""

    def __init__(self, message: str, defect: float, context: dict | None = None):
        super().__init__(message, reason="invalid_projection", context=context)
        self.defect = defect


class NotUnitVector(InputError):
    """A vector expected to have norm one does not."""

    def __init__(self, message: str, norm: float, context: dict | None = None):
        super().__init__(message, reason="not_unit_vector", context=context)
        self.norm = norm


class ScaleMismatch(InputError):
    """Two objects that must share the scale N do not."""

    def __init__(self, message: str, context: dict | None = None):
        super().__init__(message, reason="scale_mismatch", context=context)


# ---------------------------------------------------------------------------
# Mathematical preconditions (exit 3)
# ---------------------------------------------------------------------------


class PreconditionError(LoopbankError):
    """The input is well formed but violates a mathematical precondition."""

    exit_code = 3


class NotMonomial(PreconditionError):
    """The determinant of a supposed loop is not a monomial."""

    def __init__(self, message: str, residual: float, context: dict | None = None):
        super().__init__(message, reason="not_monomial", context=context)
        self.residual = residual


class DegreeZero(PreconditionError):
    """A factor cannot be peeled from a constant loop."""

    def __init__(self, message: str, context: dict | None = None):
        super().__init__(message, reason="degree_zero", context=context)


class RankAmbiguous(PreconditionError):
    """A singular value sits too close to the rank threshold to decide."""

    def __init__(
        self,
        message: str,
        singular_value: float,
        threshold: float,
        context: dict | None = None,
    ):
        super().__init__(message, reason="rank_ambiguous", context=context)
        self.singular_value = singular_value
        self.threshold = threshold


class RowConditionViolated(PreconditionError):
    """Row data fails the orthogonality relations of a unitary first row."""

    def __init__(
        self,
        message: str,
        j: int,
        residual: float,
        context: dict | None = None,
    ):
        super().__init__(message, reason="row_condition", context=context)
        self.j = j
        self.residual = residual


class QMFConditionViolated(PreconditionError):
    """A filter or low-pass candidate fails the quadrature mirror condition."""

    def __init__(self, message: str, defect: float, context: dict | None = None):
        super().__init__(message, reason="qmf_condition", context=context)
        self.defect = defect


class LowPassViolated(PreconditionError):
    """The low-pass normalization m0(1) = sqrt(N) fails."""

    def __init__(self, message: str, defect: float, context: dict | None = None):
        super().__init__(message, reason="lowpass", context=context)
        self.defect = defect


# ---------------------------------------------------------------------------
# Internal assertions (exit 4)
# ---------------------------------------------------------------------------


class InternalError(LoopbankError):
    """A computed object contradicts a theorem; indicates a numerical or logic fault."""

    exit_code = 4


class CornerLeak(InternalError):
    """An adjoint isometry maps a corner basis vector outside the corner."""

    def __init__(self, message: str, index: int, context: dict | None = None):
        super().__init__(message, reason="corner_leak", context=context)
        self.index = index


class BlockFormViolated(InternalError):
    """lambda0 is one but A(1)^-1 A(z) is not block diagonal."""

    def __init__(self, message: str, residual: float, context: dict | None = None):
        super().__init__(message, reason="block_form", context=context)
        self.residual = residual


class ReconstructionFailed(InternalError):
    """A factorization does not multiply back to the loop it came from."""

    def __init__(self, message: str, residual: float, context: dict | None = None):
        super().__init__(message, reason="reconstruction", context=context)
        self.residual = residual
