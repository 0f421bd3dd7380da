"""Error taxonomy for loopbank."""

from loopbank.errors.exceptions import (
    BlockFormViolated,
    CornerLeak,
    DegreeZero,
    InputError,
    InternalError,
    InvalidProjection,
    LoopbankError,
    LowPassViolated,
    NonUnitary,
    NotMonomial,
    NotUnitVector,
    OffCircle,
    PreconditionError,
    QMFConditionViolated,
    RankAmbiguous,
    ReconstructionFailed,
    RowConditionViolated,
    ScaleMismatch,
    SchemaError,
    ShapeMismatch,
)

__all__ = [
    "LoopbankError",
    "InputError",
    "SchemaError",
    "ShapeMismatch",
    "OffCircle",
    "NonUnitary",
    "InvalidProjection",
    "NotUnitVector",
    "ScaleMismatch",
    "PreconditionError",
    "NotMonomial",
    "DegreeZero",
    "RankAmbiguous",
    "RowConditionViolated",
    "QMFConditionViolated",
    "LowPassViolated",
    "InternalError",
    "CornerLeak",
    "BlockFormViolated",
    "ReconstructionFailed",
]
