"""Pydantic models for the JSON documents read and written by the CLI.

Complex numbers are always [re, im] pairs; index positions follow the
mathematical objects (coefficient k of a loop, power of z in a filter).
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, StrictFloat, model_validator

# Numeric strings such as "1.5" are malformed input, not numbers.
ComplexPair = tuple[StrictFloat, StrictFloat]
Matrix = list[list[ComplexPair]]


def _square(matrix: Matrix, n: int) -> bool:
    return len(matrix) == n and all(len(row) == n for row in matrix)


class LoopDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    schema_version: Literal["1"] = "1"
    n: int = Field(ge=1)
    genus: int = Field(ge=1)
    coeffs: list[Matrix]

    @model_validator(mode="after")
    def _check_shape(self) -> "LoopDocument":
        if len(self.coeffs) != self.genus:
            raise ValueError(f"expected {self.genus} coefficient matrices, got {len(self.coeffs)}")
        if not all(_square(m, self.n) for m in self.coeffs):
            raise ValueError(f"every coefficient must be {self.n}x{self.n}")
        return self


class BankDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    schema_version: Literal["1"] = "1"
    n: int = Field(ge=1)
    filters: list[list[ComplexPair]]

    @model_validator(mode="after")
    def _check_shape(self) -> "BankDocument":
        if len(self.filters) != self.n:
            raise ValueError(f"expected {self.n} filters, got {len(self.filters)}")
        if any(len(f) == 0 for f in self.filters):
            raise ValueError("every filter needs at least one coefficient")
        return self


class LowPassDocument(BaseModel):
    """A single filter m_0 offered for completion; ``n`` may come from --n instead."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    schema_version: Literal["1"] = "1"
    n: Optional[int] = Field(default=None, ge=1)
    m0: list[ComplexPair] = Field(min_length=1)


class FactorizationDocument(BaseModel):
    schema_version: Literal["1"] = "1"
    n: int
    mcmillan_degree: int
    projections: list[Matrix]
    degree_projections: list[Matrix]
    constant: Matrix


class ClusterEntry(BaseModel):
    value: ComplexPair
    multiplicity: int


class ProjectionEntry(BaseModel):
    matrix: Matrix
    rank: int
    diagonal: bool
    cyclic_indices: list[int]


class CuntzStateEntry(BaseModel):
    k: int
    v: list[ComplexPair]
    filter_residual: float


class ReductionEntry(BaseModel):
    unitary: Matrix
    block: LoopDocument
    modified_bank: BankDocument
    reduced_bank: Optional[BankDocument] = None
    block_residual: float
    conditions: dict[str, bool]


class IntertwinerDocument(BaseModel):
    schema_version: Literal["1"] = "1"
    dimension: int
    basis: list[Matrix]
    disjoint: bool
    e00_scalar: ComplexPair
    e00_fixed: bool
    consistent: bool
    genus: int


class RepReportDocument(BaseModel):
    schema_version: Literal["1"] = "1"
    n: int
    genus: int
    r: int
    spectrum: list[ComplexPair]
    clusters: list[ClusterEntry]
    spectral_radius: float
    adjoint_consistent: bool
    mult_one: int
    fixed_dim: int
    fixed_basis: list[Matrix]
    irreducible: bool
    fixed_set_algebra: bool
    fixed_set_abelian: bool
    decomposition_resolved: bool
    minimal_projections: list[ProjectionEntry] = Field(default_factory=list)
    summand_fixed_dims: Optional[list[list[int]]] = None
    cuntz_states: list[CuntzStateEntry] = Field(default_factory=list)
    lambda0: float
    reduction: Optional[ReductionEntry] = None
    genus_two_reducible: Optional[bool] = None
    findings: list[str] = Field(default_factory=list)
    intertwiner: Optional[IntertwinerDocument] = None


class ErrorDocument(BaseModel):
    error: str  # reason code
    type: str  # exception class name
    message: str
    context: dict = Field(default_factory=dict)


class SupportEntry(BaseModel):
    name: str  # 'phi', 'psi_1', ...
    level: int
    lo: float
    hi: float
    empty: bool
    window_bound: float
    sharp_bound: float
    within_window: bool
    within_sharp_bound: bool
    tail_mass: float
    max_offdiag: Optional[float] = None  # shift inner products, omitted with --no-verify


class CascadeReportDocument(BaseModel):
    schema_version: Literal["1"] = "1"
    n: int
    genus: int
    iterations: int
    functions: list[SupportEntry]
