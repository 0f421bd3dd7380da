"""Conversion between numpy objects and JSON documents.

Floats are written with Python's shortest round-trip repr, so every value
representable in double precision survives a parse/serialize cycle exactly.
"""

import json
import logging
from typing import Optional, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from loopbank.algebra.cpoly import MatPoly
from loopbank.algebra.loop import Factorization, LoopConfig, PolyLoop, certify_loop
from loopbank.cuntz.analysis import IntertwinerReport, RepReport
from loopbank.documents.models import (
    BankDocument,
    ClusterEntry,
    CuntzStateEntry,
    ErrorDocument,
    FactorizationDocument,
    IntertwinerDocument,
    LoopDocument,
    LowPassDocument,
    ProjectionEntry,
    ReductionEntry,
    RepReportDocument,
)
from loopbank.errors import LoopbankError, SchemaError
from loopbank.filters.bank import FilterBank, LowPassCandidate

logger = logging.getLogger(__name__)

DocumentT = TypeVar("DocumentT", bound=BaseModel)

_RAW_PREVIEW = 200


def to_pairs(values) -> list:
    """Nested lists with every complex entry replaced by [re, im]."""
    arr = np.asarray(values, dtype=np.complex128)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def from_pairs(data) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    return arr[..., 0] + 1j * arr[..., 1]


def load_json(text: str) -> dict:
    """Parse JSON text into a dict, mapping failures to SchemaError."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"Malformed JSON: {e}", raw=text[:_RAW_PREVIEW]) from e
    if not isinstance(data, dict):
        raise SchemaError("A document must be a JSON object", raw=text[:_RAW_PREVIEW])
    return data


def parse_document(data: dict, model: type[DocumentT]) -> DocumentT:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise SchemaError(
            f"Invalid {model.__name__}: {e.error_count()} validation error(s)",
            raw=json.dumps(data)[:_RAW_PREVIEW],
            context={"errors": [err["msg"] for err in e.errors()]},
        ) from e


def detect_kind(data: dict) -> str:
    """'loop', 'bank' or 'lowpass' from the keys of a parsed document."""
    if "coeffs" in data:
        return "loop"
    if "filters" in data:
        return "bank"
    if "m0" in data:
        return "lowpass"
    raise SchemaError("Cannot tell the document kind (no coeffs, filters or m0)", raw=json.dumps(data)[:_RAW_PREVIEW])


def dump_document(doc: BaseModel) -> str:
    return json.dumps(doc.model_dump(mode="json"), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Loops and banks
# ---------------------------------------------------------------------------


def loop_to_document(loop: PolyLoop) -> LoopDocument:
    return LoopDocument(n=loop.n, genus=loop.genus, coeffs=to_pairs(loop.body.coeffs))


def document_to_loop(
    doc: LoopDocument,
    tol: Optional[float] = None,
    config: Optional[LoopConfig] = None,
) -> PolyLoop:
    """Certify the document's coefficients as a unitary loop.

    Raises:
        NonUnitary: If certification fails.
    """
    return certify_loop(MatPoly(from_pairs(doc.coeffs)), tol=tol, config=config)


def bank_to_document(bank: FilterBank) -> BankDocument:
    return BankDocument(n=bank.n, filters=[to_pairs(f) for f in bank.filters])


def document_to_bank(doc: BankDocument) -> FilterBank:
    return FilterBank(n=doc.n, filters=tuple(from_pairs(f) for f in doc.filters))


def document_to_candidate(doc: LowPassDocument, n: Optional[int] = None) -> LowPassCandidate:
    """Low-pass candidate; ``n`` overrides the document's scale.

    Raises:
        SchemaError: If neither the document nor ``n`` gives the scale.
    """
    scale = n if n is not None else doc.n
    if scale is None:
        raise SchemaError("The scale N is missing (set n in the document or pass --n)")
    return LowPassCandidate(n=scale, m0=from_pairs(doc.m0))


def factorization_to_document(result: Factorization) -> FactorizationDocument:
    return FactorizationDocument(
        n=result.n,
        mcmillan_degree=result.mcmillan_degree,
        projections=[to_pairs(f.projection) for f in result.rank_one_factors],
        degree_projections=[to_pairs(q) for q in result.degree_projections],
        constant=to_pairs(result.constant),
    )


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _pair(value: complex) -> tuple[float, float]:
    value = complex(value)
    return (value.real, value.imag)


def intertwiner_to_document(report: IntertwinerReport) -> IntertwinerDocument:
    return IntertwinerDocument(
        dimension=report.dimension,
        basis=[to_pairs(x) for x in report.basis],
        disjoint=report.disjoint,
        e00_scalar=_pair(report.e00_scalar),
        e00_fixed=report.e00_fixed,
        consistent=report.consistent,
        genus=report.genus,
    )


def report_to_document(
    report: RepReport,
    intertwiner: Optional[IntertwinerReport] = None,
) -> RepReportDocument:
    eigs = report.spectrum
    ordered = sorted(eigs.values, key=lambda v: (-round(abs(v), 9), round(float(np.angle(v)), 9)))
    reduction = None
    if report.reduction is not None:
        red = report.reduction
        reduction = ReductionEntry(
            unitary=to_pairs(red.unitary),
            block=loop_to_document(red.block),
            modified_bank=bank_to_document(red.modified_bank),
            reduced_bank=bank_to_document(red.reduced_bank) if red.reduced_bank is not None else None,
            block_residual=red.block_residual,
            conditions=red.conditions,
        )
    return RepReportDocument(
        n=report.n,
        genus=report.genus,
        r=report.r,
        spectrum=[_pair(v) for v in ordered],
        clusters=[ClusterEntry(value=_pair(v), multiplicity=m) for v, m in eigs.clusters],
        spectral_radius=report.spectral_radius,
        adjoint_consistent=eigs.adjoint_consistent,
        mult_one=report.mult_one,
        fixed_dim=report.fixed_dim,
        fixed_basis=[to_pairs(x) for x in report.fixed_basis],
        irreducible=report.irreducible,
        fixed_set_algebra=report.fixed_set_algebra,
        fixed_set_abelian=report.fixed_set_abelian,
        decomposition_resolved=report.decomposition_resolved,
        minimal_projections=[
            ProjectionEntry(
                matrix=to_pairs(p.matrix),
                rank=p.rank,
                diagonal=p.diagonal,
                cyclic_indices=p.cyclic_indices,
            )
            for p in report.minimal_projections
        ],
        summand_fixed_dims=report.summand_fixed_dims.tolist() if report.summand_fixed_dims is not None else None,
        cuntz_states=[
            CuntzStateEntry(k=s.k, v=to_pairs(s.v), filter_residual=s.filter_residual)
            for s in report.cuntz_states
        ],
        lambda0=report.lambda0,
        reduction=reduction,
        genus_two_reducible=report.genus_two_reducible,
        findings=report.findings,
        intertwiner=intertwiner_to_document(intertwiner) if intertwiner is not None else None,
    )


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def error_to_document(error: LoopbankError) -> ErrorDocument:
    return ErrorDocument(
        error=error.reason,
        type=type(error).__name__,
        message=str(error),
        context=_jsonable(error.context),
    )
