"""JSON documents for loops, banks and reports."""

from loopbank.documents.codec import (
    bank_to_document,
    detect_kind,
    document_to_bank,
    document_to_candidate,
    document_to_loop,
    dump_document,
    error_to_document,
    factorization_to_document,
    from_pairs,
    load_json,
    loop_to_document,
    parse_document,
    report_to_document,
    to_pairs,
)
from loopbank.documents.models import (
    BankDocument,
    CascadeReportDocument,
    ErrorDocument,
    FactorizationDocument,
    IntertwinerDocument,
    LoopDocument,
    LowPassDocument,
    RepReportDocument,
)

__all__ = [
    "LoopDocument",
    "BankDocument",
    "CascadeReportDocument",
    "LowPassDocument",
    "FactorizationDocument",
    "RepReportDocument",
    "IntertwinerDocument",
    "ErrorDocument",
    "to_pairs",
    "from_pairs",
    "load_json",
    "parse_document",
    "detect_kind",
    "dump_document",
    "loop_to_document",
    "document_to_loop",
    "bank_to_document",
    "document_to_bank",
    "document_to_candidate",
    "factorization_to_document",
    "report_to_document",
    "error_to_document",
]
