"""Matrix polynomial arithmetic and unitary polynomial loops."""

from loopbank.algebra.cpoly import (
    LaurentMatPoly,
    MatPoly,
    add,
    adjoint,
    det_poly,
    evaluate,
    evaluate_on,
    mul,
)
from loopbank.algebra.loop import (
    CoefficientForm,
    ElementaryFactor,
    Factorization,
    LoopConfig,
    PolyLoop,
    certify_loop,
    coefficient_form,
    compose,
    factorize,
    from_coefficient_form,
    mcmillan_degree,
    peel_factor,
)

__all__ = [
    "MatPoly",
    "LaurentMatPoly",
    "add",
    "mul",
    "adjoint",
    "evaluate",
    "evaluate_on",
    "det_poly",
    "PolyLoop",
    "ElementaryFactor",
    "Factorization",
    "CoefficientForm",
    "LoopConfig",
    "certify_loop",
    "mcmillan_degree",
    "peel_factor",
    "factorize",
    "compose",
    "coefficient_form",
    "from_coefficient_form",
]
