"""Approximate Gröbner bases over p-adic fields and Laurent series, with precision tracking."""

__version__ = "0.1.0"

from .cdvf import CdvfContext, CdvfElement
from .errors import (
    AmbiguousColumn, AmbiguousDivisor, AmbiguousLeadingTerm, LiftVerificationFailure,
    LMInstability, PadicGBError, ParseError, PrecisionError, PrecisionExhausted,
    StructureOrPrecisionFailure, UncertifiedBound,
)
from .f5core import (
    GroebnerResult, SystemInput, affine_weak_mf5, macaulay_bound, prec_mac, prec_mf5,
    weak_matrix, weak_mf5,
)
from .lifting import LiftRequest, weak_lift
from .oracle import buchberger_reduced
from .polyring import PolyRing, Polynomial, interreduce, reduce
from .sensitivity import Perturbation, compare_methods, differential, difference_method

__all__ = [
    "AmbiguousColumn", "AmbiguousDivisor", "AmbiguousLeadingTerm", "CdvfContext", "CdvfElement",
    "GroebnerResult", "LMInstability", "LiftRequest", "LiftVerificationFailure", "PadicGBError",
    "ParseError", "Perturbation", "PolyRing", "Polynomial", "PrecisionError", "PrecisionExhausted",
    "StructureOrPrecisionFailure", "SystemInput", "UncertifiedBound", "affine_weak_mf5",
    "buchberger_reduced", "compare_methods", "difference_method", "differential", "interreduce",
    "macaulay_bound", "prec_mac", "prec_mf5", "reduce", "weak_lift", "weak_matrix", "weak_mf5",
]
