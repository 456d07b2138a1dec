"""Congruence closure of ground equations over uninterpreted and AC symbols,
computed as reduced canonical ground rewrite systems."""

from .combine import (CombinedSystem, Config, Session, check_sat, decide,
                      general_cc)
from .flatten import DecomposedProblem, Purifier, flatten_ac_nesting, purify
from .gbz import (GbState, Polynomial, RingSig, gbz_complete, ideal_member,
                  original_signature_basis, poly_normalize)
from .ordering import DEGLEX, LEX, MonomialOrdering, compare_monomial, dickson_geq
from .parser import ProblemFile, parse_problem, parse_term
from .terms import (AcApp, App, Const, GroupTerm, InternalError, Monomial,
                    Neg, ProblemError, Signature, TheorySpec)

__all__ = [
    "AcApp", "App", "CombinedSystem", "Config", "Const", "DEGLEX",
    "DecomposedProblem", "GbState", "GroupTerm", "InternalError", "LEX",
    "Monomial", "MonomialOrdering", "Neg", "Polynomial", "ProblemError",
    "ProblemFile", "Purifier", "RingSig", "Session", "Signature",
    "TheorySpec", "check_sat", "compare_monomial", "decide", "dickson_geq",
    "flatten_ac_nesting", "gbz_complete", "general_cc", "ideal_member",
    "original_signature_basis", "parse_problem", "parse_term",
    "poly_normalize", "purify",
]
