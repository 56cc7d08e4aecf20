"""Exact computations with F1-algebras, punctured cone complexes and the
criteria relating them."""

from .characters import CharacterGroup
from .complex import ComplexMorphism, ConeComplex, Gluing, big_star, develop, monodromy, small_star
from .cone import Cone, Face, PuncturedCone, hilbert_basis, polar_cone, refine_by_function
from .criteria import (
    Verdict,
    check_overconvergent,
    check_proper,
    check_separated,
    classify,
    jet_oracle,
)
from .errors import F1Error, InvariantError
from .f1algebra import F1Algebra, MonomialIdeal, from_presentation, normalize
from .functors import (
    FormalSchemeAtlas,
    SchemeAtlas,
    SchemeGluing,
    algebraise,
    blow_up,
    complete,
    embedded_closure,
    expansion_stages,
    sigma,
    spec,
)
from .serialize import Document, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "CharacterGroup",
    "ComplexMorphism",
    "ConeComplex",
    "Gluing",
    "big_star",
    "develop",
    "monodromy",
    "small_star",
    "Cone",
    "Face",
    "PuncturedCone",
    "hilbert_basis",
    "polar_cone",
    "refine_by_function",
    "Verdict",
    "check_overconvergent",
    "check_proper",
    "check_separated",
    "classify",
    "jet_oracle",
    "F1Error",
    "InvariantError",
    "F1Algebra",
    "MonomialIdeal",
    "from_presentation",
    "normalize",
    "FormalSchemeAtlas",
    "SchemeAtlas",
    "SchemeGluing",
    "algebraise",
    "blow_up",
    "complete",
    "embedded_closure",
    "expansion_stages",
    "sigma",
    "spec",
    "Document",
    "parse",
    "serialize",
]
