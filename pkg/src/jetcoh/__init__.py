"""Exact computations on jet rings of Poisson varieties: λ-brackets, loop de Rham–Lie
complexes and their Lie-conformal counterparts."""

from .errors import ConsistencyError, ConstructionError, DomainError, JetcohError, PreconditionError
from .jets import BaseRing, JetRing
from .poly import SparsePoly
from .poisson import PoissonStructure, cotangent_algebroid, tangent_algebroid
from .lambda_bracket import PVAStructure
from .loop_complex import MultidegreeWindow, build_loop_complex, theorem_symplectic_check

__all__ = [
    "BaseRing", "ConsistencyError", "ConstructionError", "DomainError", "JetRing", "JetcohError",
    "MultidegreeWindow", "PVAStructure", "PoissonStructure", "PreconditionError", "SparsePoly",
    "build_loop_complex", "cotangent_algebroid", "tangent_algebroid", "theorem_symplectic_check",
]

__version__ = "0.1.0"
