"""Cyclic multiple zeta values: word algebra, derivations, truncated evaluation and relation checking."""

from .algebra import NcPoly, ShapeError
from .cyclic import CyclicIndex, Symbol
from .evaluator import DivergentError, TruncationSpec
from .relations import Relation, verify_numeric

__all__ = [
    "NcPoly",
    "ShapeError",
    "CyclicIndex",
    "Symbol",
    "DivergentError",
    "TruncationSpec",
    "Relation",
    "verify_numeric",
]
__version__ = "0.1.0"
