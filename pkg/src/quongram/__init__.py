"""Gram matrices of the multiparametric quon algebra: determinants, inverses and applications."""

from .fock import GroupAlgebraMatrix, ModRing, PatternRing, Weight, gram
from .symring import BoxFactor, BoxProduct, ParamMode, Poly, RatEntry

__version__ = "0.1.0"

__all__ = [
    "BoxFactor", "BoxProduct", "GroupAlgebraMatrix", "ModRing", "ParamMode", "PatternRing",
    "Poly", "RatEntry", "Weight", "gram", "__version__",
]
