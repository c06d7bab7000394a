"""Rigorous root-separation analysis for integer polynomials."""

from .balls import Ball
from .errors import PolynomialParseError, PrecisionError, RootSepError, UndefinedQuantityError
from .polycore import (
    FactoredPolynomial,
    IntegerPolynomial,
    discriminant,
    format_poly,
    gcd,
    height,
    multiply,
    parse_poly,
    resultant,
    squarefree_decomposition,
)
from .rootfinder import (
    RootEnclosure,
    RootSet,
    SeparationReport,
    exponent,
    isolate_roots,
    refine,
    sep,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "FactoredPolynomial",
    "IntegerPolynomial",
    "PolynomialParseError",
    "PrecisionError",
    "RootEnclosure",
    "RootSepError",
    "RootSet",
    "SeparationReport",
    "UndefinedQuantityError",
    "discriminant",
    "exponent",
    "format_poly",
    "gcd",
    "height",
    "isolate_roots",
    "multiply",
    "parse_poly",
    "refine",
    "resultant",
    "sep",
    "squarefree_decomposition",
]
