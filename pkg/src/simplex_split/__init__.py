"""Exact arithmetic for two-map simplex-splitting continued fraction algorithms."""

from .ifs import (
    Ifs,
    SplitPair,
    example5,
    farey_variants,
    generators,
    is_continuous,
    monkemeyer,
    orientation,
    pair_from_perms,
)
from .linalg import IntMatrix, IntPolynomial, SimplexPoint

__all__ = [
    "Ifs",
    "IntMatrix",
    "IntPolynomial",
    "SimplexPoint",
    "SplitPair",
    "example5",
    "farey_variants",
    "generators",
    "is_continuous",
    "monkemeyer",
    "orientation",
    "pair_from_perms",
]

__version__ = "0.1.0"
