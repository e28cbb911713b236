"""Braid Floer generators - fixed points of braid actions on traceless SU(2) representations."""

__version__ = "0.1.0"

from .braid_engine import BraidWord, FreeWord, braid_automorphism, parse_braid_word
from .floer_fix_solver import FixedPointReport, strict_fixed_points, twisted_fixed_points
from .knot_invariants import euler_consistency_check, matrix_signature

__all__ = [
    "BraidWord",
    "FreeWord",
    "FixedPointReport",
    "braid_automorphism",
    "euler_consistency_check",
    "matrix_signature",
    "parse_braid_word",
    "strict_fixed_points",
    "twisted_fixed_points",
]
