"""Exact arithmetic substrate.

Integers and rationals are Python ``int`` and ``fractions.Fraction``.
"""

from .laurent import LaurentPoly
from .matrix import IntMatrix, SNFDecomposition, det, smith_normal_form
from .series import (
    TruncSeries,
    series_inverse,
    series_jacobian,
    series_mul,
    series_pow_int,
    series_solve_v,
)

__all__ = [
    "IntMatrix",
    "LaurentPoly",
    "SNFDecomposition",
    "TruncSeries",
    "det",
    "series_inverse",
    "series_jacobian",
    "series_mul",
    "series_pow_int",
    "series_solve_v",
    "smith_normal_form",
]
