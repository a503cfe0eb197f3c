"""Exact counting of q = 0 Bethe string solutions for the XXZ-type sl(2) chain.

Set-partition Mobius functions, the string center congruence, the
fermionic counts ``R`` and ``K``, and the character and generating-function
identities they satisfy, all in exact integer and rational arithmetic.
"""

from .fermionic import QuantumSpace, StringPattern, k_fermionic, r_closed, r_expanded

__version__ = "0.1.0"

__all__ = ["QuantumSpace", "StringPattern", "k_fermionic", "r_closed", "r_expanded", "__version__"]
