"""Exact computations with the affine-Virasoro algebra of type A1 and its modules.

The package builds the Lie algebra from its structure constants, the rank-one
polynomial modules on C[s, t], truncated Verma modules, their tensor products
and the induced-module realization, and checks the identities relating them
with rational arithmetic throughout.
"""

from affvir.arith import Poly1, Poly2, format_rational, parse_rational
from affvir.lie import Gen, LieElement, anti_involution, bracket, jacobi_check

__all__ = [
    "Gen",
    "LieElement",
    "Poly1",
    "Poly2",
    "anti_involution",
    "bracket",
    "format_rational",
    "jacobi_check",
    "parse_rational",
]

__version__ = "0.1.0"
