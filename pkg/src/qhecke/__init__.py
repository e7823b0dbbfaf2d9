"""Exact engine for quiver Hecke algebras of types A, B and D.

Elements are realised as twisted operators on sums of polynomial rings and
brought back to PBW normal form by triangular extraction, so every identity
checked by this package is an exact symbolic statement over Q or F_p.
"""

from .field import Field, RATIONALS, Scalar, mult_order

__all__ = ["Field", "RATIONALS", "Scalar", "mult_order"]
