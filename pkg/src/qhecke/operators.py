"""Twisted operators on sums of polynomial rings indexed by an orbit.

The carrier space is the direct sum over the orbit tuples ``i`` of copies of
``K[x_1..x_n]`` with unit ``1_i``.  An operator is a finite sum of terms
``(i, w, c)`` with ``w`` a signed permutation and ``c`` a rational function;
such a term sends ``f 1_i`` to ``c (^w f) 1_{w.i}`` and kills every other
summand.  Operators of this shape are closed under composition:

    (i2, w2, c2) o (i1, w1, c1) = (i1, w2 w1, c2 ^{w2}c1)   if i2 = w1 . i1

and the algebras of interest embed faithfully in them, so equality of
normalised term dictionaries decides equality of algebra elements.

Individual terms may be genuinely rational (divided differences split into
two non-polynomial halves); applying a whole operator to a polynomial vector
must produce polynomial components, and :class:`NonPolynomialImage` flags an
operator that was never in the algebra.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .coxeter import SignedPerm, act_tuple, identity
from .field import Field, Scalar
from .polynomials import PolyN, RatFunc


class OrbitMismatch(ValueError):
    """Operators over different carrier spaces."""


class NonPolynomialImage(ArithmeticError):
    """An operator image left the polynomial subspace."""


class OperatorSpace:
    """Carrier space data: rank, scalar field, orbit tuples, involution."""

    def __init__(self, field: Field, n: int, tuples: Iterable[tuple], theta: Mapping[str, str]):
        self.field = field
        self.n = n
        self.tuples = frozenset(tuples)
        self.theta = dict(theta)
        self._act_cache: dict[tuple[SignedPerm, tuple], tuple] = {}
        self.one = RatFunc.const(field, n, 1)

    def act(self, w: SignedPerm, tup: tuple) -> tuple:
        key = (w, tup)
        out = self._act_cache.get(key)
        if out is None:
            out = act_tuple(w, tup, self.theta.get)
            self._act_cache[key] = out
        return out

    def coeff(self, value) -> RatFunc:
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, PolyN):
            return RatFunc.from_poly(value)
        return RatFunc.const(self.field, self.n, value)


class TwistedOp:
    """Finitely supported sum of twisted terms over an :class:`OperatorSpace`."""

    __slots__ = ("space", "terms")

    def __init__(self, space: OperatorSpace, terms: Mapping[tuple, RatFunc]):
        self.space = space
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, space: OperatorSpace) -> "TwistedOp":
        return cls(space, {})

    @classmethod
    def single(cls, space: OperatorSpace, source: tuple, w: SignedPerm, coeff) -> "TwistedOp":
        if source not in space.tuples:
            raise OrbitMismatch(f"{source} is not in the orbit")
        return cls(space, {(source, w): space.coeff(coeff)})

    @classmethod
    def projector(cls, space: OperatorSpace, source: tuple) -> "TwistedOp":
        return cls.single(space, source, identity(space.n), space.one)

    @classmethod
    def one(cls, space: OperatorSpace) -> "TwistedOp":
        e = identity(space.n)
        return cls(space, {(i, e): space.one for i in space.tuples})

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "TwistedOp"):
        if other.space is not self.space:
            raise OrbitMismatch("operators over different spaces")

    # -- linear structure -----------------------------------------------------

    def __add__(self, other: "TwistedOp") -> "TwistedOp":
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k)
            terms[k] = c if s is None else s + c
        return TwistedOp(self.space, terms)

    def __neg__(self) -> "TwistedOp":
        return TwistedOp(self.space, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s: Scalar) -> "TwistedOp":
        if s.is_zero():
            return TwistedOp.zero(self.space)
        return TwistedOp(self.space, {k: c.scale(s) for k, c in self.terms.items()})

    def left_mul(self, q) -> "TwistedOp":
        """Multiply every coefficient by ``q`` on the left (post-twist)."""
        q = self.space.coeff(q)
        if q.is_zero():
            return TwistedOp.zero(self.space)
        return TwistedOp(self.space, {k: q * c for k, c in self.terms.items()})

    # -- multiplicative structure ------------------------------------------------

    def compose(self, other: "TwistedOp") -> "TwistedOp":
        """``self`` after ``other``."""
        self._check(other)
        act = self.space.act
        # group the outer terms by source for the matching join
        outer: dict[tuple, list] = {}
        for (j, w2), c2 in self.terms.items():
            outer.setdefault(j, []).append((w2, c2))
        terms: dict[tuple, RatFunc] = {}
        for (i, w1), c1 in other.terms.items():
            target = act(w1, i)
            for w2, c2 in outer.get(target, ()):
                key = (i, w2 * w1)
                val = c2 * c1.act(w2)
                s = terms.get(key)
                terms[key] = val if s is None else s + val
        return TwistedOp(self.space, terms)

    def __eq__(self, other):
        return (
            isinstance(other, TwistedOp)
            and self.space is other.space
            and self.terms == other.terms
        )

    __hash__ = None

    # -- action ------------------------------------------------------------------

    def apply(self, vector: Mapping[tuple, PolyN]) -> dict[tuple, PolyN]:
        """Apply to a polynomial vector ``{i: f_i}``; exact and total.

        Per-term images may be rational; only the summed component per target
        must be polynomial, otherwise the operator is malformed.
        """
        per_target: dict[tuple, RatFunc] = {}
        for (i, w), c in self.terms.items():
            f = vector.get(i)
            if f is None or f.is_zero():
                continue
            target = self.space.act(w, i)
            img = c * RatFunc.from_poly(f.act(w))
            s = per_target.get(target)
            per_target[target] = img if s is None else s + img
        out = {}
        for target, val in per_target.items():
            if val.is_zero():
                continue
            if not val.is_polynomial():
                raise NonPolynomialImage(f"component at {target} is {val}")
            out[target] = val.as_poly()
        return out

    # -- serialisation -------------------------------------------------------------

    def records(self, var: str = "x") -> list[dict]:
        """Sorted list of {source, perm, num, den} dictionaries."""
        out = []
        for (i, w), c in sorted(
            self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1].images)
        ):
            out.append(
                {
                    "source": list(i),
                    "perm": list(w.images),
                    "num": c.num.text(var),
                    "den": c.den.text(var),
                }
            )
        return out

    def __repr__(self):
        if self.is_zero():
            return "TwistedOp(0)"
        parts = []
        for (i, w), c in sorted(
            self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1].images)
        ):
            parts.append(f"({c}) {w} 1_{','.join(i)}")
        return "TwistedOp(" + " + ".join(parts) + ")"
