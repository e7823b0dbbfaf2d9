"""Sparse multivariate polynomials and rational functions over an exact field.

Polynomials in ``x_1 .. x_n`` are stored as dictionaries from exponent tuples
to nonzero scalars.  The global monomial order is graded lexicographic with
``x_1 > x_2 > ... > x_n``; it pins down leading terms, the normal form of
rational functions (numerator and denominator coprime, denominator monic) and
the text serialisation.

The gcd used to reduce rational functions is a primitive polynomial-remainder
sequence, recursing through the variables.  It is not fast, but it is exact
over both backends and the polynomials seen here stay small.

The Weyl group of type B acts by :func:`act`: letter ``0`` flips the sign of
``x_1`` and letter ``a`` swaps ``x_a`` with ``x_{a+1}``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .coxeter import SignedPerm, SizeMismatch
from .field import Field, Scalar


class NotDivisible(ArithmeticError):
    """Exact polynomial division requested with a non-dividing divisor."""


def _grlex(exp: tuple[int, ...]):
    return (sum(exp), exp)


class PolyN:
    """Polynomial in ``n`` variables with :class:`Scalar` coefficients."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: Field, n: int, terms: dict[tuple[int, ...], Scalar]):
        self.field = field
        self.n = n
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: Field, n: int) -> "PolyN":
        return cls(field, n, {})

    @classmethod
    def const(cls, field: Field, n: int, value) -> "PolyN":
        return cls(field, n, {(0,) * n: field(value)})

    @classmethod
    def variable(cls, field: Field, n: int, k: int) -> "PolyN":
        """The variable ``x_k``, 1-based."""
        if not 1 <= k <= n:
            raise ValueError(f"x_{k} is not one of x_1..x_{n}")
        exp = tuple(1 if j == k - 1 else 0 for j in range(n))
        return cls(field, n, {exp: field.one})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((0,) * self.n, self.field.zero)

    def total_degree(self) -> int:
        """-1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self) -> tuple[tuple[int, ...], Scalar]:
        exp = max(self.terms, key=_grlex)
        return exp, self.terms[exp]

    def used_variables(self) -> set[int]:
        """0-based indices of variables with positive degree."""
        return {k for e in self.terms for k, d in enumerate(e) if d}

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "PolyN"):
        if not isinstance(other, PolyN):
            raise TypeError(f"cannot mix PolyN with {type(other).__name__}")
        if other.field is not self.field or other.n != self.n:
            raise SizeMismatch("polynomials from different rings")

    def __add__(self, other: "PolyN") -> "PolyN":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            terms[e] = c if s is None else s + c
        return PolyN(self.field, self.n, terms)

    def __neg__(self) -> "PolyN":
        return PolyN(self.field, self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "PolyN") -> "PolyN":
        return self + (-other)

    def __mul__(self, other: "PolyN") -> "PolyN":
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple[int, ...], Scalar] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                s = out.get(e)
                out[e] = c if s is None else s + c
        return PolyN(self.field, self.n, out)

    def scale(self, c: Scalar) -> "PolyN":
        if c.is_zero():
            return PolyN.zero(self.field, self.n)
        return PolyN(self.field, self.n, {e: a * c for e, a in self.terms.items()})

    def __pow__(self, k: int) -> "PolyN":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = PolyN.const(self.field, self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, PolyN)
            and self.field is other.field
            and self.n == other.n
            and self.terms == other.terms
        )

    __hash__ = None  # mutable dict inside

    # -- division and gcd ----------------------------------------------------

    def exact_divide(self, g: "PolyN") -> "PolyN":
        """Quotient ``self / g`` when the division is exact.

        Repeatedly cancels the grlex leading term; fails fast with
        :class:`NotDivisible` as soon as the leading monomial of the remainder
        is not a multiple of the divisor's.
        """
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if g.is_constant():
            return self.scale(g.constant_value().inv())
        glex, glc = g.leading()
        rest = {e: c for e, c in g.terms.items() if e != glex}
        quotient: dict[tuple[int, ...], Scalar] = {}
        remainder = dict(self.terms)
        while remainder:
            rlex = max(remainder, key=_grlex)
            diff = tuple(a - b for a, b in zip(rlex, glex))
            if any(d < 0 for d in diff):
                raise NotDivisible(f"{g} does not divide {self}")
            c = remainder.pop(rlex) / glc
            quotient[diff] = c
            for e, a in rest.items():
                key = tuple(x + y for x, y in zip(diff, e))
                s = remainder.get(key, self.field.zero) - a * c
                if s.is_zero():
                    remainder.pop(key, None)
                else:
                    remainder[key] = s
        return PolyN(self.field, self.n, quotient)

    def divides(self, other: "PolyN") -> bool:
        try:
            other.exact_divide(self)
            return True
        except NotDivisible:
            return False

    def monic(self) -> "PolyN":
        if self.is_zero():
            return self
        return self.scale(self.leading()[1].inv())

    # -- Weyl group action ----------------------------------------------------

    def act(self, w: SignedPerm) -> "PolyN":
        """Twist ``f -> {}^w f``: ``x_k`` goes to ``sign(w(k)) x_{|w(k)|}``."""
        if w.n != self.n:
            raise SizeMismatch(f"rank {w.n} action on {self.n} variables")
        out: dict[tuple[int, ...], Scalar] = {}
        for e, c in self.terms.items():
            new = [0] * self.n
            flips = 0
            for k in range(self.n):
                img = w.images[k]
                new[abs(img) - 1] = e[k]
                if img < 0:
                    flips += e[k]
            key = tuple(new)
            val = -c if flips % 2 else c
            s = out.get(key)
            out[key] = val if s is None else s + val
        return PolyN(self.field, self.n, out)

    # -- serialisation ----------------------------------------------------------

    def text(self, var: str = "x") -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex, reverse=True):
            c = self.terms[e]
            factors = [
                f"{var}{k + 1}" + (f"^{d}" if d > 1 else "")
                for k, d in enumerate(e)
                if d
            ]
            body = "*".join(factors)
            cs = str(c)
            if not factors:
                parts.append(cs)
            elif cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append(f"-{body}")
            else:
                parts.append(f"{cs}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"PolyN({self.text()})"


def embed_vars(small: PolyN, n: int, positions: Sequence[int]) -> PolyN:
    """Relabel the variables of ``small`` into an ``n``-variable ring.

    Variable ``j`` (1-based) of ``small`` becomes ``x_{positions[j-1]}``.
    """
    if len(positions) != small.n or len(set(positions)) != small.n:
        raise ValueError("positions must match the small ring's variables")
    terms = {}
    for e, c in small.terms.items():
        new = [0] * n
        for j, d in enumerate(e):
            new[positions[j] - 1] = d
        terms[tuple(new)] = c
    return PolyN(small.field, n, terms)


def _as_univariate(f: PolyN, v: int) -> dict[int, PolyN]:
    """View ``f`` as a polynomial in variable ``v`` (0-based)."""
    coeffs: dict[int, dict] = {}
    for e, c in f.terms.items():
        rest = e[:v] + (0,) + e[v + 1 :]
        coeffs.setdefault(e[v], {})[rest] = c
    return {d: PolyN(f.field, f.n, t) for d, t in coeffs.items()}


def _from_univariate(field: Field, n: int, v: int, coeffs: dict[int, PolyN]) -> PolyN:
    terms = {}
    for d, poly in coeffs.items():
        for e, c in poly.terms.items():
            terms[e[:v] + (d,) + e[v + 1 :]] = c
    return PolyN(field, n, terms)


def _content(polys: Iterable[PolyN], field: Field, n: int) -> PolyN:
    g = PolyN.zero(field, n)
    for p in polys:
        g = poly_gcd(g, p)
        if g.is_constant() and not g.is_zero():
            return PolyN.const(field, n, 1)
    return g


def _pseudo_rem(A: dict[int, PolyN], B: dict[int, PolyN], field, n, v) -> dict[int, PolyN]:
    degB = max(B)
    lcB = B[degB]
    R = dict(A)
    while R and max(R) >= degB:
        degR = max(R)
        lcR = R[degR]
        shift = degR - degB
        new: dict[int, PolyN] = {}
        for d, c in R.items():
            if d == degR:
                continue
            new[d] = c * lcB
        for d, c in B.items():
            if d == degB:
                continue
            key = d + shift
            prev = new.get(key, PolyN.zero(field, n))
            val = prev - c * lcR
            if val.is_zero():
                new.pop(key, None)
            else:
                new[key] = val
        R = {d: c for d, c in new.items() if not c.is_zero()}
    return R


def poly_gcd(f: PolyN, g: PolyN) -> PolyN:
    """Monic gcd via a primitive polynomial-remainder sequence."""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    field, n = f.field, f.n
    if f.is_constant() or g.is_constant():
        return PolyN.const(field, n, 1)
    v = min(f.used_variables() | g.used_variables())
    fu = _as_univariate(f, v)
    gu = _as_univariate(g, v)
    if max(fu) == 0:
        return poly_gcd(f, _content(gu.values(), field, n))
    if max(gu) == 0:
        return poly_gcd(_content(fu.values(), field, n), g)
    cf = _content(fu.values(), field, n)
    cg = _content(gu.values(), field, n)
    cont = poly_gcd(cf, cg)
    A = {d: c.exact_divide(cf) for d, c in fu.items()}
    B = {d: c.exact_divide(cg) for d, c in gu.items()}
    if max(A) < max(B):
        A, B = B, A
    while B:
        R = _pseudo_rem(A, B, field, n, v)
        if R:
            cR = _content(R.values(), field, n)
            R = {d: c.exact_divide(cR) for d, c in R.items()}
        A, B = B, R
    h = _from_univariate(field, n, v, A)
    return (cont * h).monic()


class RatFunc:
    """Quotient of polynomials in normal form.

    Invariants: the denominator is nonzero and monic under grlex, numerator
    and denominator are coprime, and the zero function is ``0/1``.  Equality
    is therefore plain representational equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: PolyN, den: PolyN, *, _normal: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normal:
            num, den = self._normalise(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _normalise(num: PolyN, den: PolyN):
        one = PolyN.const(num.field, num.n, 1)
        if num.is_zero():
            return num, one
        if den.is_constant():
            return num.scale(den.constant_value().inv()), one
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.exact_divide(g)
            den = den.exact_divide(g)
        lc = den.leading()[1]
        if lc != num.field.one:
            num = num.scale(lc.inv())
            den = den.scale(lc.inv())
        return num, den

    @classmethod
    def from_poly(cls, p: PolyN) -> "RatFunc":
        return cls(p, PolyN.const(p.field, p.n, 1), _normal=True)

    @classmethod
    def const(cls, field: Field, n: int, value) -> "RatFunc":
        return cls.from_poly(PolyN.const(field, n, value))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> PolyN:
        if not self.is_polynomial():
            raise NotDivisible(f"{self} is not polynomial")
        return self.num

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        d = poly_gcd(self.den, other.den)
        if d.is_constant():
            num = self.num * other.den + other.num * self.den
            return RatFunc(num, self.den * other.den)
        sd = self.den.exact_divide(d)
        od = other.den.exact_divide(d)
        num = self.num * od + other.num * sd
        return RatFunc(num, sd * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _normal=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if self.is_zero() or other.is_zero():
            return RatFunc.const(self.num.field, self.num.n, 0)
        # cross-reduce; the factors are then pairwise coprime
        a_num, b_den = self.num, other.den
        g = poly_gcd(a_num, b_den)
        if not g.is_constant():
            a_num, b_den = a_num.exact_divide(g), b_den.exact_divide(g)
        b_num, a_den = other.num, self.den
        g = poly_gcd(b_num, a_den)
        if not g.is_constant():
            b_num, a_den = b_num.exact_divide(g), a_den.exact_divide(g)
        num = a_num * b_num
        den = a_den * b_den
        lc = den.leading()[1]
        if lc != num.field.one:
            num, den = num.scale(lc.inv()), den.scale(lc.inv())
        return RatFunc(num, den, _normal=True)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return self * other.inverse()

    def scale(self, c: Scalar) -> "RatFunc":
        if c.is_zero():
            return RatFunc.const(self.num.field, self.num.n, 0)
        return RatFunc(self.num.scale(c), self.den, _normal=True)

    def act(self, w: SignedPerm) -> "RatFunc":
        """Twist by ``w``; coprimality survives, only monicity is restored."""
        num, den = self.num.act(w), self.den.act(w)
        lc = den.leading()[1]
        if lc != num.field.one:
            num, den = num.scale(lc.inv()), den.scale(lc.inv())
        return RatFunc(num, den, _normal=True)

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    __hash__ = None

    def text(self, var: str = "x") -> str:
        if self.is_polynomial():
            return self.num.text(var)
        return f"({self.num.text(var)}) / ({self.den.text(var)})"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"RatFunc({self.text()})"
