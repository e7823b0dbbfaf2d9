"""The quiver Hecke algebra of a quiver orbit, in type A or type B mode.

Mode "A" (symmetric-group orbits) has generators ``e(i), y_a, psi_b`` with
``b >= 1``; mode "B" (signed-permutation orbits over a quiver with
involution) adds the sign generator ``psi_0`` whose action depends on the
weights ``(lambda, gamma)``.

Everything is computed inside the faithful twisted-operator realisation:

* ``e(i)`` projects onto the summand ``1_i``;
* ``y_a`` multiplies by ``x_a``;
* ``psi_b`` acts by the divided difference ``(x_b - x_{b+1})^{-1}(r_b - 1)``
  when the adjacent entries agree and by ``P(x_{b+1}, x_b) r_b`` otherwise;
* ``psi_0`` acts by ``gamma x_1^{-1}(1 - r_0) + alpha(x_1) r_0``.

An :class:`Element` is a linear combination of PBW monomials
``y^a psi_w e(i)`` with ``psi_w`` pinned to the canonical reduced word of
``w``.  Products are computed by composing operators and converting back with
:meth:`Algebra.pbw_expand`, the triangular extraction that inverts the
realisation: repeatedly take a surviving term ``(i, w)`` with ``w`` of
maximal length, divide its coefficient by the (nonzero) leading coefficient
of ``psi_w e(i)``, require the quotient to be polynomial, emit the matching
monomials and subtract.  Each round clears its ``(i, w)`` slot and only
creates strictly shorter group parts, so the recursion terminates; a
non-polynomial quotient means the operator was never in the algebra.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

from . import coxeter as cx
from .coxeter import SignedPerm, canonical_word, generator, identity, length, r0_count
from .field import Field, Scalar
from .operators import OperatorSpace, TwistedOp
from .polynomials import PolyN, RatFunc, embed_vars
from .quiver import Orbit, Params, Quiver


class InvalidGenerator(ValueError):
    pass


class NotInAlgebra(ArithmeticError):
    """Operator outside the image of the algebra (bad input)."""


class DescriptorMismatch(ValueError):
    pass


class ParamsNotZero(ValueError):
    pass


class PBWMonomial(NamedTuple):
    exponents: tuple[int, ...]
    w: SignedPerm
    source: tuple[str, ...]

    def degree_key(self):
        return (sum(self.exponents), self.exponents, self.w.images, self.source)

    def text(self) -> str:
        parts = []
        for k, d in enumerate(self.exponents):
            if d:
                parts.append(f"y{k + 1}" + (f"^{d}" if d > 1 else ""))
        word = canonical_word(self.w)
        if word:
            parts.append("psi[" + ",".join(str(a) for a in word) + "]")
        parts.append("e(" + ",".join(self.source) + ")")
        return "*".join(parts)


class Element:
    """Finitely supported scalar combination of PBW monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "Algebra", terms: dict[PBWMonomial, Scalar]):
        self.algebra = algebra
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    def _check(self, other: "Element"):
        if not isinstance(other, Element) or other.algebra is not self.algebra:
            raise DescriptorMismatch("elements of different algebras")

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            terms[m] = c if s is None else s + c
        return Element(self.algebra, terms)

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s: Scalar) -> "Element":
        if s.is_zero():
            return Element(self.algebra, {})
        return Element(self.algebra, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        return self.algebra.multiply(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.algebra is other.algebra
            and self.terms == other.terms
        )

    __hash__ = None

    def to_op(self) -> TwistedOp:
        return self.algebra.element_op(self)

    def degree(self):
        """Common degree of the terms, or None when mixed or zero."""
        degs = {self.algebra.monomial_degree(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        return self.is_zero() or self.degree() is not None

    def iota(self) -> "Element":
        return self.algebra.iota(self)

    def r0_counts(self) -> set[int]:
        return {r0_count(m.w) for m in self.terms}

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=PBWMonomial.degree_key):
            c = str(self.terms[m])
            body = m.text()
            if c == "1":
                parts.append(body)
            elif c == "-1":
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"Element({self.text()})"


class Algebra:
    """Descriptor bundling quiver, weights, orbit and scalar field."""

    def __init__(self, quiver: Quiver, params: Params, orbit: Orbit, field: Field):
        if orbit.group == "S":
            self.mode = "A"
        elif orbit.group == "B":
            self.mode = "B"
        else:
            raise InvalidGenerator(
                "type D is handled through the fixed-point layer on a B orbit"
            )
        if self.mode == "B" and not quiver.has_involution:
            raise InvalidGenerator("mode B needs a quiver with involution")
        if params.field is not field:
            raise DescriptorMismatch("params use a different scalar field")
        quiver.validate_p_family(field)
        self.quiver = quiver
        self.params = params
        self.orbit = orbit
        self.field = field
        self.n = orbit.n
        self.space = OperatorSpace(field, self.n, orbit.tuples, quiver.theta)
        self.sources = tuple(sorted(orbit.tuples))
        self._gen_terms_cache: dict = {}
        self._word_op_cache: dict = {}
        self._gen_op_cache: dict = {}
        self._monomial_degree_cache: dict = {}

    # -- twisted realisation of the generators --------------------------------

    def _gen_terms(self, letter: int, i: tuple) -> tuple:
        """Terms of ``psi_letter`` restricted to source ``i``."""
        key = (letter, i)
        out = self._gen_terms_cache.get(key)
        if out is not None:
            return out
        field, n = self.field, self.n
        if letter == 0:
            if self.mode != "B":
                raise InvalidGenerator("psi_0 exists only in type B mode")
            gamma = self.params.gamma[i[0]]
            r0 = generator(n, 0)
            if gamma.is_zero():
                alpha = embed_vars(self.params.alpha_poly(i[0]), n, (1,))
                out = ((r0, RatFunc.from_poly(alpha)),)
            else:
                inv_x1 = RatFunc(
                    PolyN.const(field, n, gamma), PolyN.variable(field, n, 1)
                )
                out = ((identity(n), inv_x1), (r0, -inv_x1))
        else:
            b = letter
            if not 1 <= b <= n - 1:
                raise InvalidGenerator(f"psi_{b} does not exist at rank {n}")
            rb = generator(n, b)
            if i[b - 1] == i[b]:
                dd = RatFunc(
                    PolyN.const(field, n, 1),
                    PolyN.variable(field, n, b) - PolyN.variable(field, n, b + 1),
                )
                out = ((rb, dd), (identity(n), -dd))
            else:
                p = self.quiver.p_poly(field, i[b - 1], i[b])
                coeff = embed_vars(p, n, (b + 1, b))
                out = ((rb, RatFunc.from_poly(coeff)),)
        self._gen_terms_cache[key] = out
        return out

    def gen_op(self, kind: str, index=None) -> TwistedOp:
        """Operator of a generator: kind "e" (index a tuple), "y" or "psi"."""
        key = (kind, index)
        op = self._gen_op_cache.get(key)
        if op is not None:
            return op
        if kind == "e":
            op = TwistedOp.projector(self.space, tuple(index))
        elif kind == "y":
            x = PolyN.variable(self.field, self.n, index)
            op = TwistedOp(
                self.space,
                {(i, identity(self.n)): RatFunc.from_poly(x) for i in self.sources},
            )
        elif kind == "psi":
            terms = {}
            for i in self.sources:
                for w, c in self._gen_terms(index, i):
                    key2 = (i, w)
                    terms[key2] = terms[key2] + c if key2 in terms else c
            op = TwistedOp(self.space, terms)
        else:
            raise InvalidGenerator(kind)
        self._gen_op_cache[key] = op
        return op

    def _compose_letter(self, letter: int, op: TwistedOp) -> TwistedOp:
        """``psi_letter`` composed after ``op`` (cheap join on targets)."""
        act = self.space.act
        terms: dict = {}
        for (i, w), c in op.terms.items():
            target = act(w, i)
            for wg, cg in self._gen_terms(letter, target):
                key = (i, wg * w)
                val = cg * c.act(wg)
                s = terms.get(key)
                terms[key] = val if s is None else s + val
        return TwistedOp(self.space, terms)

    def word_op(self, word: tuple[int, ...], i: tuple) -> TwistedOp:
        """Operator of ``psi_{word} e(i)``; suffixes of canonical words are
        canonical, so the memoisation is shared across group elements."""
        key = (word, i)
        op = self._word_op_cache.get(key)
        if op is not None:
            return op
        if not word:
            op = TwistedOp.projector(self.space, i)
        else:
            op = self._compose_letter(word[0], self.word_op(word[1:], i))
        self._word_op_cache[key] = op
        return op

    def monomial_op(self, m: PBWMonomial) -> TwistedOp:
        op = self.word_op(canonical_word(m.w), m.source)
        if any(m.exponents):
            mono = PolyN(self.field, self.n, {m.exponents: self.field.one})
            op = op.left_mul(mono)
        return op

    def element_op(self, elt: Element) -> TwistedOp:
        total = TwistedOp.zero(self.space)
        for m, c in elt.terms.items():
            total = total + self.monomial_op(m).scale(c)
        return total

    # -- PBW extraction ----------------------------------------------------------

    @staticmethod
    def _extract_key(key):
        i, w = key
        return (length(w), canonical_word(w), i)

    def pbw_expand(self, op: TwistedOp) -> Element:
        if op.space is not self.space:
            raise DescriptorMismatch("operator lives on a different space")
        work = dict(op.terms)
        out: dict[PBWMonomial, Scalar] = {}
        while work:
            i, w = max(work, key=self._extract_key)
            coeff = work.pop((i, w))
            base = self.word_op(canonical_word(w), i)
            quotient = coeff / base.terms[(i, w)]
            if not quotient.is_polynomial():
                raise NotInAlgebra(
                    f"coefficient at {(i, w)} is not reachable: {quotient}"
                )
            qp = quotient.as_poly()
            for exp, c in qp.terms.items():
                m = PBWMonomial(exp, w, i)
                s = out.get(m)
                out[m] = c if s is None else s + c
            lw = length(w)
            for (i2, w2), c2 in base.terms.items():
                if (i2, w2) == (i, w):
                    continue
                if length(w2) >= lw:  # triangularity guard
                    raise AssertionError("monomial operator is not triangular")
                delta = quotient * c2
                s = work.get((i2, w2))
                s = -delta if s is None else s - delta
                if s.is_zero():
                    work.pop((i2, w2), None)
                else:
                    work[(i2, w2)] = s
        return Element(self, out)

    # -- ring interface -----------------------------------------------------------

    def zero(self) -> Element:
        return Element(self, {})

    def one(self) -> Element:
        e = identity(self.n)
        zero_exp = (0,) * self.n
        return Element(
            self,
            {PBWMonomial(zero_exp, e, i): self.field.one for i in self.sources},
        )

    def e(self, i: Sequence[str]) -> Element:
        i = tuple(i)
        if i not in self.orbit.tuples:
            raise DescriptorMismatch(f"{i} is not in the orbit")
        return Element(
            self, {PBWMonomial((0,) * self.n, identity(self.n), i): self.field.one}
        )

    def y(self, a: int, i: Sequence[str] | None = None) -> Element:
        if not 1 <= a <= self.n:
            raise InvalidGenerator(f"y_{a} does not exist at rank {self.n}")
        exp = tuple(1 if k == a - 1 else 0 for k in range(self.n))
        sources = [tuple(i)] if i is not None else self.sources
        return Element(
            self,
            {PBWMonomial(exp, identity(self.n), j): self.field.one for j in sources},
        )

    def psi(self, b: int, i: Sequence[str] | None = None) -> Element:
        if b == 0 and self.mode != "B":
            raise InvalidGenerator("psi_0 exists only in type B mode")
        if not 0 <= b <= self.n - 1 or (b == 0 and self.mode == "A"):
            raise InvalidGenerator(f"psi_{b} does not exist at rank {self.n}")
        w = generator(self.n, b)
        zero_exp = (0,) * self.n
        sources = [tuple(i)] if i is not None else self.sources
        return Element(
            self, {PBWMonomial(zero_exp, w, j): self.field.one for j in sources}
        )

    def monomial(self, exponents: Sequence[int], w: SignedPerm, source) -> Element:
        m = PBWMonomial(tuple(exponents), w, tuple(source))
        if m.source not in self.orbit.tuples:
            raise DescriptorMismatch(f"{m.source} is not in the orbit")
        if self.mode == "A" and not w.is_unsigned():
            raise InvalidGenerator("type A monomials use unsigned permutations")
        return Element(self, {m: self.field.one})

    def from_poly(self, p: PolyN, sources: Iterable[tuple] | None = None) -> Element:
        """The central-looking element ``sum_i p(y) e(i)``."""
        terms = {}
        e = identity(self.n)
        for i in sources if sources is not None else self.sources:
            for exp, c in p.terms.items():
                terms[PBWMonomial(exp, e, tuple(i))] = c
        return Element(self, terms)

    def multiply(self, a: Element, b: Element) -> Element:
        if a.algebra is not self or b.algebra is not self:
            raise DescriptorMismatch("elements of a different algebra")
        return self.pbw_expand(self.element_op(a).compose(self.element_op(b)))

    def product(self, *elements: Element) -> Element:
        """Product of several elements, composing operators right to left."""
        if not elements:
            return self.one()
        op = self.element_op(elements[-1])
        for elt in reversed(elements[:-1]):
            op = self.element_op(elt).compose(op)
        return self.pbw_expand(op)

    # -- grading, involution, cyclotomic identities ----------------------------------

    def letter_degree(self, letter: int, i: tuple) -> int:
        if letter == 0:
            return self.params.d_vertex(i[0])
        return self.quiver.d_pair(i[letter - 1], i[letter])

    def monomial_degree(self, m: PBWMonomial) -> int:
        key = (m.w, m.source)
        base = self._monomial_degree_cache.get(key)
        if base is None:
            base = 0
            tup = m.source
            for letter in reversed(canonical_word(m.w)):
                base += self.letter_degree(letter, tup)
                tup = self.space.act(generator(self.n, letter), tup)
            self._monomial_degree_cache[key] = base
        return base + 2 * sum(m.exponents)

    def iota(self, a: Element) -> Element:
        """Sign involution: a PBW term picks up (-1)^(number of letter-0)."""
        if self.mode != "B":
            raise ParamsNotZero("iota lives on the type B algebra")
        if not self.params.is_zero():
            raise ParamsNotZero("iota needs lambda = gamma = 0")
        minus = -self.field.one
        return Element(
            self,
            {
                m: (c * minus if r0_count(m.w) % 2 else c)
                for m, c in a.terms.items()
            },
        )

    def psi0_conjugation_identity(self, weight, i: tuple) -> tuple[Element, Element]:
        """Both sides of ``psi_0 y_1^{L} e(i) psi_0 = (-y_1)^{L} e(r_0 . i)``.

        The generator-level identity behind replacing a cyclotomic weight by
        its theta-symmetrisation; needs ``lambda = gamma = 0``.
        """
        if self.mode != "B" or not self.params.is_zero():
            raise ParamsNotZero("the conjugation identity needs lambda = gamma = 0")
        L = weight[i[0]]
        psi0 = self.psi(0)
        y1L = self.monomial((L,) + (0,) * (self.n - 1), identity(self.n), i)
        lhs = self.product(psi0, y1L, psi0)
        target = self.space.act(generator(self.n, 0), i)
        sign = self.field((-1) ** L)
        rhs = self.monomial(
            (L,) + (0,) * (self.n - 1), identity(self.n), target
        ).scale(sign)
        return lhs, rhs
