"""Defining relations as data, evaluated through pluggable contexts.

Every defining relation of the three presentations (type A, the type-B
interpolation, the type-D algebra) is instantiated per orbit tuple as a pair
of formal linear combinations of generator words.  A context maps the symbols
to concrete values (twisted operators for the direct suites, elements for the
image suites of the decomposition and fixed-point layers) and the instance is
checked by exact equality there.

This turns the case analyses behind the polynomial realisation into an
executable suite: the branchy quadratic and four-braid relations are
constructed branch by branch, with the exact polynomial divisions they
require performed up front.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .algebra import Algebra, Element
from .coxeter import SignedPerm, d_generator, generator, identity
from .field import Field, Scalar
from .operators import TwistedOp
from .polynomials import PolyN, embed_vars
from .quiver import Params, Quiver

# token heads: ("e", i) ("y", a) ("psi", b) ("Psi0",) ("poly", PolyN)
Token = tuple


@dataclass(frozen=True)
class RelationCase:
    name: str
    source: tuple
    lhs: tuple[tuple[Scalar, tuple[Token, ...]], ...]
    rhs: tuple[tuple[Scalar, tuple[Token, ...]], ...]

    def label(self) -> str:
        return f"{self.name}@{','.join(self.source)}"


def _bivariate_at(
    q: PolyN, n: int, pos: tuple[int, int], signs: tuple[int, int] = (1, 1)
) -> PolyN:
    """Embed a bivariate polynomial at positions ``pos`` with sign twists."""
    if signs != (1, 1):
        q = q.act(SignedPerm((signs[0], 2 * signs[1])))
    return embed_vars(q, n, pos)


def klr_cases(
    quiver: Quiver,
    field: Field,
    n: int,
    sources: Sequence[tuple],
    act: Callable[[SignedPerm, tuple], tuple],
) -> Iterator[RelationCase]:
    """Relations not involving the sign generator, one instance per tuple."""
    one = field.one

    def single(*tokens) -> tuple:
        return ((one, tuple(tokens)),)

    for i in sources:
        yield RelationCase("e_idempotent", i, single(("e", i), ("e", i)), single(("e", i)))
        for j in sources:
            if j != i:
                yield RelationCase(
                    "e_orthogonal", i + j, single(("e", i), ("e", j)), ()
                )
        for a in range(1, n + 1):
            yield RelationCase(
                "y_e_commute",
                i,
                single(("y", a), ("e", i)),
                single(("e", i), ("y", a)),
            )
            for b in range(a + 1, n + 1):
                yield RelationCase(
                    "y_y_commute",
                    i,
                    single(("y", a), ("y", b), ("e", i)),
                    single(("y", b), ("y", a), ("e", i)),
                )
        for b in range(1, n):
            rb = generator(n, b)
            yield RelationCase(
                "psi_e",
                i,
                single(("psi", b), ("e", i)),
                single(("e", act(rb, i)), ("psi", b)),
            )
            for bp in range(b + 2, n):
                yield RelationCase(
                    "psi_far_commute",
                    i,
                    single(("psi", b), ("psi", bp), ("e", i)),
                    single(("psi", bp), ("psi", b), ("e", i)),
                )
            for a in range(1, n + 1):
                ra_of_a = b + 1 if a == b else (b if a == b + 1 else a)
                lhs = (
                    (one, (("psi", b), ("y", a), ("e", i))),
                    (-one, (("y", ra_of_a), ("psi", b), ("e", i))),
                )
                if i[b - 1] == i[b] and a == b:
                    rhs = ((-one, (("e", i),)),)
                elif i[b - 1] == i[b] and a == b + 1:
                    rhs = single(("e", i))
                else:
                    rhs = ()
                yield RelationCase("psi_y", i, lhs, rhs)
            q = quiver.q_poly(field, i[b - 1], i[b])
            yield RelationCase(
                "psi_square",
                i,
                single(("psi", b), ("psi", b), ("e", i)),
                single(("poly", _bivariate_at(q, n, (b, b + 1))), ("e", i)),
            )
        for b in range(1, n - 1):
            lhs = (
                (one, (("psi", b + 1), ("psi", b), ("psi", b + 1), ("e", i))),
                (-one, (("psi", b), ("psi", b + 1), ("psi", b), ("e", i))),
            )
            if i[b - 1] == i[b + 1]:
                q = quiver.q_poly(field, i[b - 1], i[b])
                num = _bivariate_at(q, n, (b, b + 1)) - _bivariate_at(
                    q, n, (b + 2, b + 1)
                )
                den = PolyN.variable(field, n, b) - PolyN.variable(field, n, b + 2)
                rhs = single(("poly", num.exact_divide(den)), ("e", i))
            else:
                rhs = ()
            yield RelationCase("braid3", i, lhs, rhs)


def sign_generator_cases(
    quiver: Quiver,
    params: Params,
    field: Field,
    n: int,
    sources: Sequence[tuple],
    act: Callable[[SignedPerm, tuple], tuple],
) -> Iterator[RelationCase]:
    """The extra relations of the type-B interpolation."""
    one = field.one
    theta = quiver.theta

    def single(*tokens) -> tuple:
        return ((one, tuple(tokens)),)

    r0 = generator(n, 0)
    for i in sources:
        gamma1 = params.gamma[i[0]]
        yield RelationCase(
            "psi0_e",
            i,
            single(("psi", 0), ("e", i)),
            single(("e", act(r0, i)), ("psi", 0)),
        )
        for b in range(2, n):
            yield RelationCase(
                "psi0_far_commute",
                i,
                single(("psi", 0), ("psi", b), ("e", i)),
                single(("psi", b), ("psi", 0), ("e", i)),
            )
        for a in range(2, n + 1):
            yield RelationCase(
                "psi0_y_far",
                i,
                single(("psi", 0), ("y", a), ("e", i)),
                single(("y", a), ("psi", 0), ("e", i)),
            )
        lhs = (
            (one, (("psi", 0), ("y", 1), ("e", i))),
            (one, (("y", 1), ("psi", 0), ("e", i))),
        )
        two_gamma = gamma1 + gamma1
        rhs = ((two_gamma, (("e", i),)),) if not two_gamma.is_zero() else ()
        yield RelationCase("psi0_y1", i, lhs, rhs)

        lhs = single(("psi", 0), ("psi", 0), ("e", i))
        if gamma1.is_zero():
            d = params.d_vertex(i[0])
            sign = field((-1) ** params.lam[theta[i[0]]])
            mono = PolyN(field, n, {(d,) + (0,) * (n - 1): sign})
            rhs = single(("poly", mono), ("e", i))
        else:
            rhs = ()
        yield RelationCase("psi0_square", i, lhs, rhs)

        if n >= 2:
            lhs = (
                (one, (("psi", 0), ("psi", 1), ("psi", 0), ("psi", 1), ("e", i))),
                (-one, (("psi", 1), ("psi", 0), ("psi", 1), ("psi", 0), ("e", i))),
            )
            gamma2 = params.gamma[i[1]]
            if gamma1.is_zero() and theta[i[0]] == i[1]:
                d = params.d_vertex(i[0])
                x1 = PolyN.variable(field, n, 1)
                x2 = PolyN.variable(field, n, 2)
                num = ((-x1) ** d if d else PolyN.const(field, n, 1)) - x2**d
                sign = field((-1) ** params.lam[theta[i[0]]])
                coeff = num.exact_divide(x1 + x2).scale(sign)
                rhs = (
                    ((one, (("poly", coeff), ("psi", 1), ("e", i))),)
                    if not coeff.is_zero()
                    else ()
                )
            elif gamma2.is_zero():
                rhs = ()
            else:
                q21 = quiver.q_poly(field, i[1], i[0])
                diff = _bivariate_at(q21, n, (1, 2), (1, -1)) - _bivariate_at(
                    q21, n, (1, 2)
                )
                terms = []
                if not diff.is_zero():
                    over_y2 = diff.exact_divide(PolyN.variable(field, n, 2))
                    terms.append(
                        (gamma2, (("poly", over_y2), ("psi", 0), ("e", i)))
                    )
                    if not gamma1.is_zero():
                        over_y1y2 = over_y2.exact_divide(
                            PolyN.variable(field, n, 1)
                        )
                        terms.append(
                            (-(gamma1 * gamma2), (("poly", over_y1y2), ("e", i)))
                        )
                rhs = tuple(terms)
            yield RelationCase("braid4", i, lhs, rhs)


def type_d_cases(
    quiver: Quiver,
    field: Field,
    n: int,
    sources: Sequence[tuple],
    act: Callable[[SignedPerm, tuple], tuple],
) -> Iterator[RelationCase]:
    """Relations of the type-D presentation (sign generator ``Psi0``)."""
    if n < 2:
        return
    one = field.one
    theta = quiver.theta

    def single(*tokens) -> tuple:
        return ((one, tuple(tokens)),)

    s0 = d_generator(n, 0)
    for i in sources:
        yield RelationCase(
            "D_psi0_e",
            i,
            single(("Psi0",), ("e", i)),
            single(("e", act(s0, i)), ("Psi0",)),
        )
        for b in range(1, n):
            if b == 2:
                continue
            yield RelationCase(
                "D_psi0_psi_commute",
                i,
                single(("Psi0",), ("psi", b), ("e", i)),
                single(("psi", b), ("Psi0",), ("e", i)),
            )
        for a in (1, 2):
            swapped = 2 if a == 1 else 1
            lhs = (
                (one, (("Psi0",), ("y", a), ("e", i))),
                (one, (("y", swapped), ("Psi0",), ("e", i))),
            )
            rhs = single(("e", i)) if theta[i[0]] == i[1] else ()
            yield RelationCase("D_psi0_y", i, lhs, rhs)
        for a in range(3, n + 1):
            yield RelationCase(
                "D_psi0_y_far",
                i,
                single(("Psi0",), ("y", a), ("e", i)),
                single(("y", a), ("Psi0",), ("e", i)),
            )
        q = quiver.q_poly(field, theta[i[0]], i[1])
        yield RelationCase(
            "D_psi0_square",
            i,
            single(("Psi0",), ("Psi0",), ("e", i)),
            single(("poly", _bivariate_at(q, n, (1, 2), (-1, 1))), ("e", i)),
        )
        if n >= 3:
            lhs = (
                (one, (("Psi0",), ("psi", 2), ("Psi0",), ("e", i))),
                (-one, (("psi", 2), ("Psi0",), ("psi", 2), ("e", i))),
            )
            if theta[i[0]] == i[2]:
                num = _bivariate_at(q, n, (1, 2), (-1, 1)) - _bivariate_at(
                    q, n, (3, 2)
                )
                den = PolyN.variable(field, n, 1) + PolyN.variable(field, n, 3)
                rhs = single(("poly", num.exact_divide(den)), ("e", i))
            else:
                rhs = ()
            yield RelationCase("D_braid3", i, lhs, rhs)


def algebra_cases(algebra: Algebra) -> Iterator[RelationCase]:
    """All defining relations of the given algebra, instance by instance."""
    yield from klr_cases(
        algebra.quiver,
        algebra.field,
        algebra.n,
        algebra.sources,
        algebra.space.act,
    )
    if algebra.mode == "B":
        yield from sign_generator_cases(
            algebra.quiver,
            algebra.params,
            algebra.field,
            algebra.n,
            algebra.sources,
            algebra.space.act,
        )


class OperatorContext:
    """Evaluate relation instances inside the twisted-operator realisation."""

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self._cache: dict = {}

    def value(self, token: Token) -> TwistedOp:
        head = token[0]
        if head == "poly":
            e = identity(self.algebra.n)
            coeff = self.algebra.space.coeff(token[1])
            return TwistedOp(
                self.algebra.space,
                {(i, e): coeff for i in self.algebra.sources},
            )
        out = self._cache.get(token)
        if out is None:
            if head == "e":
                out = self.algebra.gen_op("e", token[1])
            elif head == "y":
                out = self.algebra.gen_op("y", token[1])
            elif head == "psi":
                out = self.algebra.gen_op("psi", token[1])
            else:
                raise KeyError(f"operator context cannot evaluate {head}")
            self._cache[token] = out
        return out

    def combination(self, terms) -> TwistedOp:
        total = TwistedOp.zero(self.algebra.space)
        for coeff, tokens in terms:
            v = None
            for token in reversed(tokens):
                tv = self.value(token)
                v = tv if v is None else tv.compose(v)
            v = TwistedOp.one(self.algebra.space) if v is None else v
            total = total + v.scale(coeff)
        return total

    def holds(self, case: RelationCase) -> bool:
        return self.combination(case.lhs) == self.combination(case.rhs)


class ElementContext:
    """Evaluate relation instances through images in a host algebra.

    ``images`` maps token heads to functions: ``e`` takes the source tuple,
    ``y`` / ``psi`` take the index, ``Psi0`` takes no argument and ``poly``
    takes the coefficient polynomial (in the relation's own variables).
    """

    def __init__(self, host: Algebra, images: dict):
        self.host = host
        self.images = images
        self._cache: dict = {}

    def value(self, token: Token) -> Element:
        head = token[0]
        if head == "poly":
            return self.images["poly"](token[1])
        out = self._cache.get(token)
        if out is None:
            out = self.images[head](*token[1:])
            self._cache[token] = out
        return out

    def combination(self, terms) -> TwistedOp:
        total = TwistedOp.zero(self.host.space)
        for coeff, tokens in terms:
            v = None
            for token in reversed(tokens):
                tv = self.host.element_op(self.value(token))
                v = tv if v is None else tv.compose(v)
            v = self.host.element_op(self.host.one()) if v is None else v
            total = total + v.scale(coeff)
        return total

    def holds(self, case: RelationCase) -> bool:
        return self.combination(case.lhs) == self.combination(case.rhs)


def check_cases(ctx, cases: Iterable[RelationCase]) -> list[tuple[str, bool]]:
    """Sorted (label, passed) pairs for every instance."""
    results = [(case.label(), ctx.holds(case)) for case in cases]
    return sorted(results)


def homogeneity_report(algebra: Algebra) -> list[tuple[str, bool]]:
    """Check each relation instance is homogeneous: both sides expand to
    homogeneous elements of equal degree (or vanish)."""
    ctx = OperatorContext(algebra)
    out = []
    for case in algebra_cases(algebra):
        lhs = algebra.pbw_expand(ctx.combination(case.lhs))
        rhs = algebra.pbw_expand(ctx.combination(case.rhs))
        ok = lhs.is_homogeneous() and rhs.is_homogeneous()
        if ok and not lhs.is_zero() and not rhs.is_zero():
            ok = lhs.degree() == rhs.degree()
        out.append((case.label(), ok))
    return sorted(out)
