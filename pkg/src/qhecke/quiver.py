"""Quivers with involution, weight data, orbits and profile combinatorics.

A quiver is a finite loop-free directed multigraph on opaque string vertex
ids, together with an involution ``theta`` compatible with the arrows
(``|i -> j| = |theta(j) -> theta(i)|``).  From the arrow counts we derive the
bivariate polynomial pair ``Q`` / ``P`` that drives all quadratic and braid
relations, and from the weight data ``(lambda, gamma)`` the univariate sign
polynomials used by the extra generator of the type-B algebra.

The same module holds the combinatorics downstream modules consume: orbits of
tuples under S_n / B_n / D_n, their decomposition along a partition of the
vertex set into stable components, profiles with their minimal sorting
permutations, the scalar-valued quiver builders with eigenvalue orbits
``{x^e q^{2l}}``, and the normalised parameter-case classifiers for the
cyclotomic reduction in types B and D.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Optional, Sequence

from .coxeter import SignedPerm, act_tuple, d_generator, generator, min_coset_rep
from .field import Field, Scalar, mult_order
from .polynomials import PolyN


class UnknownVertex(KeyError):
    pass


class InvalidQuiver(ValueError):
    pass


class InvalidPFamily(ValueError):
    pass


class InvalidParams(ValueError):
    pass


class NotComponentStable(ValueError):
    pass


class NotFiniteField(TypeError):
    pass


class OverlappingOrbitSets(ValueError):
    pass


class DegenerateQ(ValueError):
    pass


class DegenerateParams(ValueError):
    pass


def _swap_uv(p: PolyN) -> PolyN:
    return p.act(SignedPerm((2, 1)))


def _neg_swap_uv(p: PolyN) -> PolyN:
    return p.act(SignedPerm((-2, -1)))


class Quiver:
    """Loop-free quiver on string vertex ids, optionally with an involution.

    Passing ``theta=None`` builds a plain quiver for type-A use; the stored
    involution is then the identity and the arrow-mirroring constraint is not
    imposed (nor may such a quiver be used with the groups B or D).
    """

    def __init__(
        self,
        vertices: Iterable[str],
        arrows: Iterable[tuple[str, str]],
        theta: Mapping[str, str] | None = None,
        p_override: Optional[Mapping[tuple[str, str], PolyN]] = None,
    ):
        self.vertices = tuple(dict.fromkeys(vertices))
        vset = set(self.vertices)
        self.arrows = tuple(tuple(a) for a in arrows)
        self.has_involution = theta is not None
        self.theta = dict(theta) if theta else {v: v for v in self.vertices}
        for v in self.vertices:
            self.theta.setdefault(v, v)
        self._arrow_count = Counter(self.arrows)
        self._p_override = dict(p_override) if p_override else None

        for o, t in self.arrows:
            if o == t:
                raise InvalidQuiver(f"1-loop at {o}")
            if o not in vset or t not in vset:
                raise UnknownVertex(f"arrow ({o}, {t}) leaves the vertex set")
        if self.has_involution:
            for v, w in self.theta.items():
                if v not in vset or w not in vset:
                    raise UnknownVertex(f"involution moves {v} outside the vertex set")
                if self.theta[w] != v:
                    raise InvalidQuiver(f"theta is not involutive at {v}")
            for i in self.vertices:
                for j in self.vertices:
                    if self.count(i, j) != self.count(self.theta[j], self.theta[i]):
                        raise InvalidQuiver(
                            f"arrow multiplicities not theta-compatible at ({i}, {j})"
                        )

    def _check_vertex(self, v: str):
        if v not in self.theta:
            raise UnknownVertex(v)

    def count(self, i: str, j: str) -> int:
        """Number of arrows i -> j."""
        return self._arrow_count.get((i, j), 0)

    def dot(self, i: str, j: str) -> int:
        return self.count(i, j) + self.count(j, i)

    def d_pair(self, i: str, j: str) -> int:
        """Degree carrier d(i, j): the arrow pairing, or -2 on the diagonal."""
        return self.dot(i, j) if i != j else -2

    def q_poly(self, field: Field, i: str, j: str) -> PolyN:
        """Quadratic-relation polynomial Q_ij(u, v) as a bivariate PolyN."""
        self._check_vertex(i)
        self._check_vertex(j)
        if i == j:
            return PolyN.zero(field, 2)
        u = PolyN.variable(field, 2, 1)
        v = PolyN.variable(field, 2, 2)
        sign = -1 if self.count(i, j) % 2 else 1
        return ((u - v) ** self.dot(i, j)).scale(field(sign))

    def p_poly(self, field: Field, i: str, j: str) -> PolyN:
        """Intertwiner coefficient P_ij(u, v); defaults to (u - v)^|j -> i|."""
        self._check_vertex(i)
        self._check_vertex(j)
        if self._p_override is not None:
            poly = self._p_override.get((i, j))
            if poly is not None:
                if poly.field is not field:
                    raise InvalidPFamily("override has the wrong scalar field")
                return poly
        if i == j:
            return PolyN.zero(field, 2)
        u = PolyN.variable(field, 2, 1)
        v = PolyN.variable(field, 2, 2)
        return (u - v) ** self.count(j, i)

    def validate_p_family(self, field: Field) -> None:
        """Check the structural identities tying P to Q (and, when an
        involution is carried, to theta)."""
        for i in self.vertices:
            for j in self.vertices:
                p = self.p_poly(field, i, j)
                if i == j:
                    if not p.is_zero():
                        raise InvalidPFamily(f"P_({i},{i}) must vanish")
                    continue
                if p.is_zero():
                    raise InvalidPFamily(f"P_({i},{j}) must be nonzero")
                if p * _swap_uv(self.p_poly(field, j, i)) != self.q_poly(field, i, j):
                    raise InvalidPFamily(f"P_({i},{j}) P_({j},{i}) != Q_({i},{j})")
                if not self.has_involution:
                    continue
                if p != _neg_swap_uv(p):
                    raise InvalidPFamily(f"P_({i},{j})(u,v) != P_({i},{j})(-v,-u)")
                if p != self.p_poly(field, self.theta[j], self.theta[i]):
                    raise InvalidPFamily(f"P_({i},{j}) not theta-symmetric")


class Params:
    """Vertex weights: multiplicities ``lambda`` and scalars ``gamma``."""

    def __init__(
        self,
        quiver: Quiver,
        field: Field,
        lam: Mapping[str, int] | None = None,
        gamma: Mapping[str, Scalar | int | str] | None = None,
    ):
        self.quiver = quiver
        self.field = field
        self.lam = {v: 0 for v in quiver.vertices}
        self.lam.update(lam or {})
        self.gamma = {v: field.zero for v in quiver.vertices}
        for v, g in (gamma or {}).items():
            self.gamma[v] = field(g)
        theta = quiver.theta
        for v in quiver.vertices:
            if self.lam[v] < 0:
                raise InvalidParams(f"lambda_{v} < 0")
            if theta[v] != v and not self.gamma[v].is_zero():
                raise InvalidParams(f"gamma_{v} must vanish: {v} is not theta-fixed")
            if self.gamma[v] != self.gamma[theta[v]]:
                raise InvalidParams(f"gamma is not theta-invariant at {v}")
            if self.gamma[v].is_zero() and theta[v] == v and self.d_vertex(v) != 0:
                raise InvalidParams(
                    f"gamma_{v} = 0 with theta-fixed {v} needs lambda_{v} = 0"
                )

    def d_vertex(self, i: str) -> int:
        """Degree of the sign generator at source entry ``i``."""
        if self.gamma[i].is_zero():
            return self.lam[i] + self.lam[self.quiver.theta[i]]
        return -2

    def is_zero(self) -> bool:
        return all(l == 0 for l in self.lam.values()) and all(
            g.is_zero() for g in self.gamma.values()
        )

    def alpha_poly(self, i: str) -> PolyN:
        """Univariate alpha_i(y): ``y^{lambda_theta(i)}`` or zero."""
        if not self.gamma[i].is_zero():
            return PolyN.zero(self.field, 1)
        y = PolyN.variable(self.field, 1, 1)
        return y ** self.lam[self.quiver.theta[i]]


class CycWeight:
    """Finitely supported nonnegative vertex weights for cyclotomic quotients."""

    def __init__(self, weights: Mapping[str, int]):
        self.weights = {v: w for v, w in weights.items() if w}
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("cyclotomic weights must be nonnegative")

    def __getitem__(self, v: str) -> int:
        return self.weights.get(v, 0)

    def tilde(self, quiver: Quiver) -> "CycWeight":
        """Symmetrised weight min(Lambda_i, Lambda_theta(i))."""
        return CycWeight(
            {v: min(self[v], self[quiver.theta[v]]) for v in self.weights}
        )

    def restrict(self, vertices: Iterable[str]) -> "CycWeight":
        keep = set(vertices)
        return CycWeight({v: w for v, w in self.weights.items() if v in keep})

    def is_zero_on(self, vertices: Iterable[str]) -> bool:
        return all(self[v] == 0 for v in vertices)


@dataclass(frozen=True)
class Orbit:
    """Finite set of vertex tuples closed under the tagged group action."""

    group: str  # "S" | "B" | "D"
    n: int
    tuples: frozenset

    def __iter__(self):
        return iter(sorted(self.tuples))

    def __len__(self):
        return len(self.tuples)

    def __contains__(self, tup):
        return tup in self.tuples


def group_generators(group: str, n: int) -> list[SignedPerm]:
    if group == "S":
        return [generator(n, a) for a in range(1, n)]
    if group == "B":
        return [generator(n, a) for a in range(n)]
    if group == "D":
        gens = [generator(n, a) for a in range(1, n)]
        if n >= 2:
            gens.append(d_generator(n, 0))
        return gens
    raise ValueError(f"unknown group tag {group!r}")


def orbit(quiver: Quiver, seed: Sequence[str], group: str = "B") -> Orbit:
    """Closure of ``seed`` under the tagged group action on tuples."""
    seed = tuple(seed)
    for v in seed:
        quiver._check_vertex(v)
    if group in ("B", "D") and not quiver.has_involution:
        raise InvalidQuiver(f"group {group} needs a quiver with involution")
    n = len(seed)
    gens = group_generators(group, n)
    theta = quiver.theta.get
    seen = {seed}
    frontier = [seed]
    while frontier:
        tup = frontier.pop()
        for g in gens:
            nxt = act_tuple(g, tup, theta)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return Orbit(group, n, frozenset(seen))


def all_orbits(quiver: Quiver, n: int, group: str = "B") -> list[Orbit]:
    """All orbits of I^n under the tagged group, sorted by least element."""
    remaining = set(itertools.product(quiver.vertices, repeat=n))
    out = []
    while remaining:
        seed = min(remaining)
        orb = orbit(quiver, seed, group)
        remaining -= orb.tuples
        out.append(orb)
    return sorted(out, key=lambda o: min(o.tuples))


def check_partition(quiver: Quiver, partition: Mapping[str, int]) -> int:
    """Validate a partition of the vertex set into stable full components."""
    blocks = set()
    for v in quiver.vertices:
        if v not in partition:
            raise NotComponentStable(f"vertex {v} has no component")
        blocks.add(partition[v])
        if partition[quiver.theta[v]] != partition[v]:
            raise NotComponentStable(f"theta crosses components at {v}")
    for o, t in quiver.arrows:
        if partition[o] != partition[t]:
            raise NotComponentStable(f"arrow ({o}, {t}) crosses components")
    d = len(blocks)
    if blocks != set(range(1, d + 1)):
        raise NotComponentStable("components must be labelled 1..d")
    return d


def subquiver(quiver: Quiver, keep: Iterable[str]) -> Quiver:
    keep = set(keep)
    return Quiver(
        [v for v in quiver.vertices if v in keep],
        [a for a in quiver.arrows if a[0] in keep],
        (
            {v: w for v, w in quiver.theta.items() if v in keep}
            if quiver.has_involution
            else None
        ),
        p_override=(
            {k: p for k, p in quiver._p_override.items() if set(k) <= keep}
            if quiver._p_override
            else None
        ),
    )


def component_sizes(
    orb: Orbit, partition: Mapping[str, int], d: int
) -> tuple[int, ...]:
    counts = None
    for tup in orb.tuples:
        c = tuple(sum(1 for v in tup if partition[v] == j) for j in range(1, d + 1))
        if counts is None:
            counts = c
        elif counts != c:
            raise NotComponentStable("component counts vary over the orbit")
    return counts or (0,) * d


def orbit_components(
    quiver: Quiver, orb: Orbit, partition: Mapping[str, int]
) -> tuple[tuple[int, ...], list[Orbit]]:
    """Split an orbit along the components; each piece is a full orbit."""
    d = check_partition(quiver, partition)
    sizes = component_sizes(orb, partition, d)
    pieces = []
    for j in range(1, d + 1):
        tuples = frozenset(
            tuple(v for v in tup if partition[v] == j) for tup in orb.tuples
        )
        pieces.append(Orbit(orb.group, sizes[j - 1], tuples))
    return sizes, pieces


def rebuild_orbit(
    quiver: Quiver, group: str, pieces: Sequence[Orbit]
) -> Orbit:
    """Smallest stable subset containing all concatenations of the pieces."""
    tuples = set()
    for combo in itertools.product(*(sorted(p.tuples) for p in pieces)):
        concat = tuple(itertools.chain.from_iterable(combo))
        tuples |= orbit(quiver, concat, group).tuples
    n = sum(p.n for p in pieces)
    return Orbit(group, n, frozenset(tuples))


@dataclass(frozen=True)
class ProfileData:
    """Profiles of an orbit under a partition, with sorting permutations."""

    d: int
    sizes: tuple[int, ...]
    profiles: tuple[tuple[int, ...], ...]
    sorted_profile: tuple[int, ...]
    fibers: Mapping[tuple[int, ...], frozenset]
    pi: Mapping[tuple[int, ...], SignedPerm]

    def profile_of(self, tup, partition) -> tuple[int, ...]:
        return tuple(partition[v] for v in tup)


def profiles(quiver: Quiver, orb: Orbit, partition: Mapping[str, int]) -> ProfileData:
    d = check_partition(quiver, partition)
    sizes = component_sizes(orb, partition, d)
    fibers: dict[tuple[int, ...], set] = {}
    for tup in orb.tuples:
        prof = tuple(partition[v] for v in tup)
        fibers.setdefault(prof, set()).add(tup)
    profs = tuple(sorted(fibers))
    sorted_profile = tuple(
        j for j in range(1, d + 1) for _ in range(sizes[j - 1])
    )
    pi = {prof: min_coset_rep(prof) for prof in profs}
    return ProfileData(
        d,
        sizes,
        profs,
        sorted_profile,
        {p: frozenset(t) for p, t in fibers.items()},
        pi,
    )


def multinomial(n: int, parts: Sequence[int]) -> int:
    import math

    out = math.factorial(n)
    for p in parts:
        out //= math.factorial(p)
    return out


# -- scalar-valued quivers and the cyclotomic parameter cases -----------------


def eigenvalue_orbit(x: Scalar, q: Scalar) -> frozenset:
    """The set {x^e q^{2l}} in a prime field: q^2-orbit closed under inversion."""
    q2 = q * q
    out = set()
    for start in (x, x.inv()):
        v = start
        while v not in out:
            out.add(v)
            v = v * q2
    return frozenset(out)


def build_hecke_quiver(
    char: int,
    q,
    xs: Sequence,
    p=None,
    mode: str = "B",
) -> tuple[Quiver, Params, Field]:
    """Quiver with vertex set the union of eigenvalue orbits ``I_{x_a}``.

    Arrows run ``v -> q^2 v``; the involution is scalar inversion.  Mode "B"
    puts multiplicity 1 at the vertices ``{+p, -p}`` and gamma 1 at the
    inversion-fixed vertices; mode "D" uses zero weights throughout.
    """
    if not char:
        raise NotFiniteField("eigenvalue orbits are only finite over F_p")
    field = Field(char)
    q = field(q)
    if (q * q) == field.one:
        raise DegenerateQ("q^2 = 1")
    if mode not in ("B", "D"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "B":
        if p is None:
            raise DegenerateParams("mode B needs the parameter p")
        p = field(p)
        if p * p == field.one:
            raise DegenerateParams("p^2 = 1")

    orbits_x = []
    union: set = set()
    for x in xs:
        ox = eigenvalue_orbit(field(x), q)
        if union & ox:
            raise OverlappingOrbitSets("eigenvalue orbits overlap")
        union |= ox
        orbits_x.append(ox)

    def vid(s: Scalar) -> str:
        return str(s.value)

    vertices = [vid(s) for ox in orbits_x for s in sorted(ox, key=lambda t: t.value)]
    scalars = {vid(s): s for ox in orbits_x for s in ox}
    q2 = q * q
    # q^2 v != v since q^2 != 1, so no 1-loops arise
    arrows = [(v, vid(scalars[v] * q2)) for v in vertices]
    theta = {v: vid(scalars[v].inv()) for v in vertices}
    quiver = Quiver(vertices, arrows, theta)

    if mode == "B":
        special = {vid(p), vid(-p)} & set(vertices)
        lam = {v: 1 for v in special}
        gamma = {v: field.one for v in vertices if theta[v] == v}
        params = Params(quiver, field, lam, gamma)
    else:
        params = Params(quiver, field, {}, {})
    return quiver, params, field


@dataclass(frozen=True)
class MoritaCase:
    """Normalised parameter case with the normalising data used."""

    case: str
    sign: int | None = None
    exponent: int | None = None
    shift: int | None = None
    q2_order_odd: bool | None = None
    b_equivalent_to_a: bool | None = None


def _pm_power_split(x: Scalar, q: Scalar) -> tuple[int, int] | None:
    """Minimal k >= 0 with x = s q^k, s in {1, -1}; None if no such k."""
    power = x.field.one
    for k in range(mult_order(q)):
        if x == power:
            return (1, k)
        if x == -power:
            return (-1, k)
        power = power * q
    return None


def _pm_even_power_split(x: Scalar, q: Scalar) -> tuple[int, int] | None:
    """Some (s, l) with x = s q^{2l}, s in {1, -1}; None if x not in +-q^{2Z}."""
    q2 = q * q
    power = x.field.one
    for l in range(mult_order(q2)):
        if x == power:
            return (1, l)
        if x == -power:
            return (-1, l)
        power = power * q2
    return None


def classify_morita_B(x: Scalar, q: Scalar, p: Scalar) -> MoritaCase:
    """Normalised case of the eigenvalue set I_x relative to q and p.

    Inside ``+-q^Z`` the label follows the parity of the minimal exponent, so
    ``x = q`` is always case "b" even when an even representation exists too
    (the collapse is what the type-D flag reports).  Case "c" asks for any
    representation ``x = s p^e q^{2l}``.
    """
    field = x.field
    if field.p is None:
        raise NotFiniteField("classification runs over a prime field")
    if q * q == field.one or p * p == field.one:
        raise DegenerateParams("q^2 = 1 or p^2 = 1")
    split = _pm_power_split(x, q)
    if split is not None:
        sign, k = split
        if k % 2 == 0:
            return MoritaCase("a", sign=sign, shift=k // 2)
        return MoritaCase("b", sign=sign, shift=(k - 1) // 2)
    for exponent in (1, -1):
        even = _pm_even_power_split(x / p**exponent, q)
        if even is not None:
            return MoritaCase("c", sign=even[0], exponent=exponent, shift=even[1])
    return MoritaCase("d")


def classify_morita_D(x: Scalar, q: Scalar) -> MoritaCase:
    """Normalised case for type D, with the odd-order-of-q^2 equivalence flag."""
    field = x.field
    if field.p is None:
        raise NotFiniteField("classification runs over a prime field")
    if q * q == field.one:
        raise DegenerateParams("q^2 = 1")
    odd = mult_order(q * q) % 2 == 1
    split = _pm_power_split(x, q)
    if split is None:
        return MoritaCase("c", q2_order_odd=odd, b_equivalent_to_a=False)
    sign, k = split
    case = "a" if k % 2 == 0 else "b"
    return MoritaCase(
        case,
        sign=sign,
        shift=k // 2,
        q2_order_odd=odd,
        b_equivalent_to_a=(case == "b" and odd),
    )


def involution_quivers_isomorphic(q1: Quiver, q2: Quiver) -> bool:
    """Search for a bijection of vertices preserving arrows and theta."""
    if len(q1.vertices) != len(q2.vertices) or len(q1.arrows) != len(q2.arrows):
        return False
    verts1 = list(q1.vertices)
    verts2 = list(q2.vertices)

    def extend(assignment: dict) -> bool:
        if len(assignment) == len(verts1):
            return all(
                q1.count(i, j) == q2.count(assignment[i], assignment[j])
                for i in verts1
                for j in verts1
            )
        v = next(u for u in verts1 if u not in assignment)
        used = set(assignment.values())
        for w in verts2:
            if w in used:
                continue
            assignment[v] = w
            img_theta = assignment.get(q1.theta[v])
            ok = img_theta is None or img_theta == q2.theta[w]
            partial = ok and all(
                q1.count(v, u) == q2.count(w, assignment[u])
                and q1.count(u, v) == q2.count(assignment[u], w)
                for u in assignment
                if u != v
            )
            if partial and extend(assignment):
                return True
            del assignment[v]
        return False

    return extend({})
