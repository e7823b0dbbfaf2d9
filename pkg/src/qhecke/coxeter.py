"""Weyl groups S_n, D_n and B_n as signed permutations.

A signed permutation ``w`` of rank ``n`` is stored by the tuple of images of
``1..n`` inside ``{-n..-1, 1..n}``; the images of negative arguments follow
from ``w(-k) = -w(k)``.  The Coxeter generators are ``r_0 = (1,-1)`` and
``r_a = (a, a+1)(-a, -a-1)``.

Every element carries a canonical reduced word, the normal form
``w = u_n ... u_1`` with ``u_m = t_a^e r_a ... r_{m-1}`` and
``t_a = (a,-a)``; all PBW data in the algebra layer is pinned to this word.
The number of occurrences of letter ``0`` in any reduced word of ``w`` is an
invariant of ``w`` (it equals the number of sign changes), exposed as
:func:`r0_count`.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Sequence


class SizeMismatch(ValueError):
    """Operands of different rank."""


class SignedPerm:
    """Element of B_n, immutable and hashable."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        n = len(images)
        if sorted(abs(c) for c in images) != list(range(1, n + 1)):
            raise ValueError(f"not a signed permutation: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("SignedPerm is immutable")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        if k > 0:
            return self.images[k - 1]
        return -self.images[-k - 1]

    def __eq__(self, other):
        return isinstance(other, SignedPerm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"SignedPerm({list(self.images)})"

    def __str__(self):
        return "[" + ",".join(str(c) for c in self.images) + "]"

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def is_unsigned(self) -> bool:
        """True iff the element lies in S_n (no sign flips)."""
        return all(c > 0 for c in self.images)

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        return compose(self, other)

    def inverse(self) -> "SignedPerm":
        images = [0] * self.n
        for k, c in enumerate(self.images, start=1):
            if c > 0:
                images[c - 1] = k
            else:
                images[-c - 1] = -k
        return SignedPerm(images)


def identity(n: int) -> SignedPerm:
    return SignedPerm(range(1, n + 1))


def generator(n: int, a: int) -> SignedPerm:
    """The Coxeter generator r_a of B_n, ``a`` in ``0..n-1``."""
    if not 0 <= a <= n - 1:
        raise ValueError(f"generator r_{a} does not exist in B_{n}")
    images = list(range(1, n + 1))
    if a == 0:
        images[0] = -1
    else:
        images[a - 1], images[a] = images[a], images[a - 1]
    return SignedPerm(images)


def d_generator(n: int, a: int) -> SignedPerm:
    """Generator s_a of D_n: ``s_0 = r_0 r_1 r_0`` and ``s_a = r_a`` else."""
    if a == 0:
        if n < 2:
            raise ValueError("s_0 needs n >= 2")
        r0, r1 = generator(n, 0), generator(n, 1)
        return compose(compose(r0, r1), r0)
    return generator(n, a)


def compose(u: SignedPerm, v: SignedPerm) -> SignedPerm:
    """(u v)(k) = u(v(k))."""
    if u.n != v.n:
        raise SizeMismatch(f"rank {u.n} vs {v.n}")
    return SignedPerm(tuple(u(c) for c in v.images))


def evaluate_word(n: int, word: Iterable[int]) -> SignedPerm:
    """Product ``r_{a_1} r_{a_2} ... r_{a_k}`` of the letters of ``word``."""
    w = identity(n)
    for a in word:
        w = compose(w, generator(n, a))
    return w


def length(w: SignedPerm) -> int:
    """Coxeter length from the inversion formula of type B."""
    n = w.n
    inv = sum(
        1 for i in range(1, n + 1) for j in range(i + 1, n + 1) if w(i) > w(j)
    )
    neg = sum(
        1 for i in range(1, n + 1) for j in range(i, n + 1) if w(-i) > w(j)
    )
    return inv + neg


def _t_word(a: int) -> list[int]:
    # t_a = (a, -a) = r_{a-1} ... r_1 r_0 r_1 ... r_{a-1}
    return list(range(a - 1, 0, -1)) + [0] + list(range(1, a))


@lru_cache(maxsize=None)
def _canonical_word(images: tuple[int, ...]) -> tuple[int, ...]:
    n = len(images)
    w = SignedPerm(images)
    word: list[int] = []
    for m in range(n, 0, -1):
        c = w(m)
        a = abs(c)
        part = (_t_word(a) if c < 0 else []) + list(range(a, m))
        word.extend(part)
        u = evaluate_word(n, part)
        w = compose(u.inverse(), w)
    assert w.is_identity()
    return tuple(word)


def canonical_word(w: SignedPerm) -> tuple[int, ...]:
    """The pinned normal-form reduced word of ``w`` (letters in 0..n-1)."""
    return _canonical_word(w.images)


def r0_count(w: SignedPerm) -> int:
    """Occurrences of letter 0 in any reduced word of ``w``."""
    return sum(1 for a in canonical_word(w) if a == 0)


def in_Dn(w: SignedPerm) -> bool:
    """Membership in D_n, i.e. an even number of sign changes."""
    return sum(1 for c in w.images if c < 0) % 2 == 0


def embed_blocks(ws: Sequence[SignedPerm]) -> SignedPerm:
    """Image of ``(w_1, ..., w_d)`` under B_{n_1} x ... x B_{n_d} -> B_n.

    Block ``j`` permutes the letters ``k+1 .. k+n_j`` (``k = n_1+...+n_{j-1}``)
    with the sign pattern of ``w_j``; lengths add up and canonical words of
    the factors map onto subwords of the canonical word of the image.
    """
    images: list[int] = []
    offset = 0
    for w in ws:
        for c in w.images:
            images.append(c + offset if c > 0 else c - offset)
        offset += w.n
    return SignedPerm(images)


def shift_word(word: Iterable[int], offset: int) -> list[int]:
    """Block-embedding on words: letter ``a >= 1`` shifts by ``offset``,
    letter ``0`` becomes the palindrome ``offset ... 1 0 1 ... offset``."""
    out: list[int] = []
    for a in word:
        if a == 0:
            out.extend(range(offset, 0, -1))
            out.append(0)
            out.extend(range(1, offset + 1))
        else:
            out.append(a + offset)
    return out


def min_coset_rep(profile: Sequence[int]) -> SignedPerm:
    """Minimal-length unsigned permutation sorting ``profile`` stably.

    Returns the unique shortest ``pi`` in S_n with ``pi . profile`` weakly
    increasing, where the action permutes places: ``(pi . t)_k = t_{pi^-1(k)}``.
    """
    n = len(profile)
    order = sorted(range(n), key=lambda k: (profile[k], k))
    images = [0] * n
    for pos, k in enumerate(order, start=1):
        images[k] = pos
    return SignedPerm(images)


def act_tuple(w: SignedPerm, tup: tuple, theta: Callable) -> tuple:
    """Left action of B_n on I^n: places are permuted and a sign flip at a
    slot applies the involution ``theta`` to the entry landing there."""
    if w.n != len(tup):
        raise SizeMismatch(f"rank {w.n} vs tuple of length {len(tup)}")
    winv = w.inverse()
    out = []
    for k in range(1, w.n + 1):
        c = winv(k)
        out.append(tup[c - 1] if c > 0 else theta(tup[-c - 1]))
    return tuple(out)


def all_elements(n: int) -> list[SignedPerm]:
    """All ``2^n n!`` elements of B_n, via the normal-form enumeration."""
    # u_m ranges over R^(m): products t_a^e r_a ... r_{m-1}, a <= m.
    partial = [identity(n)]
    for m in range(1, n + 1):
        new = []
        for w in partial:
            for a in range(1, m + 1):
                for eps in (0, 1):
                    part = (_t_word(a) if eps else []) + list(range(a, m))
                    u = evaluate_word(n, part)
                    new.append(compose(u, w))
        partial = new
    return partial
