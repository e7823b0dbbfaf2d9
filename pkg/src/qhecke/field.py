"""Exact scalar arithmetic: arbitrary-precision rationals and odd prime fields.

Every coefficient in the package is a :class:`Scalar` attached to a
:class:`Field`, which is either the rationals (``characteristic 0``) or the
prime field ``F_p`` for an odd prime ``p``.  Characteristic 2 is rejected at
construction: the sign involution on the type-D side needs ``1/2``.

Scalars are immutable and normalised (rationals in lowest terms with positive
denominator, residues in ``[0, p)``), so equality is plain representational
equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class BackendMismatch(TypeError):
    """Mixed arithmetic between scalars of different fields."""


class DivisionByZero(ZeroDivisionError):
    """Inversion or division by the zero scalar."""


class ZeroElement(ValueError):
    """Multiplicative order of zero requested."""


class WrongBackend(TypeError):
    """Operation requires the other scalar backend (e.g. order over Q)."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


class Field:
    """The rationals (``p is None``) or the prime field ``F_p``, ``p`` odd."""

    __slots__ = ("p",)
    _cache: dict = {}

    def __new__(cls, p: int | None = None):
        if p in cls._cache:
            return cls._cache[p]
        if p is not None:
            if p == 2:
                raise ValueError("characteristic 2 is not supported")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        self = object.__new__(cls)
        self.p = p
        cls._cache[p] = self
        return self

    @property
    def characteristic(self) -> int:
        return self.p or 0

    def __repr__(self):
        return "Field(Q)" if self.p is None else f"Field(F_{self.p})"

    def __call__(self, value: Union[int, Fraction, str, "Scalar"]) -> "Scalar":
        """Coerce an int, Fraction, text form or Scalar into this field."""
        if isinstance(value, Scalar):
            if value.field is not self:
                raise BackendMismatch(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if self.p is None:
            return Scalar(self, Fraction(value))
        if isinstance(value, Fraction):
            den = pow(value.denominator % self.p, self.p - 2, self.p)
            return Scalar(self, value.numerator * den % self.p)
        return Scalar(self, value % self.p)

    def parse(self, text: str) -> "Scalar":
        """Inverse of ``str(scalar)``: ``"a/b"`` over Q, ``"r mod p"`` over F_p."""
        text = text.strip()
        if "mod" in text:
            r, p = text.split("mod")
            if self.p is None or int(p) != self.p:
                raise BackendMismatch(f"{text!r} does not live in {self!r}")
            return self(int(r))
        if self.p is None:
            return Scalar(self, Fraction(text))
        if "/" in text:
            a, b = text.split("/")
            return self(int(a)) / self(int(b))
        return self(int(text))

    @property
    def zero(self) -> "Scalar":
        return self(0)

    @property
    def one(self) -> "Scalar":
        return self(1)


RATIONALS = Field()


class Scalar:
    """Immutable field element; all arithmetic is exact and normalised."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = value

    def _check(self, other: "Scalar"):
        if not isinstance(other, Scalar):
            raise BackendMismatch(f"cannot mix Scalar with {type(other).__name__}")
        if other.field is not self.field:
            raise BackendMismatch(f"cannot mix {self.field!r} and {other.field!r}")

    def is_zero(self) -> bool:
        return not self.value

    def __bool__(self):
        return bool(self.value)

    def __add__(self, other):
        self._check(other)
        p = self.field.p
        v = self.value + other.value
        return Scalar(self.field, v if p is None else v % p)

    def __sub__(self, other):
        self._check(other)
        p = self.field.p
        v = self.value - other.value
        return Scalar(self.field, v if p is None else v % p)

    def __mul__(self, other):
        self._check(other)
        p = self.field.p
        v = self.value * other.value
        return Scalar(self.field, v if p is None else v % p)

    def __neg__(self):
        p = self.field.p
        return Scalar(self.field, -self.value if p is None else -self.value % p)

    def inv(self) -> "Scalar":
        if not self.value:
            raise DivisionByZero("inverse of zero")
        p = self.field.p
        if p is None:
            return Scalar(self.field, 1 / self.value)
        return Scalar(self.field, pow(self.value, p - 2, p))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        p = self.field.p
        if p is None:
            return Scalar(self.field, self.value**k)
        return Scalar(self.field, pow(self.value, k, p))

    def __eq__(self, other):
        return (
            isinstance(other, Scalar)
            and self.field is other.field
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __str__(self):
        if self.field.p is None:
            return str(self.value)
        return f"{self.value} mod {self.field.p}"

    def __repr__(self):
        return f"Scalar({self})"


def mult_order(a: Scalar) -> int:
    """Least ``k >= 1`` with ``a**k == 1``, for a nonzero prime-field scalar."""
    if a.field.p is None:
        raise WrongBackend("multiplicative order needs a prime-field scalar")
    if a.is_zero():
        raise ZeroElement("zero has no multiplicative order")
    k, power = 1, a
    one = a.field.one
    while power != one:
        power = power * a
        k += 1
    return k
