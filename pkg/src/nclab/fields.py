"""Exact ground fields: arbitrary-precision rationals and prime fields F_p.

A ``Field`` is a lightweight descriptor (characteristic 0 for the rationals,
otherwise a prime modulus).  A ``Scalar`` is an immutable field element; all
arithmetic is exact and no floating point appears anywhere in the engine.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZero, FieldMismatch, InvalidField

#: Degree of the zero polynomial: a totally-ordered sentinel below every int.
NEG_INF = float("-inf")

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Ground field tag: ``Field(0)`` is Q, ``Field(p)`` is F_p for prime p."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p != 0 and not is_prime(p):
            raise InvalidField(f"modulus {p} is not prime")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @property
    def characteristic(self) -> int:
        return self.p

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    # -- element construction ------------------------------------------------

    def scalar(self, value) -> Scalar:
        """Coerce an int, Fraction, Scalar or literal string into this field."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"cannot coerce {value!r} into {self!r}")
            return value
        if isinstance(value, str):
            return self._from_str(value)
        if isinstance(value, Fraction):
            if self.p == 0:
                return Scalar(self, value)
            num = value.numerator % self.p
            den = value.denominator % self.p
            if den == 0:
                raise DivisionByZero(f"denominator of {value} vanishes mod {self.p}")
            return Scalar(self, num * pow(den, -1, self.p) % self.p)
        if isinstance(value, int):
            return Scalar(self, Fraction(value) if self.p == 0 else value % self.p)
        raise TypeError(f"cannot build a scalar from {value!r}")

    def _from_str(self, text: str) -> Scalar:
        text = text.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return self.scalar(Fraction(int(num), int(den)))
        return self.scalar(int(text))

    @property
    def zero(self) -> Scalar:
        return self.scalar(0)

    @property
    def one(self) -> Scalar:
        return self.scalar(1)

    def to_dict(self):
        if self.p == 0:
            return {"kind": "rational"}
        return {"kind": "prime", "p": self.p}

    @staticmethod
    def from_dict(obj) -> Field:
        if obj.get("kind") == "rational":
            return QQ
        return Field(int(obj["p"]))


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class Scalar:
    """Immutable exact field element.

    Over Q the value is a ``Fraction`` (always in lowest terms with positive
    denominator); over F_p it is the residue in ``[0, p)``.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _check(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            raise TypeError(f"expected Scalar, got {other!r}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        v = self.value + other.value
        return Scalar(self.field, v if self.field.p == 0 else v % self.field.p)

    def __sub__(self, other):
        other = self._check(other)
        v = self.value - other.value
        return Scalar(self.field, v if self.field.p == 0 else v % self.field.p)

    def __mul__(self, other):
        other = self._check(other)
        v = self.value * other.value
        return Scalar(self.field, v if self.field.p == 0 else v % self.field.p)

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __neg__(self):
        v = -self.value
        return Scalar(self.field, v if self.field.p == 0 else v % self.field.p)

    def inverse(self) -> Scalar:
        if not self:
            raise DivisionByZero("scalar division by zero")
        if self.field.p == 0:
            return Scalar(self.field, 1 / self.value)
        return Scalar(self.field, pow(self.value, -1, self.field.p))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if self.field.p == 0:
            return Scalar(self.field, self.value**exponent)
        return Scalar(self.field, pow(self.value, exponent, self.field.p))

    def __bool__(self):
        return self.value != 0

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other):
        return (
            isinstance(other, Scalar)
            and self.field == other.field
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Scalar({self.field!r}, {self.value})"
